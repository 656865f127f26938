#include "hdemb/encoder.hpp"

#include "hdemb/errors.hpp"

namespace hdemb {

std::string to_string(EmbeddingKind kind) {
  switch (kind) {
    case EmbeddingKind::thermometer: return "thermometer";
    case EmbeddingKind::gray2: return "gray2";
    case EmbeddingKind::random_projection: return "random_projection";
    case EmbeddingKind::learned: return "learned";
  }
  return "unknown";
}

EmbeddingKind parse_embedding_kind(const std::string& name) {
  if (name == "thermometer") return EmbeddingKind::thermometer;
  if (name == "gray2" || name == "gray") return EmbeddingKind::gray2;
  if (name == "random_projection" || name == "rp") return EmbeddingKind::random_projection;
  if (name == "learned") return EmbeddingKind::learned;
  throw InvalidArgument("unknown embedding kind '" + name + "'");
}

ItemMemory band_item_memory(std::size_t n_bands, std::size_t dim, RngSeed im_seed) {
  return ItemMemory::random(n_bands, dim, im_seed);
}

Accumulator encode_trial_accumulate(const BandedFeatures& banded, const Embedder& embedder, const ItemMemory& bands) {
  if (static_cast<std::size_t>(banded.cols()) != bands.size()) {
    throw InvalidArgument("encode_trial: " + std::to_string(banded.cols()) + " bands of features but " +
                          std::to_string(bands.size()) + " band hypervectors");
  }
  if (static_cast<std::size_t>(banded.rows()) != embedder.input_dim()) {
    throw InvalidArgument("encode_trial: feature length " + std::to_string(banded.rows()) + ", embedder expects " +
                          std::to_string(embedder.input_dim()));
  }
  if (embedder.dim() != bands.dim()) throw InvalidArgument("encode_trial: embedder and item memory differ in dim");
  Accumulator acc(bands.dim());
  for (Eigen::Index b = 0; b < banded.cols(); ++b) {
    acc.add(bind(embedder.embed(banded.col(b)), bands[static_cast<std::size_t>(b)]));
  }
  return acc;
}

EncodedTrial encode_trial(const BandedFeatures& banded, const Embedder& embedder, const ItemMemory& bands,
                          const EncoderConfig& cfg, Rng& ties) {
  Accumulator acc = encode_trial_accumulate(banded, embedder, bands);
  if (!cfg.clip_output) return acc;
  return binarize(acc, ties);
}

Hypervector as_hypervector(const EncodedTrial& encoded, Rng& ties) {
  if (const auto* hv = std::get_if<Hypervector>(&encoded)) return *hv;
  return binarize(std::get<Accumulator>(encoded), ties);
}

}  // namespace hdemb
