#pragma once

// Spatial encoder: every band's feature vector goes through the shared
// embedding, is bound to its band hypervector and bundled across bands.

#include <cstddef>
#include <cstdint>
#include <string>

#include "hdemb/associative_memory.hpp"
#include "hdemb/item_memory.hpp"
#include "hdemb/types.hpp"

namespace hdemb {

enum class EmbeddingKind { thermometer, gray2, random_projection, learned };

std::string to_string(EmbeddingKind kind);
EmbeddingKind parse_embedding_kind(const std::string& name);

struct EncoderConfig {
  EmbeddingKind embedding_kind = EmbeddingKind::thermometer;
  std::size_t dim = 0;
  bool clip_output = true;
  RngSeed im_seed{};
};

/// Band hypervectors C_1..C_{n_b}, rematerialized from the seed.
ItemMemory band_item_memory(std::size_t n_bands, std::size_t dim, RngSeed im_seed);

/// Counts of sum_b embed(f_b) xor C_b, with n_added = n_b.
Accumulator encode_trial_accumulate(const BandedFeatures& banded, const Embedder& embedder, const ItemMemory& bands);

/// Clipped: majority over bands (even n_b draws one tie vector from `ties`).
/// Unclipped: the accumulator itself.
EncodedTrial encode_trial(const BandedFeatures& banded, const Embedder& embedder, const ItemMemory& bands,
                          const EncoderConfig& cfg, Rng& ties);

/// Tie-break stream of trial `trial_index` under a global seed.
inline RngSeed trial_tie_seed(RngSeed seed, std::uint64_t trial_index) {
  return derive_seed(seed, stream::kEncoderTies, trial_index);
}

/// Hypervector view of an encoded trial for classification. Unclipped
/// outputs are binarized with the given tie stream.
Hypervector as_hypervector(const EncodedTrial& encoded, Rng& ties);

}  // namespace hdemb
