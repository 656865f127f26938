#include "hdemb/quantize.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "hdemb/errors.hpp"

namespace hdemb {

namespace {

// Revolving-door order of the k-subsets of {0..n-1}: consecutive subsets
// differ by exchanging one element. R(n,k) = R(n-1,k), reverse(R(n-1,k-1)) + {n-1}.
std::vector<std::vector<std::size_t>> revolving_door(std::size_t n, std::size_t k) {
  if (k == 0) return {{}};
  if (k == n) {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    return {all};
  }
  auto out = revolving_door(n - 1, k);
  auto tail = revolving_door(n - 1, k - 1);
  for (auto it = tail.rbegin(); it != tail.rend(); ++it) {
    it->push_back(n - 1);
    out.push_back(std::move(*it));
  }
  return out;
}

}  // namespace

QuantizerConfig QuantizerConfig::thermometer(std::size_t q, double clip_range, RngSeed seed) {
  QuantizerConfig cfg;
  cfg.bits_per_feature = q;
  cfg.levels = q;
  cfg.clip_range = clip_range;
  cfg.permutation_seed = seed;
  cfg.code_kind = CodeKind::thermometer;
  cfg.validate();
  return cfg;
}

QuantizerConfig QuantizerConfig::gray2(std::size_t q, double clip_range, RngSeed seed) {
  QuantizerConfig cfg;
  cfg.bits_per_feature = q;
  cfg.levels = q * (q - 1) / 2;
  cfg.clip_range = clip_range;
  cfg.permutation_seed = seed;
  cfg.code_kind = CodeKind::gray2;
  cfg.validate();
  return cfg;
}

void QuantizerConfig::validate() const {
  if (!(clip_range > 0.0)) throw InvalidArgument("quantizer: clip range must be positive");
  if (code_kind == CodeKind::thermometer) {
    if (bits_per_feature < 1) throw InvalidArgument("thermometer: q must be >= 1");
    if (levels != bits_per_feature) throw InvalidArgument("thermometer: levels must equal q");
  } else {
    if (bits_per_feature < 2) throw InvalidArgument("gray2: q must be >= 2");
    if (levels != bits_per_feature * (bits_per_feature - 1) / 2) {
      throw InvalidArgument("gray2: levels must equal q(q-1)/2");
    }
  }
}

StandardizedVector standardize_vector(const FeatureVector& f) {
  if (f.size() < 2) throw InvalidArgument("standardize_vector: need at least 2 components");
  const double mean = f.mean();
  const FeatureVector centered = f.array() - mean;
  const double var = centered.squaredNorm() / static_cast<double>(f.size());
  if (!(var > 0.0) || !std::isfinite(var)) {
    return {FeatureVector::Zero(f.size()), true};
  }
  return {centered / std::sqrt(var), false};
}

std::size_t quantize_level(double x, const QuantizerConfig& cfg) {
  const double a = cfg.clip_range;
  const std::size_t l = cfg.levels;
  if (x <= -a) return 0;
  if (x >= a) return l - 1;
  const double width = 2.0 * a / static_cast<double>(l);
  const auto level = static_cast<std::size_t>(std::floor((x + a) / width));
  return level < l ? level : l - 1;
}

Codebook build_codebook(const QuantizerConfig& cfg) {
  cfg.validate();
  const std::size_t q = cfg.bits_per_feature;
  Codebook book;
  book.bits = q;
  if (cfg.code_kind == CodeKind::thermometer) {
    for (std::size_t i = 0; i < cfg.levels; ++i) {
      std::vector<std::uint8_t> word(q, 0);
      for (std::size_t j = 0; j < i; ++j) word[j] = 1;
      book.codewords.push_back(std::move(word));
    }
    return book;
  }
  book.codewords.emplace_back(q, 0);
  const auto pairs = revolving_door(q, 2);
  for (const auto& pair : pairs) {
    if (book.codewords.size() == cfg.levels) break;
    std::vector<std::uint8_t> word(q, 0);
    for (auto j : pair) word[j] = 1;
    book.codewords.push_back(std::move(word));
  }
  return book;
}

std::vector<std::size_t> random_permutation(std::size_t n, RngSeed seed) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

Hypervector apply_permutation(const Hypervector& v, std::span<const std::size_t> perm) {
  if (perm.size() != v.dim()) throw InvalidArgument("apply_permutation: size mismatch");
  Hypervector out(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (v[i]) out.set(perm[i], true);
  }
  return out;
}

Hypervector invert_permutation(const Hypervector& v, std::span<const std::size_t> perm) {
  if (perm.size() != v.dim()) throw InvalidArgument("invert_permutation: size mismatch");
  Hypervector out(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (v[perm[i]]) out.set(i, true);
  }
  return out;
}

std::vector<std::size_t> quantize_vector(const FeatureVector& f, const QuantizerConfig& cfg) {
  const auto z = standardize_vector(f);
  std::vector<std::size_t> levels(static_cast<std::size_t>(f.size()));
  for (std::size_t i = 0; i < levels.size(); ++i) {
    levels[i] = z.degenerate ? cfg.levels / 2 : quantize_level(z.values[static_cast<Eigen::Index>(i)], cfg);
  }
  return levels;
}

Hypervector concatenate_codewords(std::span<const std::size_t> levels, const Codebook& codebook) {
  Hypervector out(levels.size() * codebook.bits);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto& word = codebook.codewords.at(levels[i]);
    for (std::size_t j = 0; j < codebook.bits; ++j) {
      if (word[j]) out.set(i * codebook.bits + j, true);
    }
  }
  return out;
}

QuantizedEmbedder::QuantizedEmbedder(std::size_t n_features, QuantizerConfig cfg)
    : n_features_(n_features), cfg_(cfg), codebook_(build_codebook(cfg)) {
  if (n_features < 2) throw InvalidArgument("QuantizedEmbedder: need at least 2 features");
  if (cfg_.permute) permutation_ = random_permutation(dim(), cfg_.permutation_seed);
}

Hypervector QuantizedEmbedder::embed(const FeatureVector& f) const {
  if (static_cast<std::size_t>(f.size()) != n_features_) {
    throw InvalidArgument("QuantizedEmbedder: expected " + std::to_string(n_features_) +
                          " features, got " + std::to_string(f.size()));
  }
  const auto levels = quantize_vector(f, cfg_);
  auto v = concatenate_codewords(levels, codebook_);
  return cfg_.permute ? apply_permutation(v, permutation_) : v;
}

Hypervector embed_quantized(const FeatureVector& f, const QuantizerConfig& cfg) {
  return QuantizedEmbedder(static_cast<std::size_t>(f.size()), cfg).embed(f);
}

}  // namespace hdemb
