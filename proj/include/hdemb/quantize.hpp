#pragma once

// Per-feature quantization embeddings (thermometer and two-bit-change Gray
// code) with per-vector standardization and a fixed random permutation.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hdemb/rng.hpp"
#include "hdemb/types.hpp"

namespace hdemb {

enum class CodeKind { thermometer, gray2 };

struct QuantizerConfig {
  std::size_t bits_per_feature = 0;  // q
  std::size_t levels = 0;            // l
  double clip_range = 3.0;           // a, in standardized units
  RngSeed permutation_seed{};
  CodeKind code_kind = CodeKind::thermometer;
  bool permute = true;

  /// l = q.
  static QuantizerConfig thermometer(std::size_t q, double clip_range = 3.0, RngSeed seed = {});
  /// l = q(q-1)/2.
  static QuantizerConfig gray2(std::size_t q, double clip_range = 3.0, RngSeed seed = {});

  /// Throws InvalidArgument if the level count does not match the code kind.
  void validate() const;
};

struct StandardizedVector {
  FeatureVector values;
  bool degenerate = false;  // zero variance; values are all zero
};

/// Zero mean, unit population variance over the vector's own components.
StandardizedVector standardize_vector(const FeatureVector& f);

/// Uniform bins over [-a, a]; clipped to {0..l-1}; non-decreasing in x.
std::size_t quantize_level(double x, const QuantizerConfig& cfg);

struct Codebook {
  std::size_t bits = 0;
  std::vector<std::vector<std::uint8_t>> codewords;
};

/// Thermometer: codeword i is i ones then zeros. Gray-2: all-zero followed by
/// weight-2 words in revolving-door order, truncated to l words.
Codebook build_codebook(const QuantizerConfig& cfg);

/// Uniform random permutation of {0..n-1} (Fisher-Yates on the seeded stream).
std::vector<std::size_t> random_permutation(std::size_t n, RngSeed seed);

/// out[perm[i]] = in[i].
Hypervector apply_permutation(const Hypervector& v, std::span<const std::size_t> perm);
Hypervector invert_permutation(const Hypervector& v, std::span<const std::size_t> perm);

/// Level index of every component after per-vector standardization
/// (degenerate vectors map every component to l/2).
std::vector<std::size_t> quantize_vector(const FeatureVector& f, const QuantizerConfig& cfg);

/// Concatenated codewords without the permutation, d = n_R * q.
Hypervector concatenate_codewords(std::span<const std::size_t> levels, const Codebook& codebook);

class QuantizedEmbedder final : public Embedder {
 public:
  QuantizedEmbedder(std::size_t n_features, QuantizerConfig cfg);

  std::size_t input_dim() const override { return n_features_; }
  std::size_t dim() const override { return n_features_ * cfg_.bits_per_feature; }
  Hypervector embed(const FeatureVector& f) const override;

  const QuantizerConfig& config() const noexcept { return cfg_; }
  const Codebook& codebook() const noexcept { return codebook_; }
  std::span<const std::size_t> permutation() const noexcept { return permutation_; }

 private:
  std::size_t n_features_;
  QuantizerConfig cfg_;
  Codebook codebook_;
  std::vector<std::size_t> permutation_;
};

/// One-shot form of QuantizedEmbedder::embed.
Hypervector embed_quantized(const FeatureVector& f, const QuantizerConfig& cfg);

}  // namespace hdemb
