#pragma once

#include <cstdint>
#include <random>

namespace hdemb {

/// Seed for every pseudo-random stream in the library. Identical seeds give
/// identical streams on every platform: only raw 64-bit engine output is
/// consumed, never the implementation-defined std:: distributions.
struct RngSeed {
  std::uint64_t value = 0;

  friend bool operator==(RngSeed, RngSeed) = default;
};

/// Derive an independent child seed from (base, stream tag, index).
/// Used for per-trial, per-fold and per-restart streams.
RngSeed derive_seed(RngSeed base, std::uint64_t stream, std::uint64_t index = 0) noexcept;

class Rng {
 public:
  explicit Rng(RngSeed seed) : engine_(seed.value) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Unbiased integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  /// Standard normal deviate (Box-Muller, one value per call).
  double normal();

 private:
  std::mt19937_64 engine_;
};

// Stream tags for derive_seed.
namespace stream {
inline constexpr std::uint64_t kItemMemory = 0x494d;
inline constexpr std::uint64_t kPermutation = 0x5045;
inline constexpr std::uint64_t kProjection = 0x5250;
inline constexpr std::uint64_t kLearned = 0x4c50;
inline constexpr std::uint64_t kEncoderTies = 0x4554;
inline constexpr std::uint64_t kAssociative = 0x414d;
inline constexpr std::uint64_t kKMeans = 0x4b4d;
inline constexpr std::uint64_t kFolds = 0x464f;
inline constexpr std::uint64_t kSynthetic = 0x5359;
}  // namespace stream

}  // namespace hdemb
