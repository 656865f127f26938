#pragma once

// Bit-packed binary hypervectors and the MAP operation set: XOR binding,
// majority bundling, cyclic permutation and normalized Hamming distance.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hdemb/rng.hpp"

namespace hdemb {

/// Binary vector of `dim` bits packed little-endian into 64-bit words.
/// Padding bits beyond `dim` in the last word are always zero.
class Hypervector {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  Hypervector() = default;

  /// All-zero vector. Throws InvalidArgument for dim == 0.
  explicit Hypervector(std::size_t dim);

  /// From a 0/1 byte sequence, one byte per bit.
  static Hypervector from_bits(std::span<const std::uint8_t> bits);

  /// From packed words; padding bits are cleared.
  static Hypervector from_words(std::size_t dim, std::vector<Word> words);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t word_count() const noexcept { return words_.size(); }
  std::span<const Word> words() const noexcept { return words_; }

  bool operator[](std::size_t i) const noexcept {
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
  }
  bool get(std::size_t i) const;
  void set(std::size_t i, bool value);

  /// Number of one bits.
  std::size_t popcount() const noexcept;

  std::vector<std::uint8_t> to_bits() const;

  friend bool operator==(const Hypervector&, const Hypervector&) = default;

 private:
  friend class HypervectorAccess;
  void clear_padding() noexcept;

  std::size_t dim_ = 0;
  std::vector<Word> words_;
};

/// Integer-per-component running sum of hypervectors (pre-threshold bundle).
/// Invariant: every count <= n_added.
class Accumulator {
 public:
  Accumulator() = default;
  explicit Accumulator(std::size_t dim);

  std::size_t dim() const noexcept { return counts_.size(); }
  std::uint64_t n_added() const noexcept { return n_added_; }
  std::span<const std::uint32_t> counts() const noexcept { return counts_; }

  /// Build from explicit counts; throws if any count exceeds n_added.
  static Accumulator from_counts(std::vector<std::uint32_t> counts, std::uint64_t n_added);

  /// Add the bits of `v` and bump n_added by one.
  void add(const Hypervector& v);

  /// Merge another accumulator: counts and n_added add up. This is how an
  /// unclipped encoder output (counts in {0..n_b}, n_added = n_b) enters an
  /// AM prototype.
  void add(const Accumulator& other);

  friend bool operator==(const Accumulator&, const Accumulator&) = default;

 private:
  std::vector<std::uint32_t> counts_;
  std::uint64_t n_added_ = 0;
};

Hypervector random_hv(std::size_t dim, Rng& rng);

std::size_t hamming_count(const Hypervector& a, const Hypervector& b);

/// Normalized Hamming distance in [0, 1].
double hamming(const Hypervector& a, const Hypervector& b);

Hypervector bind(const Hypervector& a, const Hypervector& b);

Hypervector complement(const Hypervector& a);

/// Cyclic right rotation: bit i moves to position (i + shift) mod dim.
/// Negative shifts rotate left.
Hypervector permute(const Hypervector& a, std::int64_t shift);

/// Bit-wise majority. With an even number of inputs one fresh random vector
/// from `rng` is appended first, so no position is ever tied.
Hypervector bundle(std::span<const Hypervector> vs, Rng& rng);

/// Functional form of Accumulator::add.
Accumulator accumulate(Accumulator acc, const Hypervector& v);

/// Threshold H(count - n_added/2) with H(0) = 1. For even n_added a random
/// vector from `rng` is accumulated first. Throws InvalidState when empty.
Hypervector binarize(const Accumulator& acc, Rng& rng);

}  // namespace hdemb
