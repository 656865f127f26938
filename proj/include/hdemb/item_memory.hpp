#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hdemb/hypervector.hpp"
#include "hdemb/rng.hpp"

namespace hdemb {

struct Match {
  std::size_t index = 0;
  std::string label;
  double distance = 0.0;
};

/// Labelled store of seed hypervectors with nearest-neighbour cleanup.
class ItemMemory {
 public:
  ItemMemory() = default;

  /// `count` random entries labelled "0".."count-1". Contents depend only on
  /// (seed, count, dim).
  static ItemMemory random(std::size_t count, std::size_t dim, RngSeed seed);

  /// Random entries with the given labels, drawn in label order.
  static ItemMemory random(std::span<const std::string> labels, std::size_t dim, RngSeed seed);

  /// Throws InvalidArgument on duplicate label or dimension mismatch.
  void add(std::string label, Hypervector v);

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t dim() const noexcept { return entries_.empty() ? 0 : entries_.front().second.dim(); }
  RngSeed seed() const noexcept { return seed_; }

  const Hypervector& operator[](std::size_t i) const { return entries_.at(i).second; }
  const std::string& label(std::size_t i) const { return entries_.at(i).first; }
  const Hypervector& at(const std::string& label) const;

  /// Entry with the smallest Hamming distance to q; ties go to the lowest index.
  Match nearest(const Hypervector& q) const;

 private:
  std::vector<std::pair<std::string, Hypervector>> entries_;
  RngSeed seed_{};
};

inline Match im_nearest(const ItemMemory& im, const Hypervector& q) { return im.nearest(q); }

/// H = [ (F1 xor V1) + (F2 xor V2) + ... ]
Hypervector encode_record(std::span<const std::pair<Hypervector, Hypervector>> pairs, Rng& rng);

/// Unbind `field` from the record and clean up through the item memory.
Match decode_field(const Hypervector& record, const Hypervector& field, const ItemMemory& im);

}  // namespace hdemb
