#include "hdemb/item_memory.hpp"

#include <algorithm>
#include <limits>

#include "hdemb/errors.hpp"

namespace hdemb {

ItemMemory ItemMemory::random(std::size_t count, std::size_t dim, RngSeed seed) {
  std::vector<std::string> labels;
  labels.reserve(count);
  for (std::size_t i = 0; i < count; ++i) labels.push_back(std::to_string(i));
  return random(labels, dim, seed);
}

ItemMemory ItemMemory::random(std::span<const std::string> labels, std::size_t dim, RngSeed seed) {
  ItemMemory im;
  im.seed_ = seed;
  Rng rng(seed);
  for (const auto& label : labels) im.add(label, random_hv(dim, rng));
  return im;
}

void ItemMemory::add(std::string label, Hypervector v) {
  if (!entries_.empty() && v.dim() != dim()) {
    throw InvalidArgument("ItemMemory::add: dimension mismatch");
  }
  const bool duplicate = std::any_of(entries_.begin(), entries_.end(),
                                     [&](const auto& e) { return e.first == label; });
  if (duplicate) throw InvalidArgument("ItemMemory::add: duplicate label '" + label + "'");
  entries_.emplace_back(std::move(label), std::move(v));
}

const Hypervector& ItemMemory::at(const std::string& label) const {
  for (const auto& e : entries_) {
    if (e.first == label) return e.second;
  }
  throw InvalidArgument("ItemMemory::at: unknown label '" + label + "'");
}

Match ItemMemory::nearest(const Hypervector& q) const {
  if (entries_.empty()) throw InvalidState("ItemMemory::nearest: memory is empty");
  std::size_t best = 0;
  std::size_t best_count = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const std::size_t c = hamming_count(entries_[i].second, q);
    if (c < best_count) {
      best_count = c;
      best = i;
    }
  }
  return Match{best, entries_[best].first,
               static_cast<double>(best_count) / static_cast<double>(q.dim())};
}

Hypervector encode_record(std::span<const std::pair<Hypervector, Hypervector>> pairs, Rng& rng) {
  if (pairs.empty()) throw InvalidArgument("encode_record: no field/value pairs");
  std::vector<Hypervector> bound;
  bound.reserve(pairs.size());
  for (const auto& [field, value] : pairs) bound.push_back(bind(field, value));
  return bundle(bound, rng);
}

Match decode_field(const Hypervector& record, const Hypervector& field, const ItemMemory& im) {
  return im.nearest(bind(field, record));
}

}  // namespace hdemb
