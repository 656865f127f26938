#include "hdemb/hypervector.hpp"

#include <bit>
#include <string>

#include "hdemb/errors.hpp"

namespace hdemb {

namespace {

std::size_t words_for(std::size_t dim) { return (dim + Hypervector::kWordBits - 1) / Hypervector::kWordBits; }

void require_same_dim(const Hypervector& a, const Hypervector& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw InvalidArgument(std::string(op) + ": dimension mismatch (" + std::to_string(a.dim()) +
                          " vs " + std::to_string(b.dim()) + ")");
  }
}

}  // namespace

Hypervector::Hypervector(std::size_t dim) : dim_(dim), words_(words_for(dim), 0) {
  if (dim == 0) throw InvalidArgument("Hypervector: dimension must be positive");
}

Hypervector Hypervector::from_bits(std::span<const std::uint8_t> bits) {
  Hypervector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) v.words_[i / kWordBits] |= Word{1} << (i % kWordBits);
  }
  return v;
}

Hypervector Hypervector::from_words(std::size_t dim, std::vector<Word> words) {
  Hypervector v(dim);
  if (words.size() != v.words_.size()) {
    throw InvalidArgument("Hypervector::from_words: expected " + std::to_string(v.words_.size()) +
                          " words, got " + std::to_string(words.size()));
  }
  v.words_ = std::move(words);
  v.clear_padding();
  return v;
}

bool Hypervector::get(std::size_t i) const {
  if (i >= dim_) throw InvalidArgument("Hypervector::get: index out of range");
  return (*this)[i];
}

void Hypervector::set(std::size_t i, bool value) {
  if (i >= dim_) throw InvalidArgument("Hypervector::set: index out of range");
  const Word mask = Word{1} << (i % kWordBits);
  if (value) {
    words_[i / kWordBits] |= mask;
  } else {
    words_[i / kWordBits] &= ~mask;
  }
}

std::size_t Hypervector::popcount() const noexcept {
  std::size_t n = 0;
  for (Word w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::vector<std::uint8_t> Hypervector::to_bits() const {
  std::vector<std::uint8_t> bits(dim_);
  for (std::size_t i = 0; i < dim_; ++i) bits[i] = (*this)[i] ? 1 : 0;
  return bits;
}

void Hypervector::clear_padding() noexcept {
  const std::size_t tail = dim_ % kWordBits;
  if (tail != 0 && !words_.empty()) words_.back() &= (Word{1} << tail) - 1;
}

// Friend accessor so free functions can write words without a public mutable span.
class HypervectorAccess {
 public:
  static std::vector<Hypervector::Word>& words(Hypervector& v) { return v.words_; }
  static void clear_padding(Hypervector& v) { v.clear_padding(); }
};

Accumulator::Accumulator(std::size_t dim) : counts_(dim, 0) {
  if (dim == 0) throw InvalidArgument("Accumulator: dimension must be positive");
}

Accumulator Accumulator::from_counts(std::vector<std::uint32_t> counts, std::uint64_t n_added) {
  if (counts.empty()) throw InvalidArgument("Accumulator: dimension must be positive");
  for (auto c : counts) {
    if (c > n_added) throw InvalidArgument("Accumulator: count exceeds n_added");
  }
  Accumulator acc;
  acc.counts_ = std::move(counts);
  acc.n_added_ = n_added;
  return acc;
}

void Accumulator::add(const Hypervector& v) {
  if (v.dim() != dim()) throw InvalidArgument("Accumulator::add: dimension mismatch");
  const auto words = v.words();
  for (std::size_t w = 0; w < words.size(); ++w) {
    Hypervector::Word bits = words[w];
    while (bits != 0) {
      const int b = std::countr_zero(bits);
      ++counts_[w * Hypervector::kWordBits + static_cast<std::size_t>(b)];
      bits &= bits - 1;
    }
  }
  ++n_added_;
}

void Accumulator::add(const Accumulator& other) {
  if (other.dim() != dim()) throw InvalidArgument("Accumulator::add: dimension mismatch");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  n_added_ += other.n_added_;
}

Hypervector random_hv(std::size_t dim, Rng& rng) {
  Hypervector v(dim);
  for (auto& w : HypervectorAccess::words(v)) w = rng.next_u64();
  HypervectorAccess::clear_padding(v);
  return v;
}

std::size_t hamming_count(const Hypervector& a, const Hypervector& b) {
  require_same_dim(a, b, "hamming");
  const auto wa = a.words();
  const auto wb = b.words();
  std::size_t n = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) n += static_cast<std::size_t>(std::popcount(wa[i] ^ wb[i]));
  return n;
}

double hamming(const Hypervector& a, const Hypervector& b) {
  return static_cast<double>(hamming_count(a, b)) / static_cast<double>(a.dim());
}

Hypervector bind(const Hypervector& a, const Hypervector& b) {
  require_same_dim(a, b, "bind");
  Hypervector out(a.dim());
  auto& wo = HypervectorAccess::words(out);
  const auto wa = a.words();
  const auto wb = b.words();
  for (std::size_t i = 0; i < wo.size(); ++i) wo[i] = wa[i] ^ wb[i];
  return out;
}

Hypervector complement(const Hypervector& a) {
  Hypervector out(a.dim());
  auto& wo = HypervectorAccess::words(out);
  const auto wa = a.words();
  for (std::size_t i = 0; i < wo.size(); ++i) wo[i] = ~wa[i];
  HypervectorAccess::clear_padding(out);
  return out;
}

Hypervector permute(const Hypervector& a, std::int64_t shift) {
  const auto d = static_cast<std::int64_t>(a.dim());
  const auto s = static_cast<std::size_t>(((shift % d) + d) % d);
  if (s == 0) return a;
  Hypervector out(a.dim());
  auto& wo = HypervectorAccess::words(out);
  const auto wa = a.words();
  const std::size_t dim = a.dim();
  // Walk source bits word by word; the destination index wraps once.
  for (std::size_t i = 0; i < dim; ++i) {
    if ((wa[i / 64] >> (i % 64)) & 1U) {
      std::size_t j = i + s;
      if (j >= dim) j -= dim;
      wo[j / 64] |= Hypervector::Word{1} << (j % 64);
    }
  }
  return out;
}

Accumulator accumulate(Accumulator acc, const Hypervector& v) {
  acc.add(v);
  return acc;
}

Hypervector binarize(const Accumulator& acc, Rng& rng) {
  if (acc.n_added() == 0) throw InvalidState("binarize: accumulator is empty");
  const auto counts = acc.counts();
  std::uint64_t n = acc.n_added();
  Hypervector tie;
  const bool even = n % 2 == 0;
  if (even) {
    tie = random_hv(acc.dim(), rng);
    ++n;
  }
  Hypervector out(acc.dim());
  auto& wo = HypervectorAccess::words(out);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    std::uint64_t c = counts[i];
    if (even && tie[i]) ++c;
    // H(c - n/2) with H(0) = 1  <=>  2c >= n
    if (2 * c >= n) wo[i / 64] |= Hypervector::Word{1} << (i % 64);
  }
  return out;
}

Hypervector bundle(std::span<const Hypervector> vs, Rng& rng) {
  if (vs.empty()) throw InvalidArgument("bundle: empty input");
  Accumulator acc(vs.front().dim());
  for (const auto& v : vs) acc.add(v);
  return binarize(acc, rng);
}

}  // namespace hdemb
