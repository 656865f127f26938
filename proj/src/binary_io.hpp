#pragma once

// Little-endian binary reader/writer shared by the file formats.

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <type_traits>
#include <vector>

#include "hdemb/errors.hpp"

namespace hdemb::io {

class Writer {
 public:
  template <typename T>
  void put(T value) {
    static_assert(std::is_arithmetic_v<T>);
    using U = std::conditional_t<sizeof(T) == 1, std::uint8_t,
              std::conditional_t<sizeof(T) == 2, std::uint16_t,
              std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>>>;
    U bits;
    std::memcpy(&bits, &value, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T); ++i) bytes_.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
  }

  void put_bytes(const char* data, std::size_t n) { bytes_.insert(bytes_.end(), data, data + n); }

  const std::vector<char>& bytes() const noexcept { return bytes_; }

  void write_file(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
    out.write(bytes_.data(), static_cast<std::streamsize>(bytes_.size()));
    if (!out) throw DataError("write failed for '" + path.string() + "'");
  }

 private:
  std::vector<char> bytes_;
};

class Reader {
 public:
  explicit Reader(std::vector<char> bytes) : bytes_(std::move(bytes)) {}

  static Reader from_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return Reader(std::move(bytes));
  }

  template <typename T>
  T get(const char* what) {
    static_assert(std::is_arithmetic_v<T>);
    require(sizeof(T), what);
    using U = std::conditional_t<sizeof(T) == 1, std::uint8_t,
              std::conditional_t<sizeof(T) == 2, std::uint16_t,
              std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>>>;
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      bits |= static_cast<U>(static_cast<U>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i));
    }
    pos_ += sizeof(T);
    T value;
    std::memcpy(&value, &bits, sizeof(T));
    return value;
  }

  std::string get_bytes(std::size_t n, const char* what) {
    require(n, what);
    std::string s(bytes_.data() + pos_, n);
    pos_ += n;
    return s;
  }

  void require(std::size_t n, const char* what) const {
    if (pos_ + n > bytes_.size()) {
      throw TruncatedError(std::string("truncated payload while reading ") + what, pos_);
    }
  }

  std::size_t offset() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

 private:
  std::vector<char> bytes_;
  std::size_t pos_ = 0;
};

/// Magic + version header check shared by all formats.
inline void expect_header(Reader& in, const char (&magic)[5], std::uint16_t version) {
  const std::string got = in.get_bytes(4, "magic");
  if (got != std::string(magic, 4)) {
    throw BadMagicError("bad magic (expected '" + std::string(magic, 4) + "')", 0);
  }
  const std::size_t at = in.offset();
  const auto v = in.get<std::uint16_t>("version");
  if (v != version) {
    throw VersionMismatchError("unsupported version " + std::to_string(v) + " (expected " +
                                   std::to_string(version) + ")",
                               at);
  }
}

inline void put_header(Writer& out, const char (&magic)[5], std::uint16_t version) {
  out.put_bytes(magic, 4);
  out.put<std::uint16_t>(version);
}

}  // namespace hdemb::io

#include "hdemb/hypervector.hpp"

namespace hdemb::io {

inline void put_hypervector(Writer& out, const Hypervector& v) {
  for (auto w : v.words()) out.put<std::uint64_t>(w);
}

inline Hypervector get_hypervector(Reader& in, std::size_t dim, const char* what) {
  std::vector<Hypervector::Word> words((dim + 63) / 64);
  for (auto& w : words) w = in.get<std::uint64_t>(what);
  return Hypervector::from_words(dim, std::move(words));
}

}  // namespace hdemb::io
