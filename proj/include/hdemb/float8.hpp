#pragma once

// 8-bit float in the E4M3 layout (1 sign, 4 exponent bits with bias 7,
// 3 mantissa bits, subnormals, no infinities, 0x7F/0xFF = NaN, max 448).

#include <array>
#include <cmath>
#include <cstdint>

namespace hdemb::float8 {

inline constexpr double kMax = 448.0;

inline double decode(std::uint8_t code) {
  const bool negative = (code & 0x80U) != 0;
  const unsigned exponent = (code >> 3) & 0x0FU;
  const unsigned mantissa = code & 0x07U;
  if (exponent == 0x0F && mantissa == 0x07) return std::nan("");
  const double magnitude = exponent == 0 ? std::ldexp(static_cast<double>(mantissa) / 8.0, -6)
                                         : std::ldexp(1.0 + static_cast<double>(mantissa) / 8.0,
                                                      static_cast<int>(exponent) - 7);
  return negative ? -magnitude : magnitude;
}

/// Round to nearest, ties to even; saturates at +-448.
inline std::uint8_t encode(double value) {
  static const std::array<double, 127> table = [] {
    std::array<double, 127> t{};
    for (unsigned c = 0; c < 127; ++c) t[c] = decode(static_cast<std::uint8_t>(c));
    return t;
  }();
  const std::uint8_t sign = std::signbit(value) ? 0x80 : 0x00;
  const double m = std::fabs(value);
  if (std::isnan(value)) return 0x7F;
  if (m >= kMax) return static_cast<std::uint8_t>(sign | 0x7E);
  // First code with table value >= m.
  unsigned lo = 0;
  unsigned hi = 126;
  while (lo < hi) {
    const unsigned mid = (lo + hi) / 2;
    if (table[mid] < m) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  unsigned code = lo;
  if (code > 0) {
    const double below = m - table[code - 1];
    const double above = table[code] - m;
    if (below < above || (below == above && (code - 1) % 2 == 0)) code -= 1;
  }
  return static_cast<std::uint8_t>(sign | code);
}

inline double round_trip(double value) { return decode(encode(value)); }

}  // namespace hdemb::float8
