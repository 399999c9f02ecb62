#pragma once

// Exact dyadic rationals in [0,1): numerator / 2^precision with at most
// 64 binary digits. Digit a (1-based, weight 2^-a) of a value with
// precision W is bit W - a of the numerator.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hoqmc/error.hpp"

namespace hoqmc {

inline constexpr unsigned kMaxPrecision = 64;

constexpr std::uint64_t low_mask(unsigned bits) noexcept {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

inline void check_precision(unsigned precision) {
  if (precision > kMaxPrecision) {
    throw RefusalError("precision " + std::to_string(precision) + " exceeds the 64-digit budget");
  }
}

// Re-express a numerator of precision `from` at precision `to`. Refuses to
// drop nonzero digits.
inline std::uint64_t align_numerator(std::uint64_t numerator, unsigned from, unsigned to) {
  check_precision(from);
  check_precision(to);
  if (to >= from) return to - from >= 64 ? 0 : numerator << (to - from);
  const unsigned drop = from - to;
  if ((numerator & low_mask(drop)) != 0) throw ArgumentError("align_numerator: nonzero digits beyond target precision");
  return drop >= 64 ? 0 : numerator >> drop;
}

inline double to_double(std::uint64_t numerator, unsigned precision) {
  return std::ldexp(static_cast<double>(numerator), -static_cast<int>(precision));
}

struct Dyadic {
  std::uint64_t numerator = 0;
  unsigned precision = 0;

  static Dyadic make(std::uint64_t numerator, unsigned precision) {
    check_precision(precision);
    if ((numerator & ~low_mask(precision)) != 0) throw ArgumentError("Dyadic: numerator not below 2^precision");
    return {numerator, precision};
  }

  double value() const { return to_double(numerator, precision); }

  // Binary digit a >= 1 (weight 2^-a); zero beyond the precision.
  bool digit(unsigned a) const noexcept { return a >= 1 && a <= precision && ((numerator >> (precision - a)) & 1U); }

  Dyadic aligned(unsigned to) const { return {align_numerator(numerator, precision, to), to}; }

  friend bool operator==(const Dyadic&, const Dyadic&) = default;
};

// Digitwise addition modulo 2 at the larger of the two precisions.
inline Dyadic dyadic_xor(const Dyadic& x, const Dyadic& y) {
  const unsigned w = x.precision > y.precision ? x.precision : y.precision;
  return {x.aligned(w).numerator ^ y.aligned(w).numerator, w};
}

// A point of [0,1)^d whose coordinates share one precision.
struct DyadicPoint {
  std::vector<std::uint64_t> coords;
  unsigned precision = 0;

  std::size_t dimension() const noexcept { return coords.size(); }
  Dyadic coordinate(std::size_t j) const { return {coords.at(j), precision}; }

  friend bool operator==(const DyadicPoint&, const DyadicPoint&) = default;
};

}  // namespace hoqmc
