#pragma once

// Points of digital sequences and nets, kept exact as dyadic numerators.
//
// Point n, coordinate j: the digit vector of n (least significant first) is
// multiplied by C_j over Z2, and output digit i becomes the coefficient of
// 2^-i. Only the first W output digits are kept.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hoqmc/dyadic.hpp"
#include "hoqmc/error.hpp"
#include "hoqmc/generating_matrices.hpp"
#include "hoqmc/gf2.hpp"

namespace hoqmc {

class PointSet {
 public:
  PointSet() = default;
  PointSet(std::size_t dimension, unsigned precision, std::string generator = {})
      : dimension_(dimension), precision_(precision), generator_(std::move(generator)) {
    if (dimension == 0) throw DimensionError("PointSet: dimension must be positive");
    check_precision(precision);
  }

  std::size_t dimension() const noexcept { return dimension_; }
  unsigned precision() const noexcept { return precision_; }
  std::size_t size() const noexcept { return dimension_ == 0 ? 0 : numerators_.size() / dimension_; }
  bool empty() const noexcept { return numerators_.empty(); }
  const std::string& generator() const noexcept { return generator_; }
  void set_generator(std::string g) { generator_ = std::move(g); }

  void push_back(std::span<const std::uint64_t> coords) {
    if (coords.size() != dimension_) throw DimensionError("PointSet::push_back: dimension mismatch");
    for (auto c : coords) {
      if ((c & ~low_mask(precision_)) != 0) throw ArgumentError("PointSet::push_back: numerator out of range");
    }
    numerators_.insert(numerators_.end(), coords.begin(), coords.end());
  }

  void push_back(const DyadicPoint& p) {
    if (p.precision != precision_) {
      std::vector<std::uint64_t> aligned(p.coords.size());
      for (std::size_t j = 0; j < aligned.size(); ++j) aligned[j] = align_numerator(p.coords[j], p.precision, precision_);
      push_back(aligned);
    } else {
      push_back(p.coords);
    }
  }

  std::span<const std::uint64_t> coords(std::size_t n) const {
    return {numerators_.data() + n * dimension_, dimension_};
  }
  std::uint64_t numerator(std::size_t n, std::size_t j) const { return numerators_[n * dimension_ + j]; }
  double value(std::size_t n, std::size_t j) const { return to_double(numerator(n, j), precision_); }

  DyadicPoint point(std::size_t n) const {
    const auto c = coords(n);
    return {{c.begin(), c.end()}, precision_};
  }

  std::span<const std::uint64_t> numerators() const noexcept { return numerators_; }

  // Same points at a higher precision.
  PointSet widened(unsigned precision) const {
    if (precision < precision_) throw ArgumentError("PointSet::widened: cannot lower precision");
    PointSet out(dimension_, precision, generator_);
    out.numerators_.reserve(numerators_.size());
    for (auto c : numerators_) out.numerators_.push_back(align_numerator(c, precision_, precision));
    return out;
  }

  friend bool operator==(const PointSet& a, const PointSet& b) {
    return a.dimension_ == b.dimension_ && a.precision_ == b.precision_ && a.numerators_ == b.numerators_;
  }

 private:
  std::size_t dimension_ = 0;
  unsigned precision_ = 0;
  std::vector<std::uint64_t> numerators_;
  std::string generator_;
};

// Least-significant-first binary digits of n, length m.
inline gf2::BitVector digit_vector(std::uint64_t n, std::size_t m) {
  if (m < 64 && (n >> m) != 0) {
    throw ArgumentError("digit_vector: " + std::to_string(n) + " needs more than " + std::to_string(m) + " digits");
  }
  gf2::BitVector v(m);
  for (std::size_t i = 0; i < m && i < 64; ++i) {
    if ((n >> i) & 1U) v.set(i, true);
  }
  return v;
}

inline std::size_t sum_of_digits(std::uint64_t n) {
  if (n == 0) throw ArgumentError("sum_of_digits: N must be positive");
  return static_cast<std::size_t>(std::popcount(n));
}

namespace detail {

// Column l of C_j as a W-digit numerator: bit W - i set iff C_j(i, l) = 1.
inline std::vector<std::uint64_t> column_numerators(const gf2::BitMatrix& c, unsigned precision) {
  std::vector<std::uint64_t> cols(c.cols(), 0);
  for (std::size_t l = 0; l < c.cols(); ++l) {
    for (unsigned i = 1; i <= precision; ++i) {
      if (c(i - 1, l)) cols[l] |= std::uint64_t{1} << (precision - i);
    }
  }
  return cols;
}

}  // namespace detail

// Points x_first .. x_{first+count-1} with `precision` digits per coordinate.
inline PointSet generate_points_range(const GeneratingMatrixSet& g, std::uint64_t first, std::uint64_t count,
                                      unsigned precision) {
  g.validate();
  check_precision(precision);
  if (precision > g.rows()) {
    throw DimensionError("generate_points: precision " + std::to_string(precision) + " exceeds matrix rows " +
                         std::to_string(g.rows()));
  }
  if (count > 0 && g.cols() < 64) {
    const std::uint64_t last = first + count - 1;
    if (last < first || (last >> g.cols()) != 0) {
      throw DimensionError("generate_points: index " + std::to_string(last) + " needs more than " +
                           std::to_string(g.cols()) + " matrix columns");
    }
  }
  const std::size_t d = g.dimension();
  std::vector<std::vector<std::uint64_t>> cols;
  cols.reserve(d);
  for (const auto& m : g.matrices) cols.push_back(detail::column_numerators(m, precision));

  PointSet out(d, precision, g.describe());
  std::vector<std::uint64_t> x(d);
  for (std::uint64_t n = first; n < first + count; ++n) {
    for (std::size_t j = 0; j < d; ++j) {
      std::uint64_t acc = 0;
      for (std::uint64_t bits = n; bits != 0; bits &= bits - 1) acc ^= cols[j][std::countr_zero(bits)];
      x[j] = acc;
    }
    out.push_back(x);
  }
  return out;
}

inline PointSet generate_points(const GeneratingMatrixSet& g, std::uint64_t count, unsigned precision) {
  return generate_points_range(g, 0, count, precision);
}

// x -> x (+) sigma for every point, at the larger of the two precisions.
inline PointSet digital_shift(const PointSet& p, const DyadicPoint& sigma) {
  if (sigma.dimension() != p.dimension()) throw DimensionError("digital_shift: dimension mismatch");
  const unsigned w = p.precision() > sigma.precision ? p.precision() : sigma.precision;
  PointSet out(p.dimension(), w, p.generator());
  std::vector<std::uint64_t> s(p.dimension());
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = align_numerator(sigma.coords[j], sigma.precision, w);
  std::vector<std::uint64_t> x(p.dimension());
  for (std::size_t n = 0; n < p.size(); ++n) {
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = align_numerator(p.numerator(n, j), p.precision(), w) ^ s[j];
    out.push_back(x);
  }
  return out;
}

// Exponents m_1 > m_2 > ... > m_r with N = sum 2^{m_i}.
inline std::vector<unsigned> binary_decomposition(std::uint64_t n) {
  if (n == 0) throw ArgumentError("binary_decomposition: N must be positive");
  std::vector<unsigned> e;
  for (int b = 63; b >= 0; --b) {
    if ((n >> b) & 1U) e.push_back(static_cast<unsigned>(b));
  }
  return e;
}

inline void check_decomposition(std::span<const unsigned> exponents) {
  if (exponents.empty()) throw ArgumentError("decomposition: no blocks");
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] >= 64) throw ArgumentError("decomposition: exponent too large");
    if (i > 0 && exponents[i] >= exponents[i - 1]) throw ArgumentError("decomposition: exponents must strictly decrease");
  }
}

// First index of block i (1-based): 2^{m_1} + ... + 2^{m_{i-1}}.
inline std::uint64_t block_offset(std::span<const unsigned> exponents, std::size_t block) {
  check_decomposition(exponents);
  if (block < 1 || block > exponents.size()) throw ArgumentError("block_offset: block index out of range");
  std::uint64_t off = 0;
  for (std::size_t i = 0; i + 1 < block; ++i) off += std::uint64_t{1} << exponents[i];
  return off;
}

// Constant digital shift carried by block i: the high digits l of every
// index in the block, pushed through columns m_i, m_i + 1, ... of each C_j.
// Block i of the sequence equals the net of the first m_i columns shifted
// by this vector.
inline DyadicPoint tail_shift_vector(const GeneratingMatrixSet& g, std::span<const unsigned> exponents,
                                     std::size_t block, unsigned precision) {
  g.validate();
  check_precision(precision);
  if (precision > g.rows()) throw DimensionError("tail_shift_vector: precision exceeds matrix rows");
  const std::uint64_t offset = block_offset(exponents, block);
  const unsigned mi = exponents[block - 1];
  const std::uint64_t high = mi >= 64 ? 0 : offset >> mi;
  if (high != 0 && std::bit_width(high) + mi > g.cols()) {
    throw DimensionError("tail_shift_vector: block needs more matrix columns than available");
  }
  DyadicPoint sigma{std::vector<std::uint64_t>(g.dimension(), 0), precision};
  for (std::size_t j = 0; j < g.dimension(); ++j) {
    const auto cols = detail::column_numerators(g.matrices[j], precision);
    std::uint64_t acc = 0;
    for (std::uint64_t bits = high; bits != 0; bits &= bits - 1) acc ^= cols[mi + std::countr_zero(bits)];
    sigma.coords[j] = acc;
  }
  return sigma;
}

}  // namespace hoqmc
