#pragma once

// Digit interlacing of order alpha: alpha numbers are woven digit by digit
// into one, so digit r + (a-1) alpha of the output is digit a of input r.
// The same map acts on generating matrices by shuffling rows.

#include <cstddef>
#include <span>
#include <vector>

#include "hoqmc/dyadic.hpp"
#include "hoqmc/error.hpp"
#include "hoqmc/generating_matrices.hpp"
#include "hoqmc/niederreiter.hpp"

namespace hoqmc {

// Inputs are read with `precision` digits each; the output carries
// alpha * precision digits.
inline Dyadic interlace_point(std::span<const Dyadic> xs, unsigned precision) {
  if (xs.empty()) throw ArgumentError("interlace_point: need at least one input");
  const auto alpha = static_cast<unsigned>(xs.size());
  check_precision(alpha * precision);
  std::vector<std::uint64_t> in;
  in.reserve(alpha);
  for (const auto& x : xs) in.push_back(align_numerator(x.numerator, x.precision, precision));
  const unsigned out_precision = alpha * precision;
  std::uint64_t out = 0;
  for (unsigned a = 1; a <= precision; ++a) {
    for (unsigned r = 1; r <= alpha; ++r) {
      if ((in[r - 1] >> (precision - a)) & 1U) out |= std::uint64_t{1} << (out_precision - (r + (a - 1) * alpha));
    }
  }
  return {out, out_precision};
}

// Blockwise interlacing of an (alpha d)-dimensional point into d coordinates.
inline DyadicPoint interlace_vector(const DyadicPoint& x, std::size_t alpha) {
  if (alpha == 0) throw ArgumentError("interlace_vector: alpha must be positive");
  if (x.dimension() == 0 || x.dimension() % alpha != 0) {
    throw DimensionError("interlace_vector: input dimension is not a multiple of alpha");
  }
  const std::size_t d = x.dimension() / alpha;
  DyadicPoint out{std::vector<std::uint64_t>(d), static_cast<unsigned>(alpha) * x.precision};
  check_precision(out.precision);
  std::vector<Dyadic> block(alpha);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t v = 0; v < alpha; ++v) block[v] = x.coordinate(j * alpha + v);
    out.coords[j] = interlace_point(block, x.precision).numerator;
  }
  return out;
}

// E_1..E_d from C_1..C_{alpha d}: row u alpha + v of E_j (1-based, v in
// 1..alpha) is row u + 1 of C_{(j-1) alpha + v}. Output has `out_rows` rows;
// the default uses every available source row.
inline GeneratingMatrixSet interlace_matrices(const GeneratingMatrixSet& c, std::size_t alpha,
                                              std::size_t out_rows = 0) {
  c.validate();
  if (alpha == 0) throw ArgumentError("interlace_matrices: alpha must be positive");
  if (c.dimension() % alpha != 0) throw DimensionError("interlace_matrices: dimension not a multiple of alpha");
  if (out_rows == 0) out_rows = alpha * c.rows();
  if ((out_rows + alpha - 1) / alpha > c.rows()) {
    throw DimensionError("interlace_matrices: source matrices have too few rows");
  }
  const std::size_t d = c.dimension() / alpha;
  GeneratingMatrixSet e;
  e.alpha = c.alpha * alpha;
  e.polynomials = c.polynomials;
  e.t = alpha * c.t + d * (alpha * (alpha - 1) / 2);
  for (std::size_t j = 0; j < d; ++j) {
    gf2::BitMatrix m(out_rows, c.cols());
    for (std::size_t k = 0; k < out_rows; ++k) {
      const std::size_t u = k / alpha;
      const std::size_t v = k % alpha;
      m.set_row(k, c.matrices[j * alpha + v].row(u));
    }
    e.matrices.push_back(std::move(m));
  }
  return e;
}

// Order-alpha matrices for the first 2^cols points in dimension d:
// (alpha d)-dimensional base matrices with cols x cols extent, interlaced
// to (alpha cols) x cols.
inline GeneratingMatrixSet build_interlaced(std::size_t d, std::size_t alpha, std::size_t cols) {
  if (alpha == 0) throw ArgumentError("build_interlaced: alpha must be positive");
  return interlace_matrices(build_matrices(alpha * d, cols, cols), alpha, alpha * cols);
}

}  // namespace hoqmc
