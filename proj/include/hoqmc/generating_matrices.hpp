#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hoqmc/error.hpp"
#include "hoqmc/gf2.hpp"
#include "hoqmc/poly2.hpp"

namespace hoqmc {

// The d generating matrices of a digital sequence (or net), all of one
// extent, with the interlacing order they were built for and the
// polynomials they came from.
struct GeneratingMatrixSet {
  std::vector<gf2::BitMatrix> matrices;
  std::size_t alpha = 1;
  std::vector<Poly2> polynomials;
  // Quality parameter claimed by the construction (not verified here).
  std::size_t t = 0;

  std::size_t dimension() const noexcept { return matrices.size(); }
  std::size_t rows() const noexcept { return matrices.empty() ? 0 : matrices.front().rows(); }
  std::size_t cols() const noexcept { return matrices.empty() ? 0 : matrices.front().cols(); }

  void validate() const {
    if (matrices.empty()) throw DimensionError("GeneratingMatrixSet: no matrices");
    for (const auto& m : matrices) {
      if (m.rows() != rows() || m.cols() != cols()) {
        throw DimensionError("GeneratingMatrixSet: matrices of different extent");
      }
    }
    if (alpha == 0) throw ArgumentError("GeneratingMatrixSet: alpha must be positive");
  }

  // Left-upper rows x cols block of every matrix (zero-padded if larger).
  GeneratingMatrixSet left_upper(std::size_t r, std::size_t c) const {
    GeneratingMatrixSet out{{}, alpha, polynomials, t};
    out.matrices.reserve(matrices.size());
    for (const auto& m : matrices) out.matrices.push_back(m.resized(r, c));
    return out;
  }

  // e_{j,k,l} = 0 whenever k > factor * l (1-based k, l).
  bool has_zero_tail(std::size_t factor) const {
    for (const auto& m : matrices) {
      for (std::size_t k = 0; k < m.rows(); ++k) {
        for (std::size_t l = 0; l < m.cols(); ++l) {
          if (k + 1 > factor * (l + 1) && m(k, l)) return false;
        }
      }
    }
    return true;
  }

  std::string describe() const {
    std::string s = "digital d=" + std::to_string(dimension()) + " alpha=" + std::to_string(alpha) +
                    " rows=" + std::to_string(rows()) + " cols=" + std::to_string(cols());
    if (!polynomials.empty()) {
      s += " polys=";
      for (std::size_t i = 0; i < polynomials.size(); ++i) {
        if (i) s += ";";
        s += polynomials[i].to_string();
      }
    }
    return s;
  }
};

}  // namespace hoqmc
