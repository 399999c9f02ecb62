#pragma once

// Sobol'/Niederreiter generating matrices over Z2.
//
// Coordinate j uses the polynomial p_j: p_1 = x, then the primitive
// polynomials in order of increasing degree. Row k of C_j (1-based) with
// k - 1 = (i - 1) e_j + z holds the first L coefficients of the Laurent
// expansion of x^(e_j - z - 1) / p_j(x)^i in powers of 1/x.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "hoqmc/error.hpp"
#include "hoqmc/generating_matrices.hpp"
#include "hoqmc/gf2.hpp"
#include "hoqmc/poly2.hpp"

namespace hoqmc {

namespace detail {

// Degree of a nonzero polynomial mask; -1 for zero.
constexpr int mask_degree(std::uint64_t mask) noexcept { return static_cast<int>(std::bit_width(mask)) - 1; }

// a * b mod p for masks of degree < deg(p) <= 32.
inline std::uint64_t mulmod_mask(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  const int deg = mask_degree(p);
  std::uint64_t r = 0;
  while (b != 0) {
    if (b & 1U) r ^= a;
    b >>= 1;
    a <<= 1;
    if ((a >> deg) & 1U) a ^= p;
  }
  return r;
}

inline std::uint64_t mod_mask(std::uint64_t a, std::uint64_t p) {
  const int dp = mask_degree(p);
  for (int da = mask_degree(a); da >= dp; da = mask_degree(a)) a ^= p << (da - dp);
  return a;
}

inline std::uint64_t powmod_x(std::uint64_t e, std::uint64_t p) {
  std::uint64_t result = 1;
  std::uint64_t base = mod_mask(0b10, p);
  while (e != 0) {
    if (e & 1U) result = mulmod_mask(result, base, p);
    e >>= 1;
    base = mulmod_mask(base, base, p);
  }
  return result;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> f;
  for (std::uint64_t q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      f.push_back(q);
      while (n % q == 0) n /= q;
    }
  }
  if (n > 1) f.push_back(n);
  return f;
}

}  // namespace detail

inline constexpr int kMaxPrimitiveDegree = 32;

// Trial division by every polynomial of degree 1..deg/2.
inline bool is_irreducible(std::uint64_t mask) {
  const int deg = detail::mask_degree(mask);
  if (deg < 1) return false;
  if (deg > kMaxPrimitiveDegree) throw ArgumentError("is_irreducible: degree above 32");
  for (int dq = 1; dq <= deg / 2; ++dq) {
    for (std::uint64_t q = std::uint64_t{1} << dq; q < (std::uint64_t{1} << (dq + 1)); ++q) {
      if (detail::mod_mask(mask, q) == 0) return false;
    }
  }
  return true;
}

// Irreducible and x has multiplicative order 2^deg - 1 modulo the polynomial.
inline bool is_primitive(std::uint64_t mask) {
  if (!is_irreducible(mask)) return false;
  const int deg = detail::mask_degree(mask);
  const std::uint64_t order = (std::uint64_t{1} << deg) - 1;
  if (detail::powmod_x(order, mask) != 1) return false;
  for (std::uint64_t q : detail::prime_factors(order)) {
    if (detail::powmod_x(order / q, mask) == 1) return false;
  }
  return true;
}

// x followed by primitive polynomials, sorted by degree and then by mask.
inline std::vector<Poly2> primitive_polynomials(std::size_t count) {
  if (count == 0) throw ArgumentError("primitive_polynomials: count must be at least 1");
  std::vector<Poly2> out{Poly2::from_mask(0b10)};
  for (int deg = 1; out.size() < count; ++deg) {
    if (deg > kMaxPrimitiveDegree) throw RefusalError("primitive_polynomials: degree budget exhausted");
    const std::uint64_t lo = std::uint64_t{1} << deg;
    for (std::uint64_t mask = lo | 1U; mask < (lo << 1) && out.size() < count; mask += 2) {
      if (is_primitive(mask)) out.push_back(Poly2::from_mask(mask));
    }
  }
  return out;
}

// Coefficients of x^numerator_degree / divisor; the remainder only touches
// powers below x^(-length), so the quotient of the shifted division is exact.
inline gf2::BitVector laurent_expand_power(const Poly2& divisor, std::size_t numerator_degree, std::size_t length) {
  const auto [quot, rem] = Poly2::monomial(numerator_degree + length).divmod(divisor);
  gf2::BitVector a(length);
  for (std::size_t l = 1; l <= length; ++l) {
    if (quot.coeff(length - l)) a.set(l - 1, true);
  }
  return a;
}

// a_1..a_L of x^(e - z - 1) / p^i = sum_l a_l x^(-l), stored at indices 0..L-1.
inline gf2::BitVector laurent_expand(const Poly2& p, std::size_t i, std::size_t z, std::size_t length) {
  const long e = p.degree();
  if (e < 1) throw ArgumentError("laurent_expand: polynomial must have positive degree");
  if (i < 1) throw ArgumentError("laurent_expand: power must be at least 1");
  if (z >= static_cast<std::size_t>(e)) throw ArgumentError("laurent_expand: z must be below deg(p)");
  if (length < 1) throw ArgumentError("laurent_expand: length must be at least 1");
  return laurent_expand_power(p.pow(i), static_cast<std::size_t>(e) - z - 1, length);
}

// C_1..C_d with `rows` x `cols` entries each; t = sum_j (e_j - 1).
inline GeneratingMatrixSet build_matrices(std::size_t d, std::size_t rows, std::size_t cols) {
  if (d < 1 || rows < 1 || cols < 1) throw ArgumentError("build_matrices: d, rows and cols must be positive");
  GeneratingMatrixSet set;
  set.polynomials = primitive_polynomials(d);
  set.alpha = 1;
  for (const auto& p : set.polynomials) {
    const auto e = static_cast<std::size_t>(p.degree());
    set.t += e - 1;
    gf2::BitMatrix c(rows, cols);
    Poly2 power = p;
    std::size_t current_i = 1;
    for (std::size_t k = 0; k < rows; ++k) {
      const std::size_t i = k / e + 1;
      const std::size_t z = k % e;
      if (i != current_i) {
        power = power * p;
        current_i = i;
      }
      c.set_row(k, laurent_expand_power(power, e - z - 1, cols));
    }
    set.matrices.push_back(std::move(c));
  }
  return set;
}

}  // namespace hoqmc
