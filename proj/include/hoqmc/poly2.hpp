#pragma once

// Polynomials over Z2 of unbounded degree, coefficient i stored at bit i.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hoqmc/error.hpp"

namespace hoqmc {

class Poly2 {
 public:
  using Word = std::uint64_t;

  Poly2() = default;

  static Poly2 from_mask(Word mask) {
    Poly2 p;
    if (mask != 0) p.w_.push_back(mask);
    return p;
  }

  static Poly2 monomial(std::size_t degree) {
    Poly2 p;
    p.w_.assign(degree / 64 + 1, 0);
    p.w_.back() = Word{1} << (degree % 64);
    return p;
  }

  bool is_zero() const noexcept { return w_.empty(); }

  // -1 for the zero polynomial.
  long degree() const noexcept {
    if (w_.empty()) return -1;
    return static_cast<long>(64 * (w_.size() - 1)) + std::bit_width(w_.back()) - 1;
  }

  bool coeff(std::size_t i) const noexcept {
    const std::size_t w = i / 64;
    return w < w_.size() && ((w_[w] >> (i % 64)) & 1U);
  }

  Word mask() const {
    if (w_.size() > 1) throw ArgumentError("Poly2::mask: degree exceeds 63");
    return w_.empty() ? 0 : w_[0];
  }

  Poly2& operator^=(const Poly2& o) {
    if (o.w_.size() > w_.size()) w_.resize(o.w_.size(), 0);
    for (std::size_t i = 0; i < o.w_.size(); ++i) w_[i] ^= o.w_[i];
    normalize();
    return *this;
  }

  friend Poly2 operator^(Poly2 a, const Poly2& b) {
    a ^= b;
    return a;
  }

  friend Poly2 operator*(const Poly2& a, const Poly2& b) {
    if (a.is_zero() || b.is_zero()) return {};
    Poly2 r;
    r.w_.assign(a.w_.size() + b.w_.size(), 0);
    for (std::size_t i = 0; i < a.w_.size(); ++i) {
      for (unsigned bit = 0; bit < 64; ++bit) {
        if (!((a.w_[i] >> bit) & 1U)) continue;
        // r ^= b << (64 i + bit)
        for (std::size_t j = 0; j < b.w_.size(); ++j) {
          r.w_[i + j] ^= b.w_[j] << bit;
          if (bit != 0) r.w_[i + j + 1] ^= b.w_[j] >> (64 - bit);
        }
      }
    }
    r.normalize();
    return r;
  }

  Poly2 pow(std::size_t e) const {
    Poly2 result = from_mask(1);
    Poly2 base = *this;
    while (e != 0) {
      if (e & 1U) result = result * base;
      e >>= 1;
      if (e != 0) base = base * base;
    }
    return result;
  }

  // Quotient and remainder of *this by a nonzero divisor.
  std::pair<Poly2, Poly2> divmod(const Poly2& divisor) const {
    if (divisor.is_zero()) throw ArgumentError("Poly2::divmod: division by zero");
    Poly2 rem = *this;
    Poly2 quot;
    const long dd = divisor.degree();
    long rd = rem.degree();
    if (rd >= dd) quot.w_.assign(static_cast<std::size_t>(rd - dd) / 64 + 1, 0);
    while (rd >= dd) {
      const auto shift = static_cast<std::size_t>(rd - dd);
      quot.w_[shift / 64] |= Word{1} << (shift % 64);
      rem.xor_shifted(divisor, shift);
      rd = rem.degree();
    }
    quot.normalize();
    return {std::move(quot), std::move(rem)};
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::string s;
    for (long i = degree(); i >= 0; --i) {
      if (!coeff(static_cast<std::size_t>(i))) continue;
      if (!s.empty()) s += "+";
      if (i == 0) {
        s += "1";
      } else if (i == 1) {
        s += "x";
      } else {
        s += "x^" + std::to_string(i);
      }
    }
    return s;
  }

  friend bool operator==(const Poly2&, const Poly2&) = default;

 private:
  void normalize() {
    while (!w_.empty() && w_.back() == 0) w_.pop_back();
  }

  void xor_shifted(const Poly2& p, std::size_t shift) {
    const std::size_t ws = shift / 64;
    const unsigned bs = shift % 64;
    const std::size_t need = p.w_.size() + ws + 1;
    if (w_.size() < need) w_.resize(need, 0);
    for (std::size_t j = 0; j < p.w_.size(); ++j) {
      w_[j + ws] ^= p.w_[j] << bs;
      if (bs != 0) w_[j + ws + 1] ^= p.w_[j] >> (64 - bs);
    }
    normalize();
  }

  std::vector<Word> w_;  // no trailing zero words
};

}  // namespace hoqmc
