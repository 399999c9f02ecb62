#pragma once

// Walsh analysis of the periodic L2-discrepancy in base 2.
//
// The periodic kernel K(x,y) = 1 + 3 B2({x - y}) has the Walsh expansion
// K(x,y) = sum_{k,l} rho(k,l) wal_k(x) wal_l(y) with
//
//   rho(k,l) = sum_h beta_{h,k} conj(beta_{h,l}) / r(h)^2,
//   beta_{h,k} = int_0^1 e^{2 pi i h x} wal_k(x) dx,  r(h)^2 = 4 pi^2 h^2 / 6.
//
// Writing k = 2^{a1-1} + 2^{a2-1} + ... (a1 > a2 > ...), k' = k - 2^{a1-1},
// k'' = k' - 2^{a2-1}, and likewise b1, b2, l', l'' for l, the coefficients
// for k, l >= 1 are
//
//   k = l:                 2^{-2 a1 - 1} if k is a power of two, else 2^{-2 a1 + 1}
//   k' = l' > 0, k != l:   3 * 2^{-a1 - b1 - 1}
//   k'' = l:              -3 * 2^{-a1 - a2 - 1}
//   k = l'':              -3 * 2^{-b1 - b2 - 1}
//   otherwise:             0
//
// and rho(0,0) = 1, rho(k,0) = rho(0,l) = 0. These follow from the integral
// definition and are checked against it by exact integration in the tests.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hoqmc/dyadic.hpp"
#include "hoqmc/error.hpp"
#include "hoqmc/generating_matrices.hpp"
#include "hoqmc/gf2.hpp"
#include "hoqmc/measures.hpp"
#include "hoqmc/sequence.hpp"
#include "hoqmc/summation.hpp"

namespace hoqmc::walsh {

// Position of the leading binary digit; mu(0) = 0.
constexpr unsigned mu(std::uint64_t k) noexcept { return static_cast<unsigned>(std::bit_width(k)); }

// k' : k without its leading digit.
constexpr std::uint64_t drop_leading(std::uint64_t k) noexcept { return k == 0 ? 0 : k ^ std::bit_floor(k); }

struct WalshIndex {
  std::uint64_t k = 0;
  unsigned a1 = 0;  // mu(k)
  unsigned a2 = 0;  // second digit position, 0 if k has fewer than two digits
  std::uint64_t k1 = 0;                 // k'
  std::optional<std::uint64_t> k2;      // k'', defined when k has at least two digits

  static constexpr WalshIndex of(std::uint64_t k) noexcept {
    WalshIndex w;
    w.k = k;
    w.a1 = mu(k);
    w.k1 = drop_leading(k);
    if (w.k1 != 0) {
      w.a2 = mu(w.k1);
      w.k2 = drop_leading(w.k1);
    }
    return w;
  }
};

namespace detail {

constexpr std::uint64_t reverse_bits(std::uint64_t x) noexcept {
  x = ((x >> 1) & 0x5555555555555555ULL) | ((x & 0x5555555555555555ULL) << 1);
  x = ((x >> 2) & 0x3333333333333333ULL) | ((x & 0x3333333333333333ULL) << 2);
  x = ((x >> 4) & 0x0F0F0F0F0F0F0F0FULL) | ((x & 0x0F0F0F0F0F0F0F0FULL) << 4);
  x = ((x >> 8) & 0x00FF00FF00FF00FFULL) | ((x & 0x00FF00FF00FF00FFULL) << 8);
  x = ((x >> 16) & 0x0000FFFF0000FFFFULL) | ((x & 0x0000FFFF0000FFFFULL) << 16);
  return (x >> 32) | (x << 32);
}

// Digits xi_1..xi_W of numerator / 2^W as bits 0..W-1.
constexpr std::uint64_t digits_lsb_first(std::uint64_t numerator, unsigned precision) noexcept {
  return precision == 0 ? 0 : reverse_bits(numerator) >> (64 - precision);
}

}  // namespace detail

// wal_k(x) = (-1)^{xi_1 kappa_0 + xi_2 kappa_1 + ...} for x = numerator / 2^precision.
constexpr int walsh_eval(std::uint64_t k, std::uint64_t numerator, unsigned precision) noexcept {
  return (std::popcount(detail::digits_lsb_first(numerator, precision) & k) & 1) ? -1 : 1;
}

inline int walsh_eval(std::uint64_t k, const Dyadic& x) { return walsh_eval(k, x.numerator, x.precision); }

inline int walsh_eval_vector(std::span<const std::uint64_t> k, const DyadicPoint& x) {
  if (k.size() != x.dimension()) throw DimensionError("walsh_eval_vector: dimension mismatch");
  int s = 1;
  for (std::size_t j = 0; j < k.size(); ++j) s *= walsh_eval(k[j], x.coords[j], x.precision);
  return s;
}

enum class RhoCase { origin, axis, diagonal, shared_tail, left_drops_two, right_drops_two, vanishing };

constexpr RhoCase rho_case(std::uint64_t k, std::uint64_t l) noexcept {
  if (k == 0 && l == 0) return RhoCase::origin;
  if (k == 0 || l == 0) return RhoCase::axis;
  if (k == l) return RhoCase::diagonal;
  const auto wk = WalshIndex::of(k);
  const auto wl = WalshIndex::of(l);
  if (wk.k1 == wl.k1 && wk.k1 > 0) return RhoCase::shared_tail;
  if (wk.k2 && *wk.k2 == l) return RhoCase::left_drops_two;
  if (wl.k2 && *wl.k2 == k) return RhoCase::right_drops_two;
  return RhoCase::vanishing;
}

inline double rho_coefficient(std::uint64_t k, std::uint64_t l) noexcept {
  const auto wk = WalshIndex::of(k);
  const auto wl = WalshIndex::of(l);
  const int a1 = static_cast<int>(wk.a1);
  const int b1 = static_cast<int>(wl.a1);
  switch (rho_case(k, l)) {
    case RhoCase::origin:
      return 1.0;
    case RhoCase::diagonal:
      return std::ldexp(1.0, wk.k1 == 0 ? -2 * a1 - 1 : -2 * a1 + 1);
    case RhoCase::shared_tail:
      return 3.0 * std::ldexp(1.0, -a1 - b1 - 1);
    case RhoCase::left_drops_two:
      return -3.0 * std::ldexp(1.0, -a1 - static_cast<int>(wk.a2) - 1);
    case RhoCase::right_drops_two:
      return -3.0 * std::ldexp(1.0, -b1 - static_cast<int>(wl.a2) - 1);
    case RhoCase::axis:
    case RhoCase::vanishing:
      return 0.0;
  }
  return 0.0;
}

inline double rho_vector(std::span<const std::uint64_t> k, std::span<const std::uint64_t> l) {
  if (k.size() != l.size()) throw DimensionError("rho_vector: dimension mismatch");
  double r = 1.0;
  for (std::size_t j = 0; j < k.size() && r != 0.0; ++j) r *= rho_coefficient(k[j], l[j]);
  return r;
}

struct RhoTerm {
  std::uint64_t l = 0;
  double value = 0.0;
};

// Every l < 2^cap_level with rho(k,l) != 0, in increasing order of l.
inline std::vector<RhoTerm> rho_support(std::uint64_t k, unsigned cap_level) {
  if (cap_level > 62) throw RefusalError("rho_support: cap level above 62");
  const std::uint64_t cap = std::uint64_t{1} << cap_level;
  std::vector<RhoTerm> out;
  if (k >= cap) return out;
  if (k == 0) {
    out.push_back({0, 1.0});
    return out;
  }
  const auto wk = WalshIndex::of(k);
  auto push = [&](std::uint64_t l) {
    if (l < cap) out.push_back({l, rho_coefficient(k, l)});
  };
  push(k);
  if (wk.k1 > 0) {
    for (unsigned b = mu(wk.k1) + 1; b <= cap_level; ++b) {
      if (b != wk.a1) push((std::uint64_t{1} << (b - 1)) | wk.k1);
    }
  }
  if (wk.k2 && *wk.k2 > 0) push(*wk.k2);
  for (unsigned b2 = mu(k) + 1; b2 <= cap_level; ++b2) {
    for (unsigned b1 = b2 + 1; b1 <= cap_level; ++b1) push((std::uint64_t{1} << (b1 - 1)) | (std::uint64_t{1} << (b2 - 1)) | k);
  }
  std::sort(out.begin(), out.end(), [](const RhoTerm& a, const RhoTerm& b) { return a.l < b.l; });
  return out;
}

namespace detail {

// sum |rho(k,l)| over k, l >= 0 split by whether max(mu(k), mu(l)) <= level.
struct RhoMass {
  double inside = 0.0;
  double outside = 0.0;
};

inline RhoMass rho_mass_split(unsigned level) {
  constexpr unsigned kTop = 160;  // 2^-160 is far below double resolution of the sums
  CompensatedSum inside, outside;
  auto add = [&](unsigned top, double v) { (top <= level ? inside : outside).add(v); };
  add(0, 1.0);
  for (unsigned a = 1; a <= kTop; ++a) {
    // Diagonal: one power of two and 2^{a-1} - 1 other indices with mu = a.
    add(a, std::ldexp(1.0, -2 * static_cast<int>(a) - 1) +
               (std::ldexp(1.0, static_cast<int>(a) - 1) - 1.0) * std::ldexp(1.0, -2 * static_cast<int>(a) + 1));
  }
  for (unsigned s = 1; s <= kTop; ++s) {
    const double tails = std::ldexp(1.0, static_cast<int>(s) - 1);  // indices with mu = s
    for (unsigned a = s + 1; a <= kTop; ++a) {
      for (unsigned b = s + 1; b <= kTop; ++b) {
        if (a == b) continue;
        add(std::max(a, b), tails * 3.0 * std::ldexp(1.0, -static_cast<int>(a + b) - 1));
      }
      // a plays a1, b2 < a plays a2; both orientations k''=l and k=l''.
      for (unsigned a2 = s + 1; a2 < a; ++a2) add(a, 2.0 * tails * 3.0 * std::ldexp(1.0, -static_cast<int>(a + a2) - 1));
    }
  }
  return {inside.value(), outside.value()};
}

}  // namespace detail

// sum of |rho(k,l)| over 0 <= k, l < 2^cap_level.
inline double rho_abs_mass(unsigned cap_level) { return detail::rho_mass_split(cap_level).inside; }

// Bound on |exact - truncated| for (1/3^d) sum rho(k,l) (...) when every
// coordinate index is restricted below 2^cap_level and the summands other
// than rho have modulus at most 1: (A^d - A_c^d) / 3^d with A the full
// absolute mass and A_c the in-box mass.
inline double rho_truncation_bound(unsigned cap_level, std::size_t d) {
  const auto m = detail::rho_mass_split(cap_level);
  const double full = m.inside + m.outside;
  double s = 0.0;  // A^d - A_c^d = T * sum_i A^i A_c^{d-1-i}
  for (std::size_t i = 0; i < d; ++i) {
    s += std::pow(full, static_cast<double>(i)) * std::pow(m.inside, static_cast<double>(d - 1 - i));
  }
  return m.outside * s / std::pow(3.0, static_cast<double>(d));
}

// Flat list of index vectors, `dimension` entries per member.
struct IndexList {
  std::size_t dimension = 0;
  std::vector<std::uint64_t> flat;

  std::size_t size() const noexcept { return dimension == 0 ? 0 : flat.size() / dimension; }
  std::span<const std::uint64_t> operator[](std::size_t i) const { return {flat.data() + i * dimension, dimension}; }
};

// The dual net {k : C_1^T k_1 + ... + C_d^T k_d = 0} of matrices with p
// rows and m <= 64 columns. Digit vectors have length p: digits of k_j at
// positions >= p do not enter the condition.
class DualNet {
 public:
  explicit DualNet(std::span<const gf2::BitMatrix> matrices) {
    if (matrices.empty()) throw DimensionError("DualNet: no matrices");
    digits_ = matrices.front().rows();
    cols_ = matrices.front().cols();
    if (cols_ > 64) throw RefusalError("DualNet: more than 64 columns");
    for (const auto& m : matrices) {
      if (m.rows() != digits_ || m.cols() != cols_) throw DimensionError("DualNet: matrices of different extent");
      std::vector<std::uint64_t> rows(digits_);
      for (std::size_t i = 0; i < digits_; ++i) rows[i] = m.row_word(i);
      rows_.push_back(std::move(rows));
    }
  }

  explicit DualNet(const GeneratingMatrixSet& g) : DualNet(std::span<const gf2::BitMatrix>(g.matrices)) {}

  std::size_t dimension() const noexcept { return rows_.size(); }
  std::size_t digits() const noexcept { return digits_; }

  std::uint64_t syndrome(std::span<const std::uint64_t> k) const {
    if (k.size() != rows_.size()) throw DimensionError("DualNet: dimension mismatch");
    std::uint64_t s = 0;
    for (std::size_t j = 0; j < k.size(); ++j) {
      std::uint64_t bits = digits_ >= 64 ? k[j] : k[j] & low_mask(static_cast<unsigned>(digits_));
      for (; bits != 0; bits &= bits - 1) s ^= rows_[j][std::countr_zero(bits)];
    }
    return s;
  }

  bool contains(std::span<const std::uint64_t> k) const { return syndrome(k) == 0; }

  // Rank of the stacked rows of all matrices.
  std::size_t rank() const {
    gf2::XorBasis b;
    for (const auto& rows : rows_) {
      for (auto r : rows) b.insert(r);
    }
    return b.size();
  }

  // log2 of the number of members with every k_j < 2^cap_level.
  std::size_t member_count_log2(unsigned cap_level) const {
    return rows_.size() * cap_level - rank_within(cap_level);
  }

  // Members with every k_j < 2^cap_level, sorted. Enumerates a nullspace
  // basis; refuses when the box has more than 2^max_bits indices.
  IndexList members(unsigned cap_level, unsigned max_bits = 24) const {
    const std::size_t d = rows_.size();
    const std::size_t unknowns = d * cap_level;
    if (cap_level > 63 || unknowns > max_bits) {
      throw RefusalError("DualNet::members: index box of 2^" + std::to_string(unknowns) +
                         " exceeds the enumeration budget 2^" + std::to_string(max_bits));
    }
    // Unknown u = j * cap_level + i is digit i of k_j.
    std::vector<std::uint64_t> pivot_vec, pivot_combo, null_basis;
    for (std::size_t u = 0; u < unknowns; ++u) {
      const std::size_t j = u / cap_level;
      const std::size_t i = u % cap_level;
      std::uint64_t v = i < digits_ ? rows_[j][i] : 0;
      std::uint64_t combo = std::uint64_t{1} << u;
      for (std::size_t p = 0; p < pivot_vec.size(); ++p) {
        if (v & std::bit_floor(pivot_vec[p])) {
          v ^= pivot_vec[p];
          combo ^= pivot_combo[p];
        }
      }
      if (v == 0) {
        null_basis.push_back(combo);
      } else {
        // Keep pivots reduced so one pass of the loop above suffices.
        const std::uint64_t lead = std::bit_floor(v);
        for (std::size_t p = 0; p < pivot_vec.size(); ++p) {
          if (pivot_vec[p] & lead) {
            pivot_vec[p] ^= v;
            pivot_combo[p] ^= combo;
          }
        }
        pivot_vec.push_back(v);
        pivot_combo.push_back(combo);
      }
    }
    const std::size_t count = std::size_t{1} << null_basis.size();
    std::vector<std::uint64_t> packed;
    packed.reserve(count);
    std::uint64_t cur = 0;
    packed.push_back(cur);
    for (std::size_t g = 1; g < count; ++g) {
      cur ^= null_basis[static_cast<std::size_t>(std::countr_zero(g))];
      packed.push_back(cur);
    }
    IndexList out{d, {}};
    out.flat.reserve(count * d);
    std::vector<std::vector<std::uint64_t>> unpacked;
    unpacked.reserve(count);
    for (auto p : packed) {
      std::vector<std::uint64_t> k(d);
      for (std::size_t j = 0; j < d; ++j) k[j] = (p >> (j * cap_level)) & low_mask(cap_level);
      unpacked.push_back(std::move(k));
    }
    std::sort(unpacked.begin(), unpacked.end());
    for (const auto& k : unpacked) out.flat.insert(out.flat.end(), k.begin(), k.end());
    return out;
  }

 private:
  std::size_t rank_within(unsigned cap_level) const {
    gf2::XorBasis b;
    for (const auto& rows : rows_) {
      for (std::size_t i = 0; i < rows.size() && i < cap_level; ++i) b.insert(rows[i]);
    }
    return b.size();
  }

  std::size_t digits_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::vector<std::uint64_t>> rows_;
};

struct DualNetQuery {
  std::vector<gf2::BitMatrix> matrices;
  // Per-coordinate bound 2^cap_level; 0 means the digit length (rows).
  unsigned cap_level = 0;
};

inline IndexList dual_net_members(const DualNetQuery& q) {
  const DualNet dual(q.matrices);
  const unsigned cap = q.cap_level == 0 ? static_cast<unsigned>(dual.digits()) : q.cap_level;
  return dual.members(cap, 24);
}

// Squared periodic L2-discrepancy of the (optionally digitally shifted) net
// generated by `net`, as the double Walsh sum over dual-net members with all
// indices below 2^cap_level. The report's tail_bound covers the omitted
// indices.
inline MeasureReport walsh_series_l2(const GeneratingMatrixSet& net, const std::optional<DyadicPoint>& shift,
                                     unsigned cap_level, unsigned max_bits = 26) {
  net.validate();
  const std::size_t d = net.dimension();
  if (shift && shift->dimension() != d) throw DimensionError("walsh_series_l2: shift dimension mismatch");
  const DualNet dual(net);
  const IndexList members = dual.members(cap_level, max_bits);

  std::vector<std::vector<RhoTerm>> support_cache(std::size_t{1} << cap_level);
  std::vector<bool> cached(support_cache.size(), false);
  auto support = [&](std::uint64_t k) -> const std::vector<RhoTerm>& {
    if (!cached[k]) {
      support_cache[k] = rho_support(k, cap_level);
      cached[k] = true;
    }
    return support_cache[k];
  };
  auto wal_shift = [&](std::span<const std::uint64_t> k) { return shift ? walsh_eval_vector(k, *shift) : 1; };

  CompensatedSum total;
  std::vector<std::uint64_t> l(d);
  std::vector<std::size_t> pos(d);
  for (std::size_t mi = 0; mi < members.size(); ++mi) {
    const auto k = members[mi];
    if (std::all_of(k.begin(), k.end(), [](std::uint64_t x) { return x == 0; })) continue;
    const int wk = wal_shift(k);
    std::vector<const std::vector<RhoTerm>*> sup(d);
    for (std::size_t j = 0; j < d; ++j) sup[j] = &support(k[j]);
    // Odometer over the product of per-coordinate supports.
    std::fill(pos.begin(), pos.end(), 0);
    while (true) {
      double r = 1.0;
      bool nonzero_l = false;
      for (std::size_t j = 0; j < d; ++j) {
        const auto& term = (*sup[j])[pos[j]];
        l[j] = term.l;
        r *= term.value;
        nonzero_l = nonzero_l || term.l != 0;
      }
      if (nonzero_l && dual.contains(l)) total.add(r * wk * wal_shift(l));
      std::size_t j = 0;
      while (j < d && ++pos[j] == sup[j]->size()) pos[j++] = 0;
      if (j == d) break;
    }
  }
  const double squared = total.value() / std::pow(3.0, static_cast<double>(d));
  auto rep = make_report(Measure::periodic_l2, Method::walsh, squared, std::size_t{1} << net.cols(), d, net.describe());
  rep.truncation = cap_level;
  rep.tail_bound = rho_truncation_bound(cap_level, d);
  return rep;
}

// Squared periodic L2-discrepancy of an arbitrary point set through the
// truncated Walsh expansion of the kernel: every index below 2^cap_level.
inline MeasureReport walsh_series_l2_points(const PointSet& p, unsigned cap_level) {
  require_points(p, "walsh_series_l2_points");
  if (cap_level > 16) throw RefusalError("walsh_series_l2_points: cap level above 16");
  const std::uint64_t cap = std::uint64_t{1} << cap_level;
  std::vector<std::vector<RhoTerm>> supports(cap);
  for (std::uint64_t k = 0; k < cap; ++k) supports[k] = rho_support(k, cap_level);
  const unsigned w = p.precision();

  // Truncated kernel minus its k = l = 0 term.
  auto truncated_excess = [&](std::uint64_t x, std::uint64_t y) {
    CompensatedSum s;
    for (std::uint64_t k = 1; k < cap; ++k) {
      const int wx = walsh_eval(k, x, w);
      for (const auto& t : supports[k]) s.add(t.value * wx * walsh_eval(t.l, y, w));
    }
    return s.value();
  };

  const std::size_t n = p.size();
  const std::size_t d = p.dimension();
  CompensatedSum total;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      hoqmc::detail::ExcessProduct prod;
      for (std::size_t j = 0; j < d; ++j) prod.times_one_plus(truncated_excess(p.numerator(a, j), p.numerator(b, j)));
      total.add(prod.value());
    }
  }
  const auto nn = static_cast<double>(n);
  const double squared = total.value() / (nn * nn) / std::pow(3.0, static_cast<double>(d));
  auto rep = make_report(Measure::periodic_l2, Method::walsh, squared, n, d, p.generator());
  rep.truncation = cap_level;
  rep.tail_bound = rho_truncation_bound(cap_level, d);
  return rep;
}

}  // namespace hoqmc::walsh
