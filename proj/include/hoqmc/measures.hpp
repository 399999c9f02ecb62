#pragma once

// Periodic L2-discrepancy and diaphony of finite point sets.
//
// Both measures are weighted sums of squared exponential sums,
//
//   prefactor * sum_{h != 0} w(h)^-2 |(1/N) sum_n exp(2 pi i h.x_n)|^2,
//
// with product weights. Per coordinate, sum_{h != 0} c e^{2 pi i h t}/h^2 =
// 2 pi^2 c B2({t}), so the squared measure collapses to a pairwise kernel
//
//   prefactor * N^-2 sum_{n,p} (prod_j (1 + 2 pi^2 c B2({x_nj - x_pj})) - 1).
//
// Each pair contributes its excess over 1, so the result never comes from
// subtracting two nearly equal large numbers.
//
// Periodic L2: c = 6/(4 pi^2), prefactor 3^-d, factor 1 + 3 B2.
// Diaphony:    c = 1,          prefactor 1,    factor 1 + 2 pi^2 B2.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "hoqmc/dyadic.hpp"
#include "hoqmc/error.hpp"
#include "hoqmc/sequence.hpp"
#include "hoqmc/summation.hpp"

namespace hoqmc {

enum class Measure { periodic_l2, diaphony };
enum class Method { kernel, fourier, walsh };

constexpr std::string_view to_string(Measure m) noexcept {
  return m == Measure::periodic_l2 ? "per-l2" : "diaphony";
}

constexpr std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::kernel:
      return "kernel";
    case Method::fourier:
      return "fourier";
    case Method::walsh:
      return "walsh";
  }
  return "?";
}

struct WeightScheme {
  Measure measure = Measure::periodic_l2;
  // w(h)^-2 = coefficient / h^2 for h != 0; w(0) = 1.
  double coefficient = 0.0;
  // Global prefactor is prefactor_base^d.
  double prefactor_base = 1.0;

  static WeightScheme periodic_l2() {
    return {Measure::periodic_l2, 6.0 / (4.0 * std::numbers::pi * std::numbers::pi), 1.0 / 3.0};
  }
  static WeightScheme diaphony() { return {Measure::diaphony, 1.0, 1.0}; }
  static WeightScheme of(Measure m) { return m == Measure::periodic_l2 ? periodic_l2() : diaphony(); }

  double inverse_weight_squared(long h) const {
    if (h == 0) return 1.0;
    const auto hh = static_cast<double>(h);
    return coefficient / (hh * hh);
  }

  double prefactor(std::size_t d) const { return std::pow(prefactor_base, static_cast<double>(d)); }
};

struct MeasureReport {
  Measure measure = Measure::periodic_l2;
  Method method = Method::kernel;
  double value = 0.0;
  double squared = 0.0;
  std::size_t n = 0;
  std::size_t d = 0;
  // Frequency bound H (fourier) or per-coordinate index cap level (walsh).
  std::optional<std::uint64_t> truncation;
  // Upper bound on |exact squared - reported squared| from truncation.
  std::optional<double> tail_bound;
  std::string generator;
};

// t^2 - t + 1/6.
constexpr double bernoulli2(double t) noexcept { return t * t - t + 1.0 / 6.0; }

inline MeasureReport make_report(Measure m, Method method, double squared, std::size_t n, std::size_t d,
                                 std::string generator) {
  MeasureReport r;
  r.measure = m;
  r.method = method;
  r.squared = squared;
  r.value = std::sqrt(std::max(squared, 0.0));
  r.n = n;
  r.d = d;
  r.generator = std::move(generator);
  return r;
}

namespace detail {

// {x_n - x_p} as a double, computed exactly on numerators first.
inline double torus_difference(std::uint64_t a, std::uint64_t b, std::uint64_t mask, double scale) noexcept {
  return static_cast<double>((a - b) & mask) * scale;
}

// prod_j (1 + u_j) - 1, accumulated without forming the product first.
class ExcessProduct {
 public:
  void times_one_plus(double u) noexcept { f_ += u * (1.0 + f_); }
  double value() const noexcept { return f_; }

 private:
  double f_ = 0.0;
};

// 3 B2(t) = 3 t (t - 1) + 1/2. Every pair carries the constant, and 1/2 is
// exact where 1/6 is not.
constexpr double three_b2(double t) noexcept { return 3.0 * (t * (t - 1.0)) + 0.5; }

// Rows of the pair loop are split into fixed-size chunks whose compensated
// sums are merged in chunk order, so results do not depend on thread count.
inline constexpr std::size_t kRowChunk = 32;

}  // namespace detail

// sum_{n,p} (prod_j K(x_nj - x_pj) - 1) for both measures in one pass.
//
// With u_j = 3 B2 the L2 factor is 1 + u_j and the diaphony factor is
// 1 + c u_j, c = 2 pi^2 / 3. Both excesses are sum_k c^k e_k(u) with e_k the
// elementary symmetric polynomials, so only sum_{n,p} e_k is accumulated.
struct KernelSums {
  double periodic_l2 = 0.0;
  double diaphony = 0.0;
};

inline KernelSums pair_kernel_sums(const PointSet& p, unsigned threads = 1) {
  const std::size_t n = p.size();
  const std::size_t d = p.dimension();
  const std::uint64_t mask = low_mask(p.precision());
  const double scale = std::ldexp(1.0, -static_cast<int>(p.precision()));
  const double dia_scale = 2.0 * std::numbers::pi * std::numbers::pi / 3.0;
  const std::size_t chunks = (n + detail::kRowChunk - 1) / detail::kRowChunk;
  // sums[c * d + k - 1] holds chunk c's sum of e_k.
  std::vector<CompensatedSum> sums(chunks * d);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    std::vector<double> e(d + 1);
    std::vector<CompensatedSum> row(d);
    for (std::size_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) {
      const std::size_t hi = std::min(n, (c + 1) * detail::kRowChunk);
      for (std::size_t a = c * detail::kRowChunk; a < hi; ++a) {
        const auto xa = p.coords(a);
        std::fill(row.begin(), row.end(), CompensatedSum{});
        for (std::size_t b = a + 1; b < n; ++b) {
          const auto xb = p.coords(b);
          std::fill(e.begin(), e.end(), 0.0);
          e[0] = 1.0;
          for (std::size_t j = 0; j < d; ++j) {
            const double u = detail::three_b2(detail::torus_difference(xa[j], xb[j], mask, scale));
            for (std::size_t k = j + 1; k >= 1; --k) e[k] += u * e[k - 1];
          }
          for (std::size_t k = 1; k <= d; ++k) row[k - 1].add(e[k]);
        }
        for (std::size_t k = 0; k < d; ++k) sums[c * d + k].add(2.0 * row[k].value());
      }
    }
  };
  const unsigned t = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(chunks, 1))));
  if (t == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < t; ++i) pool.emplace_back(worker);
  }

  std::vector<CompensatedSum> total(d);
  for (std::size_t c = 0; c < chunks; ++c) {
    for (std::size_t k = 0; k < d; ++k) total[k].add(sums[c * d + k]);
  }
  // Diagonal: {0} = 0, u_j = 1/2, e_k = binom(d, k) 2^-k.
  double binom = 1.0;
  for (std::size_t k = 1; k <= d; ++k) {
    binom = binom * static_cast<double>(d - k + 1) / static_cast<double>(k);
    total[k - 1].add(static_cast<double>(n) * binom * std::ldexp(1.0, -static_cast<int>(k)));
  }
  CompensatedSum l2, dia;
  double ck = 1.0;
  for (std::size_t k = 0; k < d; ++k) {
    ck *= dia_scale;
    l2.add(total[k].value());
    dia.add(ck * total[k].value());
  }
  return {l2.value(), dia.value()};
}

inline MeasureReport kernel_report(Measure m, const PointSet& p, double excess_sum) {
  const auto s = WeightScheme::of(m);
  const auto nn = static_cast<double>(p.size());
  const double squared = s.prefactor(p.dimension()) * (excess_sum / (nn * nn));
  return make_report(m, Method::kernel, squared, p.size(), p.dimension(), p.generator());
}

inline void require_points(const PointSet& p, std::string_view what) {
  if (p.empty()) throw ArgumentError(std::string(what) + ": empty point set");
}

inline MeasureReport periodic_l2(const PointSet& p, unsigned threads = 1) {
  require_points(p, "periodic_l2");
  return kernel_report(Measure::periodic_l2, p, pair_kernel_sums(p, threads).periodic_l2);
}

inline MeasureReport diaphony(const PointSet& p, unsigned threads = 1) {
  require_points(p, "diaphony");
  return kernel_report(Measure::diaphony, p, pair_kernel_sums(p, threads).diaphony);
}

inline MeasureReport measure_kernel(Measure m, const PointSet& p, unsigned threads = 1) {
  return m == Measure::periodic_l2 ? periodic_l2(p, threads) : diaphony(p, threads);
}

// Partial sum over the frequency box max_j |h_j| <= H, h != 0. The box
// factorizes per coordinate, so it is evaluated as a pair sum of truncated
// cosine series (no closed form involved).
inline MeasureReport fourier_truncated(const PointSet& p, const WeightScheme& scheme, std::uint64_t h_max) {
  require_points(p, "fourier_truncated");
  if (h_max < 1) throw ArgumentError("fourier_truncated: H must be at least 1");
  const std::size_t n = p.size();
  const std::size_t d = p.dimension();
  const std::uint64_t mask = low_mask(p.precision());
  const double scale = std::ldexp(1.0, -static_cast<int>(p.precision()));
  const double two_pi = 2.0 * std::numbers::pi;

  // Truncated factor minus its h = 0 term.
  auto truncated_excess = [&](double delta) {
    CompensatedSum s;
    for (std::uint64_t h = h_max; h >= 1; --h) {
      s.add(2.0 * scheme.inverse_weight_squared(static_cast<long>(h)) * std::cos(two_pi * static_cast<double>(h) * delta));
    }
    return s.value();
  };

  const double diag_excess = truncated_excess(0.0);
  detail::ExcessProduct diag;
  for (std::size_t j = 0; j < d; ++j) diag.times_one_plus(diag_excess);
  CompensatedSum total;
  total.add(static_cast<double>(n) * diag.value());
  for (std::size_t a = 0; a < n; ++a) {
    const auto xa = p.coords(a);
    CompensatedSum row;
    for (std::size_t b = a + 1; b < n; ++b) {
      const auto xb = p.coords(b);
      detail::ExcessProduct k;
      for (std::size_t j = 0; j < d; ++j) k.times_one_plus(truncated_excess(detail::torus_difference(xa[j], xb[j], mask, scale)));
      row.add(k.value());
    }
    total.add(2.0 * row.value());
  }
  const auto nn = static_cast<double>(n);
  const double squared = scheme.prefactor(d) * (total.value() / (nn * nn));
  auto r = make_report(scheme.measure, Method::fourier, squared, n, d, p.generator());
  r.truncation = h_max;
  // Each factor misses at most 2 c / H and both the full and the truncated
  // factor are bounded by K(0).
  const double full = 1.0 + 2.0 * std::numbers::pi * std::numbers::pi * scheme.coefficient / 6.0;
  const double miss = 2.0 * scheme.coefficient / static_cast<double>(h_max);
  const auto dd = static_cast<double>(d);
  r.tail_bound = scheme.prefactor(d) * dd * miss * std::pow(full, dd - 1.0);
  return r;
}

}  // namespace hoqmc
