#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hoqmc/interlace.hpp"
#include "hoqmc/measures.hpp"
#include "oracles.hpp"

using hoqmc::PointSet;

namespace {

constexpr double kPi = std::numbers::pi;

PointSet points_1d(std::vector<std::uint64_t> nums, unsigned w) {
  PointSet p(1, w);
  for (auto x : nums) p.push_back(std::vector<std::uint64_t>{x});
  return p;
}

void expect_rel(double got, double want, double tol) { EXPECT_LE(std::fabs(got - want), tol * std::fabs(want)) << got << " vs " << want; }

PointSet torus_shift(const PointSet& p, const std::vector<std::uint64_t>& c) {
  PointSet q(p.dimension(), p.precision());
  std::vector<std::uint64_t> x(p.dimension());
  for (std::size_t n = 0; n < p.size(); ++n) {
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = (p.numerator(n, j) + c[j]) & hoqmc::low_mask(p.precision());
    q.push_back(x);
  }
  return q;
}

}  // namespace

TEST(Bernoulli2, Values) {
  EXPECT_DOUBLE_EQ(hoqmc::bernoulli2(0.0), 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(hoqmc::bernoulli2(0.5), -1.0 / 12.0);
  for (double t = 0.01; t < 1.0; t += 0.037) EXPECT_NEAR(hoqmc::bernoulli2(t), hoqmc::bernoulli2(1.0 - t), 1e-15);
}

TEST(Kernel, SinglePoint) {
  const auto p = points_1d({5}, 4);
  expect_rel(hoqmc::periodic_l2(p).value, 1.0 / std::sqrt(6.0), 1e-12);
  expect_rel(hoqmc::diaphony(p).value, kPi / std::sqrt(3.0), 1e-12);
}

TEST(Kernel, TwoPoints) {
  const auto p = points_1d({0, 1}, 1);
  expect_rel(hoqmc::periodic_l2(p).value, 1.0 / std::sqrt(24.0), 1e-12);
  expect_rel(hoqmc::diaphony(p).value, kPi / std::sqrt(12.0), 1e-12);
}

TEST(Kernel, VanDerCorputIsExact) {
  // N L2 = 1/sqrt(6) for the first 2^m points
  const auto g = hoqmc::build_matrices(1, 14, 14);
  for (unsigned m = 0; m <= 14; ++m) {
    const auto p = hoqmc::generate_points(g, std::uint64_t{1} << m, 14);
    expect_rel(hoqmc::periodic_l2(p).value * static_cast<double>(p.size()), 1.0 / std::sqrt(6.0), 1e-14);
  }
}

TEST(Kernel, EmptySetRejected) { EXPECT_THROW(hoqmc::periodic_l2(PointSet(1, 3)), hoqmc::ArgumentError); }

TEST(Kernel, OneDimensionalProportionality) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = oracle::random_points(rng, 1 + rng() % 200, 1, 1 + static_cast<unsigned>(rng() % 53));
    expect_rel(kPi * std::sqrt(2.0) * hoqmc::periodic_l2(p).value, hoqmc::diaphony(p).value, 1e-12);
  }
}

TEST(Kernel, TorusShiftInvariance) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 1 + rng() % 4;
    const unsigned w = 1 + static_cast<unsigned>(rng() % 53);
    const auto p = oracle::random_points(rng, 1 + rng() % 100, d, w);
    std::vector<std::uint64_t> c(d);
    for (auto& x : c) x = rng() & hoqmc::low_mask(w);
    const auto q = torus_shift(p, c);
    expect_rel(hoqmc::periodic_l2(q).value, hoqmc::periodic_l2(p).value, 1e-12);
    expect_rel(hoqmc::diaphony(q).value, hoqmc::diaphony(p).value, 1e-12);
  }
}

TEST(Kernel, ThreadCountDoesNotChangeResult) {
  std::mt19937_64 rng(23);
  const auto p = oracle::random_points(rng, 500, 3, 40);
  const auto one = hoqmc::pair_kernel_sums(p, 1);
  for (unsigned t : {2U, 3U, 8U}) {
    const auto many = hoqmc::pair_kernel_sums(p, t);
    EXPECT_EQ(one.periodic_l2, many.periodic_l2);
    EXPECT_EQ(one.diaphony, many.diaphony);
  }
}

TEST(Kernel, SquaredValuesNonnegative) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = oracle::random_points(rng, 1 + rng() % 300, 1 + rng() % 3, 30);
    EXPECT_GE(hoqmc::periodic_l2(p).squared, -1e-9);
    EXPECT_GE(hoqmc::diaphony(p).squared, -1e-9);
  }
}

TEST(Fourier, SinglePointDiaphonyFirstTerms) {
  const auto p = points_1d({3}, 3);
  EXPECT_NEAR(hoqmc::fourier_truncated(p, hoqmc::WeightScheme::diaphony(), 1).squared, 2.0, 1e-14);
}

TEST(Fourier, AgreesWithDirectFrequencySum) {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t d = 1 + rng() % 3;
    const auto p = oracle::random_points(rng, 1 + rng() % 12, d, 20);
    for (auto scheme : {hoqmc::WeightScheme::periodic_l2(), hoqmc::WeightScheme::diaphony()}) {
      const double direct = scheme.prefactor(d) * oracle::fourier_direct(p, scheme.coefficient, 6);
      EXPECT_NEAR(hoqmc::fourier_truncated(p, scheme, 6).squared, direct, 1e-12 * std::max(1.0, direct));
    }
  }
}

TEST(Fourier, MonotoneInTruncation) {
  std::mt19937_64 rng(26);
  const auto p = oracle::random_points(rng, 9, 2, 20);
  double prev = 0.0;
  for (std::uint64_t h = 1; h <= 40; ++h) {
    const double v = hoqmc::fourier_truncated(p, hoqmc::WeightScheme::diaphony(), h).squared;
    EXPECT_GE(v, prev - 1e-13);
    prev = v;
  }
}

TEST(Fourier, ConvergesToKernelWithinTailBound) {
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 1 + rng() % 3;
    const auto p = oracle::random_points(rng, 1 + rng() % 64, d, 30);
    for (auto m : {hoqmc::Measure::periodic_l2, hoqmc::Measure::diaphony}) {
      const auto f = hoqmc::fourier_truncated(p, hoqmc::WeightScheme::of(m), 512);
      const auto k = hoqmc::measure_kernel(m, p);
      EXPECT_GE(k.squared - f.squared, -1e-12);
      EXPECT_LE(k.squared - f.squared, *f.tail_bound);
    }
  }
}

TEST(Fourier, OneDimensionalTailEstimate) {
  // |fourier(H) - kernel| <= 3/(pi^2 H) times the kernel scale 1/3 in d = 1
  std::mt19937_64 rng(28);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = oracle::random_points(rng, 1 + rng() % 64, 1, 30);
    const auto f = hoqmc::fourier_truncated(p, hoqmc::WeightScheme::periodic_l2(), 512);
    const auto k = hoqmc::periodic_l2(p);
    EXPECT_LE(std::fabs(f.squared - k.squared), 3.0 / (kPi * kPi * 512.0) / 3.0);
  }
}

TEST(Report, Fields) {
  const auto r = hoqmc::periodic_l2(points_1d({0, 1}, 1));
  EXPECT_EQ(r.n, 2U);
  EXPECT_EQ(r.d, 1U);
  EXPECT_EQ(r.method, hoqmc::Method::kernel);
  EXPECT_FALSE(r.truncation.has_value());
  EXPECT_DOUBLE_EQ(r.value, std::sqrt(r.squared));
}
