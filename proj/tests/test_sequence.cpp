#include <gtest/gtest.h>

#include <random>
#include <set>
#include <vector>

#include "hoqmc/interlace.hpp"
#include "hoqmc/sequence.hpp"

using hoqmc::DyadicPoint;
using hoqmc::PointSet;

namespace {

std::vector<double> values(const PointSet& p) {
  std::vector<double> v;
  for (std::size_t n = 0; n < p.size(); ++n) {
    for (std::size_t j = 0; j < p.dimension(); ++j) v.push_back(p.value(n, j));
  }
  return v;
}

std::vector<hoqmc::GeneratingMatrixSet> small_generators(std::size_t m) {
  std::vector<hoqmc::GeneratingMatrixSet> gs;
  for (std::size_t d = 1; d <= 2; ++d) {
    for (std::size_t alpha = 1; alpha <= 2; ++alpha) gs.push_back(hoqmc::build_interlaced(d, alpha, m));
  }
  return gs;
}

}  // namespace

TEST(DigitVector, Examples) {
  EXPECT_EQ(hoqmc::digit_vector(6, 4).to_string(), "0110");
  EXPECT_EQ(hoqmc::digit_vector(0, 3).to_string(), "000");
  EXPECT_EQ(hoqmc::digit_vector(1, 1).to_string(), "1");
  EXPECT_THROW(hoqmc::digit_vector(8, 3), hoqmc::ArgumentError);
}

TEST(SumOfDigits, Examples) {
  for (unsigned m = 1; m < 64; ++m) {
    EXPECT_EQ(hoqmc::sum_of_digits((std::uint64_t{1} << m) - 1), m);
    EXPECT_EQ(hoqmc::sum_of_digits(std::uint64_t{1} << m), 1U);
  }
  EXPECT_EQ(hoqmc::sum_of_digits(13), 3U);
  EXPECT_THROW(hoqmc::sum_of_digits(0), hoqmc::ArgumentError);
}

TEST(GeneratePoints, VanDerCorput) {
  const auto g = hoqmc::build_matrices(1, 2, 2);
  EXPECT_EQ(values(hoqmc::generate_points(g, 4, 2)), (std::vector<double>{0, 0.5, 0.25, 0.75}));
}

TEST(GeneratePoints, SobolPair) {
  const auto g = hoqmc::build_matrices(2, 2, 2);
  EXPECT_EQ(values(hoqmc::generate_points(g, 4, 2)), (std::vector<double>{0, 0, 0.5, 0.5, 0.25, 0.75, 0.75, 0.25}));
}

TEST(GeneratePoints, FirstPointIsOrigin) {
  for (const auto& g : small_generators(5)) {
    const auto p = hoqmc::generate_points(g, 1, static_cast<unsigned>(g.rows()));
    for (std::size_t j = 0; j < p.dimension(); ++j) EXPECT_EQ(p.numerator(0, j), 0U);
  }
}

TEST(GeneratePoints, MatchesMatrixVectorProducts) {
  const auto g = hoqmc::build_interlaced(2, 2, 5);
  const auto p = hoqmc::generate_points(g, 32, 10);
  for (std::uint64_t n = 0; n < 32; ++n) {
    const auto v = hoqmc::digit_vector(n, 5);
    for (std::size_t j = 0; j < 2; ++j) {
      const auto y = hoqmc::gf2::matvec(g.matrices[j], v);
      for (unsigned i = 1; i <= 10; ++i) EXPECT_EQ((p.numerator(n, j) >> (10 - i)) & 1U, y[i - 1] ? 1U : 0U);
    }
  }
}

TEST(GeneratePoints, RejectsInsufficientExtent) {
  const auto g = hoqmc::build_matrices(1, 4, 3);
  EXPECT_THROW(hoqmc::generate_points(g, 9, 4), hoqmc::DimensionError);
  EXPECT_THROW(hoqmc::generate_points(g, 8, 5), hoqmc::DimensionError);
  EXPECT_NO_THROW(hoqmc::generate_points(g, 8, 4));
}

TEST(DigitalShift, Examples) {
  PointSet p(1, 1);
  p.push_back(std::vector<std::uint64_t>{1});
  const auto zero = hoqmc::digital_shift(p, DyadicPoint{{0}, 1});
  EXPECT_EQ(zero, p);
  const auto s = hoqmc::digital_shift(p, DyadicPoint{{1}, 1});
  EXPECT_EQ(s.numerator(0, 0), 0U);
}

TEST(DigitalShift, IsAnInvolution) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const unsigned w = 1 + static_cast<unsigned>(rng() % 64);
    PointSet p(2, w);
    for (int i = 0; i < 5; ++i) p.push_back(std::vector<std::uint64_t>{rng() & hoqmc::low_mask(w), rng() & hoqmc::low_mask(w)});
    const DyadicPoint sigma{{rng() & hoqmc::low_mask(w), rng() & hoqmc::low_mask(w)}, w};
    EXPECT_EQ(hoqmc::digital_shift(hoqmc::digital_shift(p, sigma), sigma), p);
  }
}

TEST(DigitalShift, AlignsLowerPrecision) {
  PointSet p(1, 4);
  p.push_back(std::vector<std::uint64_t>{0b0011});
  const auto s = hoqmc::digital_shift(p, DyadicPoint{{1}, 1});
  EXPECT_EQ(s.precision(), 4U);
  EXPECT_EQ(s.numerator(0, 0), 0b1011U);
}

TEST(NetStructure, SubgroupUnderDigitalAddition) {
  for (std::size_t m = 1; m <= 6; ++m) {
    for (const auto& g : small_generators(m)) {
      const auto w = static_cast<unsigned>(g.rows());
      const auto p = hoqmc::generate_points(g, std::uint64_t{1} << m, w);
      std::set<std::vector<std::uint64_t>> net;
      for (std::size_t n = 0; n < p.size(); ++n) net.insert({p.coords(n).begin(), p.coords(n).end()});
      for (std::size_t a = 0; a < p.size(); ++a) {
        for (std::size_t b = 0; b < p.size(); ++b) {
          std::vector<std::uint64_t> x(p.dimension());
          for (std::size_t j = 0; j < x.size(); ++j) x[j] = p.numerator(a, j) ^ p.numerator(b, j);
          ASSERT_TRUE(net.count(x)) << m;
        }
      }
    }
  }
}

TEST(NetStructure, LinearInIndex) {
  for (std::size_t m = 1; m <= 6; ++m) {
    for (const auto& g : small_generators(m)) {
      const auto p = hoqmc::generate_points(g, std::uint64_t{1} << m, static_cast<unsigned>(g.rows()));
      for (std::size_t a = 0; a < p.size(); ++a) {
        for (std::size_t b = 0; b < p.size(); ++b) {
          for (std::size_t j = 0; j < p.dimension(); ++j) {
            ASSERT_EQ(p.numerator(a ^ b, j), p.numerator(a, j) ^ p.numerator(b, j));
          }
        }
      }
    }
  }
}

TEST(BlockDecomposition, Basics) {
  EXPECT_EQ(hoqmc::binary_decomposition(13), (std::vector<unsigned>{3, 2, 0}));
  const std::vector<unsigned> e{3, 2, 0};
  EXPECT_EQ(hoqmc::block_offset(e, 1), 0U);
  EXPECT_EQ(hoqmc::block_offset(e, 3), 12U);
  EXPECT_THROW(hoqmc::block_offset(std::vector<unsigned>{2, 3}, 1), hoqmc::ArgumentError);
  EXPECT_THROW(hoqmc::block_offset(e, 4), hoqmc::ArgumentError);
}

TEST(TailShift, FirstBlockHasNoShift) {
  const auto g = hoqmc::build_interlaced(2, 2, 8);
  const auto e = hoqmc::binary_decomposition(200);
  const auto s = hoqmc::tail_shift_vector(g, e, 1, 16);
  for (auto c : s.coords) EXPECT_EQ(c, 0U);
}

TEST(TailShift, VanDerCorputDigitsReversed) {
  const auto g = hoqmc::build_matrices(1, 8, 8);
  for (std::uint64_t n = 1; n <= 256; ++n) {
    const auto e = hoqmc::binary_decomposition(n);
    for (std::size_t i = 1; i <= e.size(); ++i) {
      const auto off = hoqmc::block_offset(e, i);
      const std::uint64_t high = off >> e[i - 1];
      std::uint64_t expect = 0;  // digit b of `high` lands at position m_i + 1 + b
      for (unsigned b = 0; b < 8; ++b) {
        if ((high >> b) & 1U && e[i - 1] + 1 + b <= 8) expect |= std::uint64_t{1} << (8 - (e[i - 1] + 1 + b));
      }
      EXPECT_EQ(hoqmc::tail_shift_vector(g, e, i, 8).coords[0], expect) << n << " block " << i;
    }
  }
}

TEST(TailShift, BlocksAreShiftedNets) {
  for (const auto& g : small_generators(8)) {
    const auto w = static_cast<unsigned>(g.rows());
    const auto all = hoqmc::generate_points(g, 256, w);
    for (std::uint64_t n = 1; n <= 256; ++n) {
      const auto e = hoqmc::binary_decomposition(n);
      for (std::size_t i = 1; i <= e.size(); ++i) {
        const auto mi = e[i - 1];
        const auto net = hoqmc::generate_points(g.left_upper(g.rows(), std::max<std::size_t>(mi, 1)), std::uint64_t{1} << mi, w);
        const auto shifted = hoqmc::digital_shift(net, hoqmc::tail_shift_vector(g, e, i, w));
        const auto off = hoqmc::block_offset(e, i);
        for (std::size_t q = 0; q < shifted.size(); ++q) {
          for (std::size_t j = 0; j < g.dimension(); ++j) ASSERT_EQ(shifted.numerator(q, j), all.numerator(off + q, j));
        }
      }
    }
  }
}

TEST(PointSet, RejectsBadInput) {
  EXPECT_THROW(PointSet(0, 4), hoqmc::DimensionError);
  EXPECT_THROW(PointSet(1, 65), hoqmc::RefusalError);
  PointSet p(2, 3);
  EXPECT_THROW(p.push_back(std::vector<std::uint64_t>{1}), hoqmc::DimensionError);
  EXPECT_THROW(p.push_back(std::vector<std::uint64_t>{8, 0}), hoqmc::ArgumentError);
}
