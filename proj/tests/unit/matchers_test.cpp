#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "patchchar/matchers.hpp"
#include "support.hpp"

namespace patchchar {
namespace {

using testing::BruteForceConeDistance;
using testing::BruteForceRanks;
using testing::DistinctPatch;
using testing::PlainPearson;

Eigen::VectorXd Vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

ErrorKind KindOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorKind::kConfig;
}

TEST(Ssd, Examples) {
  const Eigen::VectorXd a = Vec({0.3, 0.7});
  EXPECT_EQ(ssd(a, a), 0.0);
  EXPECT_EQ(ssd(Vec({0, 0}), Vec({1, 1})), 2.0);
  EXPECT_EQ(KindOf([] { ssd(Vec({0, 0}), Vec({1, 1, 1})); }),
            ErrorKind::kDimensionMismatch);
}

TEST(Ncc, Examples) {
  std::mt19937_64 gen(1);
  const PixelMatrix<double> p = DistinctPatch(5, gen);
  EXPECT_NEAR(ncc(p, (2.0 * p.array() + 0.1).matrix()), 1.0, 1e-12);
  EXPECT_NEAR(ncc(p, (1.0 - p.array()).matrix()), -1.0, 1e-12);
  const PixelMatrix<double> flat = PixelMatrix<double>::Constant(5, 5, 0.4);
  EXPECT_EQ(KindOf([&] { ncc(flat, p); }), ErrorKind::kUndefinedCorrelation);
}

TEST(Spearman, Examples) {
  std::mt19937_64 gen(2);
  const PixelMatrix<double> p = DistinctPatch(7, gen);
  const PixelMatrix<double> up = p.unaryExpr([](double v) { return v * v; });
  const PixelMatrix<double> down = p.unaryExpr([](double v) { return -v; });
  EXPECT_EQ(spearman_rho(p, up), 1.0);
  EXPECT_EQ(spearman_rho(p, down), -1.0);
  EXPECT_EQ(abs_spearman(p, down), 1.0);
  EXPECT_NEAR(spearman_rho(Vec({1, 1, 2}), Vec({2, 1, 1})), -0.5, 1e-15);
  EXPECT_EQ(KindOf([] { spearman_rho(Vec({3, 3, 3}), Vec({1, 2, 3})); }),
            ErrorKind::kUndefinedCorrelation);
}

TEST(Spearman, MatchesDirectRankPearson) {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<int> level(0, 9);
  for (int trial = 0; trial < 300; ++trial) {
    Eigen::VectorXd a(49), b(49);
    for (Index i = 0; i < 49; ++i) {
      a(i) = level(gen);
      b(i) = level(gen);
    }
    const double want = PlainPearson(BruteForceRanks(a), BruteForceRanks(b));
    EXPECT_NEAR(spearman_rho(a, b), want, 1e-12);
  }
}

TEST(OrdinalHamming, Examples) {
  std::mt19937_64 gen(4);
  const PixelMatrix<double> p = DistinctPatch(5, gen);
  EXPECT_EQ(ordinal_hamming(p, p.unaryExpr([](double v) { return std::exp(v); })),
            0);
  EXPECT_EQ(ordinal_hamming(Vec({1, 2, 3}), Vec({2, 1, 3})), 2);
}

TEST(Projection, Examples) {
  EXPECT_EQ(project_to_order_cone(Vec({1, 2}), Vec({5, 3})), Vec({4, 4}));
  EXPECT_DOUBLE_EQ(rank_consistency_distance(Vec({1, 2}), Vec({5, 3})), 1.0);
  EXPECT_EQ(project_to_order_cone(Vec({1, 2, 3}), Vec({3, 2, 1})),
            Vec({2, 2, 2}));
  EXPECT_NEAR(rank_consistency_distance(Vec({1, 2, 3}), Vec({3, 2, 1})),
              2.0 / 3.0, 1e-15);
  EXPECT_EQ(rank_consistency_distance(Vec({1, 2, 3}), Vec({0.1, 0.5, 0.9})),
            0.0);
}

TEST(Projection, LiteralVariant) {
  // ||q_b - [4, 4]||^2 / 2 = (9 + 4) / 2
  EXPECT_DOUBLE_EQ(rank_consistency_distance(Vec({1, 2}), Vec({5, 3}),
                                             ProjectionVariant::kLiteral),
                   6.5);
}

TEST(Projection, MatchesBruteForceConeMinimization) {
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<int> tie_level(0, 3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (Index n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < 40; ++trial) {
      Eigen::VectorXd q_b(n), q_c(n);
      for (Index i = 0; i < n; ++i) {
        q_b(i) = trial % 2 ? tie_level(gen) : u(gen);
        q_c(i) = u(gen);
      }
      EXPECT_NEAR(rank_consistency_distance(q_b, q_c),
                  BruteForceConeDistance(q_b, q_c), 1e-9)
          << "n=" << n << " trial=" << trial;
    }
  }
}

TEST(Projection, NotSymmetric) {
  const Eigen::VectorXd a = Vec({1, 2, 3, 4});
  const Eigen::VectorXd b = Vec({1, 10, 2, 3});
  EXPECT_NE(rank_consistency_distance(a, b), rank_consistency_distance(b, a));
}

TEST(Dct, ConstantBlock) {
  const CoeffBlock<double> c = dct2(Eigen::MatrixXd::Constant(2, 2, 5.0));
  EXPECT_NEAR(c(0, 0), 10.0, 1e-12);
  EXPECT_NEAR(c(0, 1), 0.0, 1e-12);
  EXPECT_NEAR(c(1, 0), 0.0, 1e-12);
  EXPECT_NEAR(c(1, 1), 0.0, 1e-12);
}

TEST(Dct, RoundTripAndParseval) {
  std::mt19937_64 gen(6);
  for (Index s : {3, 5, 8, 13, 21}) {
    const PixelMatrix<double> p = DistinctPatch(s % 2 ? s : s + 1, gen);
    const CoeffBlock<double> c = dct2(p);
    EXPECT_LT((idct2(c) - p).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_NEAR(c.squaredNorm(), p.squaredNorm(), 1e-9);
  }
}

TEST(Dct, Linear) {
  std::mt19937_64 gen(7);
  const PixelMatrix<double> a = DistinctPatch(9, gen);
  const PixelMatrix<double> b = DistinctPatch(9, gen);
  EXPECT_LT((dct2(PixelMatrix<double>(2.0 * a - 3.0 * b)) -
             (2.0 * dct2(a) - 3.0 * dct2(b)))
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
}

TEST(Dct, ZigZagStartsLikeJpeg) {
  const auto z = zigzag_order(4);
  ASSERT_EQ(z.size(), 16u);
  const Index want[][2] = {{0, 0}, {0, 1}, {1, 0}, {2, 0}, {1, 1}, {0, 2}};
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(z[i].row, want[i][0]) << i;
    EXPECT_EQ(z[i].col, want[i][1]) << i;
  }
  EXPECT_EQ(z.back().row, 3);
  EXPECT_EQ(z.back().col, 3);
}

Index ZigZagIndexOf(Index n, Index row, Index col) {
  const auto z = zigzag_order(n);
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i].row == row && z[i].col == col) return static_cast<Index>(i);
  }
  return -1;
}

TEST(DctSignature, ConstantIsEmpty) {
  const DctSignature s =
      dct_signature(dct2(Eigen::MatrixXd::Constant(7, 7, 0.3)), 3);
  EXPECT_TRUE(s.pos_idx.empty());
  EXPECT_TRUE(s.neg_idx.empty());
}

TEST(DctSignature, SingleBasisFunction) {
  CoeffBlock<double> c = CoeffBlock<double>::Zero(7, 7);
  c(0, 0) = 3.0;
  c(1, 2) = 0.5;
  const Eigen::MatrixXd patch = idct2(c);
  const DctSignature s = dct_signature(dct2(patch), 3);
  ASSERT_EQ(s.pos_idx.size(), 1u);
  EXPECT_EQ(s.pos_idx[0], ZigZagIndexOf(7, 1, 2));
  EXPECT_TRUE(s.neg_idx.empty());
}

TEST(DctSignature, GainInvariant) {
  std::mt19937_64 gen(8);
  const PixelMatrix<double> p = DistinctPatch(9, gen);
  const DctSignature a = dct_signature(dct2(p), 3);
  const DctSignature b = dct_signature(dct2(PixelMatrix<double>(1.7 * p)), 3);
  EXPECT_EQ(a.pos_idx, b.pos_idx);
  EXPECT_EQ(a.neg_idx, b.neg_idx);
  EXPECT_EQ(a.pos_idx.size(), 3u);
}

TEST(DctRo, AffineAndIdentity) {
  std::mt19937_64 gen(9);
  const PixelMatrix<double> p = DistinctPatch(13, gen, 0.2, 0.6);
  EXPECT_EQ(dct_ro_distance(p, p, 3), 0.0);
  EXPECT_EQ(dct_ro_distance(p, PixelMatrix<double>(1.3 * p.array() + 0.05), 3),
            0.0);
}

TEST(DctRo, GratingVersusChecker) {
  PixelMatrix<double> grating(13, 13), checker(13, 13);
  for (Index r = 0; r < 13; ++r) {
    for (Index c = 0; c < 13; ++c) {
      grating(r, c) = 0.5 + 0.4 * std::sin(2 * std::numbers::pi * c / 6.0);
      checker(r, c) = ((r / 3 + c / 3) % 2) ? 0.8 : 0.2;
    }
  }
  const double d = dct_ro_distance(grating, checker, 3);
  EXPECT_GT(d, 0.0);
  EXPECT_LE(d, 1.0);
}

TEST(DctEnergy, GainCancels) {
  std::mt19937_64 gen(10);
  const CoeffBlock<double> c = dct2(DistinctPatch(13, gen));
  EXPECT_EQ(dct_energy_difference(c, c), 0.0);
  EXPECT_NEAR(dct_energy_difference(c, CoeffBlock<double>(1.6 * c)), 0.0,
              1e-15);
}

TEST(DctEnergy, SingleCoefficientOnConstant) {
  const Index n = 13;
  // Constant patch 1/n has DC exactly 1, so the ring gains e^2.
  const Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  const double e = 0.3;
  CoeffBlock<double> bump = CoeffBlock<double>::Zero(n, n);
  bump(2, 3) = e;
  const Eigen::MatrixXd cur = flat + idct2(bump);
  EXPECT_NEAR(dct_energy_difference(dct2(flat), dct2(cur)), e * e, 1e-12);
}

TEST(DctEnergy, ZeroDcIsAnError) {
  const CoeffBlock<double> zero = CoeffBlock<double>::Zero(5, 5);
  EXPECT_EQ(KindOf([&] { dct_energy_difference(zero, zero); }),
            ErrorKind::kDegenerate);
}

TEST(RadialRing, CoversAllBins) {
  EXPECT_EQ(radial_ring(0, 1, 13, 4), 0);
  EXPECT_EQ(radial_ring(12, 12, 13, 4), 3);
  EXPECT_EQ(radial_ring(7, 7, 13, 4), 2);
}

TEST(Registry, NamesAndPolarity) {
  const std::vector<std::string> want{"ssd",        "ncc",     "rho",
                                      "abs_rho",    "ro_hamming", "ro_proj",
                                      "dct_energy", "dct_ro"};
  EXPECT_EQ(matcher_names(), want);
  EXPECT_EQ(get_matcher("abs_rho").polarity, Polarity::kLowerIsChanged);
  EXPECT_EQ(get_matcher("dct_ro").polarity, Polarity::kHigherIsChanged);
  EXPECT_EQ(get_matcher("ssd").polarity, Polarity::kHigherIsChanged);
  EXPECT_EQ(KindOf([] { get_matcher("sad"); }), ErrorKind::kConfig);
  EXPECT_FALSE(has_matcher("sad"));
}

TEST(Registry, FunctionsMatchDirectCalls) {
  std::mt19937_64 gen(11);
  const PixelMatrix<double> a = DistinctPatch(9, gen);
  const PixelMatrix<double> b = DistinctPatch(9, gen);
  EXPECT_EQ(get_matcher("ssd").fn(a, b), ssd(a, b));
  EXPECT_EQ(get_matcher("abs_rho").fn(a, b), abs_spearman(a, b));
  EXPECT_EQ(get_matcher("ro_hamming").fn(a, b),
            static_cast<double>(ordinal_hamming(a, b)));
  MatcherOptions opt;
  opt.dct_pairs = 5;
  EXPECT_EQ(get_matcher("dct_ro", opt).fn(a, b), dct_ro_distance(a, b, 5));
}

}  // namespace
}  // namespace patchchar
