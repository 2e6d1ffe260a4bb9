#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "patchchar/characterize.hpp"

namespace patchchar {
namespace {

using C = SpatialContext;

CellStats Cell(double mean, Index count, double std = 0.0) {
  CellStats c;
  c.mean = mean;
  c.std = std;
  c.count = count;
  c.min = mean - std;
  c.max = mean + std;
  return c;
}

CriterionManifold Manifold(std::vector<C> contexts, std::vector<double> levels,
                           std::vector<Index> sizes, double fill = 0.5) {
  CriterionManifold m;
  m.metric = "abs_rho";
  m.contexts = std::move(contexts);
  m.levels = std::move(levels);
  m.sizes = std::move(sizes);
  m.cells.assign(m.contexts.size() * m.levels.size() * m.sizes.size(),
                 Cell(fill, 10));
  return m;
}

const Scene& DefaultScene() {
  static const Scene scene = generate_scene(default_scene_spec());
  return scene;
}

SweepOptions SmallSweep() {
  SweepOptions opt;
  opt.sizes = {5, 13};
  opt.samples_per_context = 20;
  opt.seed = 7;
  return opt;
}

TEST(Families, RegisteredNamesAndErrors) {
  EXPECT_EQ(family_names(),
            (std::vector<std::string>{"identity", "global_illumination",
                                      "local_light", "fog"}));
  EXPECT_EQ(make_family("identity").default_levels, std::vector<double>{0.0});
  EXPECT_EQ(make_family("fog").default_levels.size(), 10u);
  try {
    make_family("rain");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
    EXPECT_NE(std::string(e.what()).find("global_illumination"),
              std::string::npos);
  }
}

TEST(Sweep, IdentityFamilyIsExactlyOne) {
  SweepOptions opt = SmallSweep();
  opt.levels = {0.0};
  const CriterionManifold m =
      sweep_manifold(DefaultScene(), make_family("identity"), opt);
  for (std::size_t ci = 0; ci < m.contexts.size(); ++ci) {
    if (m.contexts[ci] == C::kOccluded) continue;
    for (std::size_t si = 0; si < m.sizes.size(); ++si) {
      const CellStats& c = m.Cell(ci, 0, si);
      ASSERT_GT(c.count, 0) << ContextName(m.contexts[ci]);
      EXPECT_EQ(c.mean, 1.0) << ContextName(m.contexts[ci]);
      EXPECT_EQ(c.min, 1.0);
    }
  }
}

TEST(Sweep, ShapeContract) {
  SweepOptions opt = SmallSweep();
  opt.sizes = {5, 9, 13, 17, 21};
  opt.samples_per_context = 3;
  const PerturbationFamily family = make_family("global_illumination");
  opt.levels = family.default_levels;
  const CriterionManifold m = sweep_manifold(DefaultScene(), family, opt);
  EXPECT_EQ(m.cells.size(), 300u);
  std::ostringstream csv;
  write_manifold_csv(m, csv);
  const std::string text = csv.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 301);
  EXPECT_EQ(text.rfind("context,level,size,mean,std,count\n", 0), 0u);
}

TEST(Sweep, OccludedBelowDiffuseAtEveryLevel) {
  SweepOptions opt = SmallSweep();
  opt.sizes = {13};
  opt.contexts = {C::kDiffuse, C::kOccluded};
  const PerturbationFamily family = make_family("global_illumination");
  opt.levels = family.default_levels;
  const CriterionManifold m = sweep_manifold(DefaultScene(), family, opt);
  for (std::size_t li = 0; li < m.levels.size(); ++li) {
    EXPECT_LT(m.Cell(1, li, 0).mean, m.Cell(0, li, 0).mean) << m.levels[li];
  }
}

TEST(Sweep, CellMeansLieWithinSampleRange) {
  SweepOptions opt = SmallSweep();
  const PerturbationFamily family = make_family("local_light");
  opt.levels = {0.3, 0.9};
  opt.sensor = SensorModel{};
  opt.sensor->thermal_sigma = 2.0 / 255.0;
  const CriterionManifold m = sweep_manifold(DefaultScene(), family, opt);
  for (const CellStats& c : m.cells) {
    if (c.count == 0) continue;
    EXPECT_GE(c.mean, c.min);
    EXPECT_LE(c.mean, c.max);
    EXPECT_GE(c.min, 0.0);
    EXPECT_LE(c.max, 1.0);
  }
}

TEST(Sweep, DeterministicAcrossWorkerCounts) {
  SweepOptions opt = SmallSweep();
  const PerturbationFamily family = make_family("fog");
  opt.levels = {0.006, 0.024};
  opt.sensor = SensorModel{};
  opt.sensor->thermal_sigma = 2.0 / 255.0;
  std::ostringstream a, b;
  opt.jobs = 1;
  write_manifold_csv(sweep_manifold(DefaultScene(), family, opt), a);
  opt.jobs = 4;
  write_manifold_csv(sweep_manifold(DefaultScene(), family, opt), b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Sweep, InvalidOptions) {
  SweepOptions opt = SmallSweep();
  opt.levels = {0.5};
  opt.metric = "bogus";
  EXPECT_THROW(sweep_manifold(DefaultScene(), make_family("identity"), opt),
               Error);
  opt = SmallSweep();
  EXPECT_THROW(sweep_manifold(DefaultScene(), make_family("identity"), opt),
               Error);
  opt.levels = {0.5};
  opt.sizes = {4};
  EXPECT_THROW(sweep_manifold(DefaultScene(), make_family("identity"), opt),
               Error);
}

TEST(Marginalize, WeightedMean) {
  CriterionManifold m = Manifold({C::kDiffuse}, {0.1, 0.2}, {13});
  m.Cell(0, 0, 0) = Cell(0.2, 1);
  m.Cell(0, 1, 0) = Cell(0.8, 3);
  const CriterionManifold out = marginalize(m, Axis::kLevels);
  ASSERT_EQ(out.cells.size(), 1u);
  EXPECT_DOUBLE_EQ(out.cells[0].mean, 0.65);
  EXPECT_EQ(out.cells[0].count, 4);
  // Population std of {0.2, 0.8, 0.8, 0.8}.
  EXPECT_NEAR(out.cells[0].std, std::sqrt(0.0675), 1e-15);
}

TEST(Marginalize, SingletonAxisUnchanged) {
  CriterionManifold m = Manifold({C::kDiffuse, C::kEdge}, {0.1, 0.2}, {13});
  m.Cell(0, 1, 0) = Cell(0.3, 4, 0.1);
  m.Cell(1, 0, 0) = Cell(0.9, 7, 0.02);
  const CriterionManifold out = marginalize(m, Axis::kSizes);
  ASSERT_EQ(out.cells.size(), m.cells.size());
  for (std::size_t i = 0; i < m.cells.size(); ++i) {
    EXPECT_DOUBLE_EQ(out.cells[i].mean, m.cells[i].mean);
    EXPECT_DOUBLE_EQ(out.cells[i].std, m.cells[i].std);
    EXPECT_EQ(out.cells[i].count, m.cells[i].count);
  }
}

TEST(Marginalize, UniformManifold) {
  const CriterionManifold m =
      Manifold({C::kDiffuse, C::kEdge, C::kOccluded}, {0.1, 0.2, 0.3}, {5, 9},
               0.42);
  for (Axis axis : {Axis::kContexts, Axis::kLevels, Axis::kSizes}) {
    for (const CellStats& c : marginalize(m, axis, {C::kOccluded}).cells) {
      EXPECT_DOUBLE_EQ(c.mean, 0.42);
    }
  }
}

TEST(Marginalize, ExcludeEverythingIsAnError) {
  const CriterionManifold m = Manifold({C::kDiffuse}, {0.1}, {13});
  EXPECT_THROW(marginalize(m, Axis::kContexts, {C::kDiffuse}), Error);
}

TEST(Summarize, RanksByDescendingMean) {
  CriterionManifold m = Manifold({C::kDiffuse, C::kOccluded}, {0.1}, {13});
  m.Cell(0, 0, 0) = Cell(0.9, 5);
  m.Cell(1, 0, 0) = Cell(0.3, 5);
  const ManifoldSummary s = summarize(m);
  EXPECT_EQ(s.ranking.RankOf(C::kDiffuse), 1);
  EXPECT_EQ(s.ranking.RankOf(C::kOccluded), 2);

  const ManifoldSummary single = summarize(Manifold({C::kEdge}, {0.1}, {13}));
  EXPECT_EQ(single.ranking.ranks, std::vector<int>{1});
}

TEST(Summarize, TiesFollowDeclarationOrder) {
  const CriterionManifold m =
      Manifold({C::kEdge, C::kHomogeneous, C::kDiffuse}, {0.1}, {13}, 0.5);
  const ManifoldSummary s = summarize(m);
  EXPECT_EQ(s.ranking.RankOf(C::kHomogeneous), 1);
  EXPECT_EQ(s.ranking.RankOf(C::kDiffuse), 2);
  EXPECT_EQ(s.ranking.RankOf(C::kEdge), 3);
}

TEST(OptimalSize, Examples) {
  EXPECT_EQ(optimal_patch_size(Manifold({C::kDiffuse}, {0.1}, {13})), 13);
  CriterionManifold peaked = Manifold({C::kDiffuse}, {0.1}, {5, 13, 21});
  peaked.Cell(0, 0, 0) = Cell(0.6, 10);
  peaked.Cell(0, 0, 1) = Cell(0.9, 10);
  peaked.Cell(0, 0, 2) = Cell(0.7, 10);
  EXPECT_EQ(optimal_patch_size(peaked), 13);
  EXPECT_EQ(optimal_patch_size(Manifold({C::kDiffuse}, {0.1}, {21, 9, 13})), 9);
}

TEST(OptimalSize, ExclusionsApply) {
  CriterionManifold m = Manifold({C::kDiffuse, C::kOccluded}, {0.1}, {5, 13});
  m.Cell(0, 0, 0) = Cell(0.8, 10);
  m.Cell(0, 0, 1) = Cell(0.9, 10);
  m.Cell(1, 0, 0) = Cell(0.9, 100);
  m.Cell(1, 0, 1) = Cell(0.1, 100);
  EXPECT_EQ(optimal_patch_size(m), 5);
  EXPECT_EQ(optimal_patch_size(m, {C::kOccluded}), 13);
}

TEST(Roc, Examples) {
  const RocCurve one = roc({2.0}, {1.0}, Polarity::kHigherIsChanged);
  ASSERT_EQ(one.points.size(), 3u);
  EXPECT_EQ(one.points[0].fpr, 0.0);
  EXPECT_EQ(one.points[0].tpr, 0.0);
  EXPECT_EQ(one.points[1].fpr, 0.0);
  EXPECT_EQ(one.points[1].tpr, 1.0);
  EXPECT_EQ(one.points[2].fpr, 1.0);
  EXPECT_EQ(one.points[2].tpr, 1.0);
  EXPECT_EQ(one.auc, 1.0);

  EXPECT_EQ(roc({5, 6, 7}, {1, 2, 3}, Polarity::kHigherIsChanged).auc, 1.0);
  EXPECT_EQ(roc({0.1, 0.2}, {0.8, 0.9}, Polarity::kLowerIsChanged).auc, 1.0);
  EXPECT_THROW(roc({}, {1.0}, Polarity::kHigherIsChanged), Error);
  EXPECT_THROW(roc({1.0}, {}, Polarity::kHigherIsChanged), Error);
}

TEST(Roc, TiesCountHalf) {
  // Mann-Whitney: one win, one tie, two losses out of four pairs.
  EXPECT_DOUBLE_EQ(roc({1.0, 2.0}, {1.0, 3.0}, Polarity::kHigherIsChanged).auc,
                   1.5 / 4.0);
}

TEST(Roc, SameDistributionIsChance) {
  std::mt19937_64 gen(21);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> a(10000), b(10000);
  for (auto& v : a) v = n(gen);
  for (auto& v : b) v = n(gen);
  EXPECT_NEAR(roc(a, b, Polarity::kHigherIsChanged).auc, 0.5, 0.02);
}

TEST(Roc, CurveInvariantsAndComplement) {
  std::mt19937_64 gen(22);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(50), b(70);
    for (auto& v : a) v = u(gen) + 0.2;
    for (auto& v : b) v = u(gen);
    const RocCurve hi = roc(a, b, Polarity::kHigherIsChanged);
    const RocCurve lo = roc(a, b, Polarity::kLowerIsChanged);
    EXPECT_NEAR(hi.auc + lo.auc, 1.0, 1e-12);
    EXPECT_GE(hi.auc, 0.0);
    EXPECT_LE(hi.auc, 1.0);
    for (std::size_t i = 1; i < hi.points.size(); ++i) {
      EXPECT_GE(hi.points[i].fpr, hi.points[i - 1].fpr);
      EXPECT_GE(hi.points[i].tpr, hi.points[i - 1].tpr);
    }
    EXPECT_EQ(hi.points.back().fpr, 1.0);
    EXPECT_EQ(hi.points.back().tpr, 1.0);
  }
}

TEST(RocScores, NoiseFreeSsdSeparatesPerfectly) {
  const RocFrames frames = render_roc_frames(DefaultScene(), nullptr, 3);
  RocRecipe recipe;
  recipe.changed = 40;
  recipe.unchanged = 40;
  recipe.seed = 5;
  const MatcherInfo metric = get_matcher("ssd");
  const RocScores s = roc_scores(frames.reference, frames.current,
                                 DefaultScene().labels, metric, recipe);
  ASSERT_EQ(s.changed.size(), 40u);
  ASSERT_EQ(s.unchanged.size(), 40u);
  for (double v : s.unchanged) EXPECT_EQ(v, 0.0);
  for (double v : s.changed) EXPECT_GT(v, 0.0);
  EXPECT_EQ(roc(s.changed, s.unchanged, metric.polarity).auc, 1.0);
}

TEST(RocScores, Deterministic) {
  const RocFrames frames = render_roc_frames(DefaultScene(), nullptr, 3);
  RocRecipe recipe;
  recipe.changed = 30;
  recipe.unchanged = 30;
  recipe.gain_min = 0.7;
  recipe.gain_max = 1.3;
  recipe.noise = {NoiseChoice::Kind::kGaussian, 0.02};
  recipe.seed = 8;
  const MatcherInfo metric = get_matcher("dct_ro");
  const RocScores a = roc_scores(frames.reference, frames.current,
                                 DefaultScene().labels, metric, recipe);
  const RocScores b = roc_scores(frames.reference, frames.current,
                                 DefaultScene().labels, metric, recipe);
  EXPECT_EQ(a.changed, b.changed);
  EXPECT_EQ(a.unchanged, b.unchanged);
}

TEST(RocScores, ZeroChangedSamplesIsAnError) {
  const RocFrames frames = render_roc_frames(DefaultScene(), nullptr, 3);
  RocRecipe recipe;
  recipe.changed = 0;
  try {
    roc_scores(frames.reference, frames.current, DefaultScene().labels,
               get_matcher("ssd"), recipe);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
  }
}

TEST(WindowCenters, InteriorAndExterior) {
  LabelMap labels = LabelMap::Constant(9, 9, static_cast<std::uint8_t>(C::kDiffuse));
  labels.block(0, 0, 4, 4).setConstant(static_cast<std::uint8_t>(C::kOccluded));
  const auto inside = interior_centers(labels, C::kOccluded, 3);
  EXPECT_EQ(inside.size(), 4u);  // centers (1..2, 1..2)
  for (const PixelCoord& p : inside) {
    EXPECT_GE(p.row, 1);
    EXPECT_LE(p.row, 2);
  }
  for (const PixelCoord& p : exterior_centers(labels, C::kOccluded, 3)) {
    EXPECT_TRUE(p.row >= 5 || p.col >= 5);
  }
}

ContextRanking Ranking(std::vector<C> contexts, std::vector<int> ranks) {
  return {std::move(contexts), std::move(ranks)};
}

TEST(RankAgreement, Examples) {
  const std::vector<C> six{C::kHomogeneous, C::kDiffuse,        C::kEdge,
                           C::kCorner,      C::kShadowBoundary, C::kOccluded};
  const ContextRanking sim = Ranking(six, {4, 2, 6, 3, 1, 5});
  const ContextRanking real = Ranking(six, {5, 4, 3, 1, 2, 6});
  EXPECT_EQ(rank_agreement(sim, sim), 1.0);
  EXPECT_NEAR(rank_agreement(sim, real), 1.0 - 6.0 * 20.0 / 210.0, 1e-15);
  EXPECT_NEAR(rank_agreement(sim, real), 0.428571, 1e-6);
  EXPECT_EQ(rank_agreement(sim, real), rank_agreement(real, sim));

  const std::vector<C> three{C::kHomogeneous, C::kDiffuse, C::kEdge};
  EXPECT_EQ(rank_agreement(Ranking(three, {1, 3, 2}), Ranking(three, {1, 3, 2})),
            1.0);
  EXPECT_LT(rank_agreement(Ranking(three, {1, 3, 2}), Ranking(three, {1, 2, 3})),
            1.0);
}

TEST(RankAgreement, AlignsByContextNotPosition) {
  const ContextRanking a = Ranking({C::kEdge, C::kCorner, C::kDiffuse}, {1, 2, 3});
  const ContextRanking b = Ranking({C::kDiffuse, C::kEdge, C::kCorner}, {3, 1, 2});
  EXPECT_EQ(rank_agreement(a, b), 1.0);
  EXPECT_EQ(kendall_agreement(a, b), 1.0);
}

TEST(RankAgreement, MismatchedSetsAreErrors) {
  const ContextRanking a = Ranking({C::kEdge, C::kCorner}, {1, 2});
  const ContextRanking b = Ranking({C::kEdge, C::kDiffuse}, {1, 2});
  EXPECT_THROW(rank_agreement(a, b), Error);
  EXPECT_THROW(kendall_agreement(a, Ranking({C::kEdge}, {1})), Error);
}

TEST(KendallAgreement, Examples) {
  const std::vector<C> four{C::kHomogeneous, C::kDiffuse, C::kEdge, C::kCorner};
  EXPECT_EQ(kendall_agreement(Ranking(four, {1, 2, 3, 4}),
                              Ranking(four, {4, 3, 2, 1})),
            -1.0);
  // One discordant pair of six.
  EXPECT_DOUBLE_EQ(kendall_agreement(Ranking(four, {1, 2, 3, 4}),
                                     Ranking(four, {2, 1, 3, 4})),
                   4.0 / 6.0);
}

TEST(Csv, NineSignificantDigits) {
  EXPECT_EQ(FormatDouble(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(FormatDouble(0.5), "0.5");
  EXPECT_EQ(FormatDouble(std::nan("")), "nan");
  std::ostringstream out;
  write_roc_csv(roc({2.0}, {1.0}, Polarity::kHigherIsChanged), out);
  EXPECT_EQ(out.str(), "threshold,fpr,tpr\ninf,0,0\n2,0,1\n1,1,1\nauc,1\n");
}

}  // namespace
}  // namespace patchchar
