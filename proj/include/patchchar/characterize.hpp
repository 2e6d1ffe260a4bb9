#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "patchchar/matchers.hpp"
#include "patchchar/perturb.hpp"
#include "patchchar/scene.hpp"

namespace patchchar {

// ---------------------------------------------------------------------------
// Perturbation families: map a scalar level onto a TemporalState.
// ---------------------------------------------------------------------------

struct FamilyParams {
  // local_light: dim ambient plus one street light.
  double night_ambient = 0.1;
  PixelCoord light_center{128, 128};
  double light_radius = 80.0;
  // fog: constant daylight level, airlight of the medium.
  double fog_direct_level = 0.0;
  double fog_airlight = 0.8;
};

struct PerturbationFamily {
  std::string name;
  std::function<TemporalState(double level)> state;
  std::vector<double> default_levels;
};

const std::vector<std::string>& family_names();
PerturbationFamily make_family(std::string_view name,
                               const FamilyParams& params = {});

/// Ambient-only render of the static scene.
TemporalState reference_state();

// ---------------------------------------------------------------------------
// Criterion manifold
// ---------------------------------------------------------------------------

struct CellStats {
  double mean = 0.0;
  double std = 0.0;
  Index count = 0;
  double min = 0.0;
  double max = 0.0;
  bool fits = true;  // false when the context region cannot hold the patch
};

/// Pools cells with count weighting; population standard deviation.
CellStats pool_cells(const std::vector<CellStats>& cells);

struct CriterionManifold {
  std::string metric;
  std::vector<SpatialContext> contexts;
  std::vector<double> levels;
  std::vector<Index> sizes;
  // A pooled axis has exactly one entry standing for "all".
  bool contexts_pooled = false;
  bool levels_pooled = false;
  bool sizes_pooled = false;
  std::vector<CellStats> cells;

  std::size_t Index3(std::size_t ci, std::size_t li, std::size_t si) const {
    return (ci * levels.size() + li) * sizes.size() + si;
  }
  const CellStats& Cell(std::size_t ci, std::size_t li, std::size_t si) const {
    return cells[Index3(ci, li, si)];
  }
  CellStats& Cell(std::size_t ci, std::size_t li, std::size_t si) {
    return cells[Index3(ci, li, si)];
  }
};

struct SweepOptions {
  std::vector<double> levels;
  std::vector<Index> sizes{5, 9, 13, 17, 21};
  std::vector<SpatialContext> contexts{
      SpatialContext::kHomogeneous,    SpatialContext::kDiffuse,
      SpatialContext::kEdge,           SpatialContext::kCorner,
      SpatialContext::kShadowBoundary, SpatialContext::kOccluded};
  std::string metric = "abs_rho";
  MatcherOptions matcher;
  Index samples_per_context = 100;
  std::uint64_t seed = 0;
  std::optional<SensorModel> sensor;
  int jobs = 1;
};

/// Centers whose full size x size window carries `context` in the label map.
std::vector<PixelCoord> interior_centers(const LabelMap& labels,
                                         SpatialContext context, Index size);
/// Centers whose window holds no pixel labeled `context`.
std::vector<PixelCoord> exterior_centers(const LabelMap& labels,
                                         SpatialContext context, Index size);

CriterionManifold sweep_manifold(const Scene& scene,
                                 const PerturbationFamily& family,
                                 const SweepOptions& options);

enum class Axis { kContexts, kLevels, kSizes };

CriterionManifold marginalize(const CriterionManifold& m, Axis axis,
                              const std::vector<SpatialContext>& exclude = {});

struct ContextRanking {
  std::vector<SpatialContext> contexts;
  std::vector<int> ranks;  // 1 = highest mean

  int RankOf(SpatialContext context) const;
};

struct ContextSummary {
  SpatialContext context;
  CellStats stats;
};

struct ManifoldSummary {
  std::vector<ContextSummary> contexts;
  ContextRanking ranking;
};

ManifoldSummary summarize(const CriterionManifold& m);

Index optimal_patch_size(const CriterionManifold& m,
                         const std::vector<SpatialContext>& exclude = {});

/// Spearman agreement 1 - 6 sum d^2 / (n (n^2 - 1)) over shared contexts.
double rank_agreement(const ContextRanking& a, const ContextRanking& b);
/// Kendall tau between two rankings of the same context set.
double kendall_agreement(const ContextRanking& a, const ContextRanking& b);

// ---------------------------------------------------------------------------
// ROC
// ---------------------------------------------------------------------------

struct RocPoint {
  double threshold;
  double fpr;
  double tpr;
};

struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

RocCurve roc(const std::vector<double>& scores_changed,
             const std::vector<double>& scores_unchanged, Polarity polarity);

struct NoiseChoice {
  enum class Kind { kNone, kGaussian, kSaltPepper, kSpeckle } kind = Kind::kNone;
  double param = 0.0;
};

std::string_view NoiseKindName(NoiseChoice::Kind kind);
NoiseChoice::Kind ParseNoiseKind(std::string_view name);

/// Both classes compare a reference patch with the co-located, gain- and
/// noise-perturbed patch of `current`. Changed windows lie inside the
/// occluder; unchanged windows hold no occluded pixel.
struct RocRecipe {
  Index size = 13;
  Index changed = 500;
  Index unchanged = 500;
  double gain_min = 1.0;
  double gain_max = 1.0;
  NoiseChoice noise;
  std::uint64_t seed = 0;
};

struct RocScores {
  std::vector<double> changed;
  std::vector<double> unchanged;
  Index excluded = 0;
};

/// Reference render (seed as in sweep_manifold) and the occluder-bearing
/// frame under the same illumination with an independent noise draw.
struct RocFrames {
  GrayImage reference;
  GrayImage current;
};
RocFrames render_roc_frames(const Scene& scene, const SensorModel* sensor_model,
                            std::uint64_t seed);

RocScores roc_scores(const GrayImage& reference, const GrayImage& current,
                     const LabelMap& labels, const MatcherInfo& metric,
                     const RocRecipe& recipe);

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

std::string FormatDouble(double v);
void write_manifold_csv(const CriterionManifold& m, std::ostream& out);
void write_summary_csv(const ManifoldSummary& s, std::ostream& out);
void write_roc_csv(const RocCurve& curve, std::ostream& out);

}  // namespace patchchar
