#include "patchchar/characterize.hpp"

#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>

#include "parallel.hpp"
#include "patchchar/rng.hpp"

namespace patchchar {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> Steps(double first, double step, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(first + step * i);
  return out;
}

bool IsExcluded(const std::vector<SpatialContext>& exclude, SpatialContext c) {
  return std::find(exclude.begin(), exclude.end(), c) != exclude.end();
}

bool IsExcludedScore(const Error& e) {
  return e.kind() == ErrorKind::kUndefinedCorrelation ||
         e.kind() == ErrorKind::kDegenerate;
}

// Partial Fisher-Yates; returns the first k of a seeded permutation.
template <typename T>
std::vector<T> SampleWithoutReplacement(std::vector<T> items, std::size_t k,
                                        std::uint64_t seed) {
  const CounterRng rng(seed);
  k = std::min(k, items.size());
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t remaining = items.size() - i;
    const auto j =
        i + std::min(remaining - 1,
                     static_cast<std::size_t>(rng.Uniform(0, i) *
                                              static_cast<double>(remaining)));
    std::swap(items[i], items[j]);
  }
  items.resize(k);
  return items;
}

CellStats StatsOf(const std::vector<double>& values) {
  CellStats s;
  s.count = static_cast<Index>(values.size());
  if (values.empty()) {
    s.mean = s.std = s.min = s.max = kNaN;
    return s;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(sq / static_cast<double>(values.size()));
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  // Guard the aggregation invariant against rounding at the extremes.
  s.mean = std::clamp(s.mean, s.min, s.max);
  return s;
}

PixelMatrix<double> ToMatrix(const GrayPatch& p) { return p.values(); }

}  // namespace

// ---------------------------------------------------------------------------

const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names = {
      "identity", "global_illumination", "local_light", "fog"};
  return names;
}

PerturbationFamily make_family(std::string_view name,
                               const FamilyParams& params) {
  if (name == "identity") {
    return {"identity", [](double) { return TemporalState{}; }, {0.0}};
  }
  if (name == "global_illumination") {
    return {"global_illumination",
            [](double level) {
              TemporalState s;
              s.direct_level = level;
              return s;
            },
            Steps(0.1, 0.1, 10)};
  }
  if (name == "local_light") {
    return {"local_light",
            [params](double level) {
              TemporalState s;
              s.ambient_level = params.night_ambient;
              s.local_light =
                  LocalLight{params.light_center, params.light_radius, level};
              return s;
            },
            Steps(0.1, 0.1, 10)};
  }
  if (name == "fog") {
    return {"fog",
            [params](double level) {
              TemporalState s;
              s.direct_level = params.fog_direct_level;
              s.fog = FogParams{level, params.fog_airlight};
              return s;
            },
            Steps(0.003, 0.003, 10)};
  }
  std::string known;
  for (const auto& n : family_names()) known += (known.empty() ? "" : ", ") + n;
  Fail(ErrorKind::kConfig, "unknown perturbation family '" +
                               std::string(name) + "' (registered: " + known +
                               ")");
}

TemporalState reference_state() {
  TemporalState s;
  s.dynamic_objects = false;
  return s;
}

// ---------------------------------------------------------------------------

CellStats pool_cells(const std::vector<CellStats>& cells) {
  CellStats out;
  out.fits = false;
  double weighted = 0.0;
  for (const auto& c : cells) {
    out.fits = out.fits || c.fits;
    if (c.count == 0) continue;
    out.count += c.count;
    weighted += static_cast<double>(c.count) * c.mean;
  }
  if (out.count == 0) {
    out.mean = out.std = out.min = out.max = kNaN;
    return out;
  }
  const double n = static_cast<double>(out.count);
  out.mean = weighted / n;
  double var = 0.0;
  bool first = true;
  for (const auto& c : cells) {
    if (c.count == 0) continue;
    var += static_cast<double>(c.count) *
           (c.std * c.std + (c.mean - out.mean) * (c.mean - out.mean));
    out.min = first ? c.min : std::min(out.min, c.min);
    out.max = first ? c.max : std::max(out.max, c.max);
    first = false;
  }
  out.std = std::sqrt(var / n);
  out.mean = std::clamp(out.mean, out.min, out.max);
  return out;
}

namespace {

// Centers whose size x size window holds only pixels accepted by `keep`.
template <typename Pred>
std::vector<PixelCoord> WindowCenters(const LabelMap& labels, Index size,
                                      Pred keep) {
  const Index h = labels.rows();
  const Index w = labels.cols();
  // Summed-area table of the indicator.
  Eigen::Array<Index, Eigen::Dynamic, Eigen::Dynamic> sat =
      Eigen::Array<Index, Eigen::Dynamic, Eigen::Dynamic>::Zero(h + 1, w + 1);
  for (Index r = 0; r < h; ++r) {
    for (Index c = 0; c < w; ++c) {
      sat(r + 1, c + 1) = (keep(labels(r, c)) ? 1 : 0) + sat(r, c + 1) +
                          sat(r + 1, c) - sat(r, c);
    }
  }
  const Index half = size / 2;
  const Index area = size * size;
  std::vector<PixelCoord> out;
  for (Index r = half; r + half < h; ++r) {
    for (Index c = half; c + half < w; ++c) {
      const Index r0 = r - half, c0 = c - half, r1 = r + half + 1,
                  c1 = c + half + 1;
      if (sat(r1, c1) - sat(r0, c1) - sat(r1, c0) + sat(r0, c0) == area) {
        out.push_back({r, c});
      }
    }
  }
  return out;
}

}  // namespace

std::vector<PixelCoord> interior_centers(const LabelMap& labels,
                                         SpatialContext context, Index size) {
  const auto code = static_cast<std::uint8_t>(context);
  return WindowCenters(labels, size,
                       [code](std::uint8_t v) { return v == code; });
}

std::vector<PixelCoord> exterior_centers(const LabelMap& labels,
                                         SpatialContext context, Index size) {
  const auto code = static_cast<std::uint8_t>(context);
  return WindowCenters(labels, size,
                       [code](std::uint8_t v) { return v != code; });
}

CriterionManifold sweep_manifold(const Scene& scene,
                                 const PerturbationFamily& family,
                                 const SweepOptions& options) {
  const MatcherInfo matcher = get_matcher(options.metric, options.matcher);
  if (options.levels.empty()) {
    Fail(ErrorKind::kConfig, "sweep requires at least one level");
  }
  if (options.sizes.empty() || options.contexts.empty()) {
    Fail(ErrorKind::kConfig, "sweep requires sizes and contexts");
  }
  for (Index s : options.sizes) {
    if (s < 3 || s % 2 == 0) {
      Fail(ErrorKind::kConfig,
           "patch sizes must be odd and >= 3, got " + std::to_string(s));
    }
  }
  const SensorModel* sensor_model =
      options.sensor ? &*options.sensor : nullptr;

  const std::size_t n_levels = options.levels.size();
  const std::size_t n_sizes = options.sizes.size();
  const std::size_t n_contexts = options.contexts.size();

  // Frame 0 is the reference; frame li + 1 renders level li.
  std::vector<GrayImage> frames(n_levels + 1);
  internal::ParallelFor(n_levels + 1, options.jobs, [&](std::size_t i) {
    const TemporalState state =
        i == 0 ? reference_state() : family.state(options.levels[i - 1]);
    frames[i] = render_state(scene, state, sensor_model, options.seed ^ i);
  });

  // Sampled centers per (context, size); shared across levels so each
  // level tracks the same co-located patches.
  std::vector<std::vector<PixelCoord>> centers(n_contexts * n_sizes);
  internal::ParallelFor(centers.size(), options.jobs, [&](std::size_t i) {
    const std::size_t ci = i / n_sizes;
    const std::size_t si = i % n_sizes;
    const SpatialContext ctx = options.contexts[ci];
    const Index size = options.sizes[si];
    centers[i] = SampleWithoutReplacement(
        interior_centers(scene.labels, ctx, size),
        static_cast<std::size_t>(options.samples_per_context),
        DeriveSeed(options.seed, static_cast<std::uint64_t>(ctx) + 1,
                   static_cast<std::uint64_t>(size)));
  });

  CriterionManifold m;
  m.metric = options.metric;
  m.contexts = options.contexts;
  m.levels = options.levels;
  m.sizes = options.sizes;
  m.cells.resize(n_contexts * n_levels * n_sizes);

  internal::ParallelFor(m.cells.size(), options.jobs, [&](std::size_t cell) {
    const std::size_t si = cell % n_sizes;
    const std::size_t li = (cell / n_sizes) % n_levels;
    const std::size_t ci = cell / (n_sizes * n_levels);
    const auto& sampled = centers[ci * n_sizes + si];
    const Index size = options.sizes[si];
    std::vector<double> scores;
    scores.reserve(sampled.size());
    for (const PixelCoord& c : sampled) {
      const auto ref = ToMatrix(extract_patch(frames[0], c, size));
      const auto cur = ToMatrix(extract_patch(frames[li + 1], c, size));
      try {
        scores.push_back(matcher.fn(ref, cur));
      } catch (const Error& e) {
        if (!IsExcludedScore(e)) throw;
      }
    }
    CellStats stats = StatsOf(scores);
    stats.fits = !sampled.empty();
    m.cells[cell] = stats;
  });

  const bool any = std::any_of(m.cells.begin(), m.cells.end(),
                               [](const CellStats& c) { return c.count > 0; });
  if (!any) {
    Fail(ErrorKind::kDegenerate, "sweep produced no valid samples in any cell");
  }
  return m;
}

CriterionManifold marginalize(const CriterionManifold& m, Axis axis,
                              const std::vector<SpatialContext>& exclude) {
  std::vector<std::size_t> kept;
  for (std::size_t ci = 0; ci < m.contexts.size(); ++ci) {
    if (m.contexts_pooled || !IsExcluded(exclude, m.contexts[ci])) {
      kept.push_back(ci);
    }
  }
  if (kept.empty()) {
    Fail(ErrorKind::kParameter, "marginalize: every context is excluded");
  }
  CriterionManifold out = m;
  out.contexts.clear();
  for (std::size_t ci : kept) out.contexts.push_back(m.contexts[ci]);
  switch (axis) {
    case Axis::kContexts:
      out.contexts.resize(1);
      out.contexts_pooled = true;
      break;
    case Axis::kLevels:
      out.levels = {kNaN};
      out.levels_pooled = true;
      break;
    case Axis::kSizes:
      out.sizes = {0};
      out.sizes_pooled = true;
      break;
  }
  out.cells.assign(out.contexts.size() * out.levels.size() * out.sizes.size(),
                   {});
  for (std::size_t oc = 0; oc < out.contexts.size(); ++oc) {
    for (std::size_t ol = 0; ol < out.levels.size(); ++ol) {
      for (std::size_t os = 0; os < out.sizes.size(); ++os) {
        std::vector<CellStats> group;
        const auto ctx_range =
            axis == Axis::kContexts ? kept : std::vector<std::size_t>{kept[oc]};
        for (std::size_t ci : ctx_range) {
          for (std::size_t li = 0; li < m.levels.size(); ++li) {
            if (axis != Axis::kLevels && li != ol) continue;
            for (std::size_t si = 0; si < m.sizes.size(); ++si) {
              if (axis != Axis::kSizes && si != os) continue;
              group.push_back(m.Cell(ci, li, si));
            }
          }
        }
        out.Cell(oc, ol, os) = pool_cells(group);
      }
    }
  }
  return out;
}

int ContextRanking::RankOf(SpatialContext context) const {
  for (std::size_t i = 0; i < contexts.size(); ++i) {
    if (contexts[i] == context) return ranks[i];
  }
  Fail(ErrorKind::kParameter,
       "context " + std::string(ContextName(context)) + " not ranked");
}

ManifoldSummary summarize(const CriterionManifold& m) {
  ManifoldSummary s;
  for (std::size_t ci = 0; ci < m.contexts.size(); ++ci) {
    std::vector<CellStats> group;
    for (std::size_t li = 0; li < m.levels.size(); ++li) {
      for (std::size_t si = 0; si < m.sizes.size(); ++si) {
        group.push_back(m.Cell(ci, li, si));
      }
    }
    s.contexts.push_back({m.contexts[ci], pool_cells(group)});
  }
  std::vector<std::size_t> order(s.contexts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    const auto& sa = s.contexts[a].stats;
    const auto& sb = s.contexts[b].stats;
    if ((sa.count > 0) != (sb.count > 0)) return sa.count > 0;
    if (sa.count > 0 && sa.mean != sb.mean) return sa.mean > sb.mean;
    return static_cast<int>(s.contexts[a].context) <
           static_cast<int>(s.contexts[b].context);
  });
  s.ranking.contexts = m.contexts;
  s.ranking.ranks.assign(m.contexts.size(), 0);
  for (std::size_t r = 0; r < order.size(); ++r) {
    s.ranking.ranks[order[r]] = static_cast<int>(r) + 1;
  }
  return s;
}

Index optimal_patch_size(const CriterionManifold& m,
                         const std::vector<SpatialContext>& exclude) {
  const CriterionManifold marginal =
      marginalize(marginalize(m, Axis::kContexts, exclude), Axis::kLevels);
  std::optional<std::size_t> best;
  for (std::size_t si = 0; si < marginal.sizes.size(); ++si) {
    const CellStats& c = marginal.Cell(0, 0, si);
    if (c.count == 0) continue;
    if (!best) {
      best = si;
      continue;
    }
    const CellStats& b = marginal.Cell(0, 0, *best);
    const double tie_tol = 1e-12 * std::max(1.0, std::abs(b.mean));
    if (c.mean > b.mean + tie_tol ||
        (std::abs(c.mean - b.mean) <= tie_tol &&
         marginal.sizes[si] < marginal.sizes[*best])) {
      best = si;
    }
  }
  if (!best) return *std::min_element(m.sizes.begin(), m.sizes.end());
  return marginal.sizes[*best];
}

namespace {

std::vector<int> AlignedRanks(const ContextRanking& from,
                              const ContextRanking& order) {
  if (from.contexts.size() != order.contexts.size()) {
    Fail(ErrorKind::kParameter, "rankings cover different context sets");
  }
  std::vector<int> out;
  for (SpatialContext c : order.contexts) {
    const auto it = std::find(from.contexts.begin(), from.contexts.end(), c);
    if (it == from.contexts.end()) {
      Fail(ErrorKind::kParameter, "rankings cover different context sets");
    }
    out.push_back(from.ranks[static_cast<std::size_t>(it -
                                                      from.contexts.begin())]);
  }
  return out;
}

}  // namespace

double rank_agreement(const ContextRanking& a, const ContextRanking& b) {
  const std::vector<int> ra = AlignedRanks(a, a);
  const std::vector<int> rb = AlignedRanks(b, a);
  const auto n = static_cast<double>(ra.size());
  if (ra.size() < 2) return 1.0;
  double d2 = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const double d = ra[i] - rb[i];
    d2 += d * d;
  }
  return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

double kendall_agreement(const ContextRanking& a, const ContextRanking& b) {
  const std::vector<int> ra = AlignedRanks(a, a);
  const std::vector<int> rb = AlignedRanks(b, a);
  if (ra.size() < 2) return 1.0;
  double sum = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    for (std::size_t j = i + 1; j < ra.size(); ++j) {
      const int sa = (ra[i] > ra[j]) - (ra[i] < ra[j]);
      const int sb = (rb[i] > rb[j]) - (rb[i] < rb[j]);
      sum += sa * sb;
      pairs += 1.0;
    }
  }
  return sum / pairs;
}

// ---------------------------------------------------------------------------

RocCurve roc(const std::vector<double>& scores_changed,
             const std::vector<double>& scores_unchanged, Polarity polarity) {
  if (scores_changed.empty() || scores_unchanged.empty()) {
    Fail(ErrorKind::kDegenerate,
         "roc requires non-empty changed and unchanged score lists");
  }
  const double sign = polarity == Polarity::kHigherIsChanged ? 1.0 : -1.0;
  std::vector<double> pos;
  std::vector<double> neg;
  for (double s : scores_changed) pos.push_back(sign * s);
  for (double s : scores_unchanged) neg.push_back(sign * s);
  std::sort(pos.begin(), pos.end(), std::greater<>());
  std::sort(neg.begin(), neg.end(), std::greater<>());
  std::vector<double> thresholds(pos);
  thresholds.insert(thresholds.end(), neg.begin(), neg.end());
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  const auto np = static_cast<double>(pos.size());
  const auto nn = static_cast<double>(neg.size());
  RocCurve curve;
  curve.points.push_back(
      {sign * std::numeric_limits<double>::infinity(), 0.0, 0.0});
  std::size_t ip = 0;
  std::size_t in = 0;
  for (double t : thresholds) {
    while (ip < pos.size() && pos[ip] >= t) ++ip;
    while (in < neg.size() && neg[in] >= t) ++in;
    const RocPoint prev = curve.points.back();
    const RocPoint p{sign * t, static_cast<double>(in) / nn,
                     static_cast<double>(ip) / np};
    curve.auc += (p.fpr - prev.fpr) * (p.tpr + prev.tpr) * 0.5;
    curve.points.push_back(p);
  }
  curve.auc = std::clamp(curve.auc, 0.0, 1.0);
  return curve;
}

std::string_view NoiseKindName(NoiseChoice::Kind kind) {
  switch (kind) {
    case NoiseChoice::Kind::kNone:
      return "none";
    case NoiseChoice::Kind::kGaussian:
      return "gaussian";
    case NoiseChoice::Kind::kSaltPepper:
      return "salt_pepper";
    case NoiseChoice::Kind::kSpeckle:
      return "speckle";
  }
  return "none";
}

NoiseChoice::Kind ParseNoiseKind(std::string_view name) {
  for (auto kind : {NoiseChoice::Kind::kNone, NoiseChoice::Kind::kGaussian,
                    NoiseChoice::Kind::kSaltPepper,
                    NoiseChoice::Kind::kSpeckle}) {
    if (NoiseKindName(kind) == name) return kind;
  }
  Fail(ErrorKind::kConfig, "unknown noise kind '" + std::string(name) + "'");
}

namespace {

GrayImage PerturbPatch(const GrayPatch& patch, double gain,
                       const NoiseChoice& noise, std::uint64_t seed) {
  const auto& v = patch.values();
  GrayImage img = gain_offset(
      GrayImage(PixelArray<double>(v.array())), gain, 0.0);
  switch (noise.kind) {
    case NoiseChoice::Kind::kNone:
      return img;
    case NoiseChoice::Kind::kGaussian:
      return add_gaussian(img, noise.param, seed);
    case NoiseChoice::Kind::kSaltPepper:
      return add_salt_pepper(img, noise.param, seed);
    case NoiseChoice::Kind::kSpeckle:
      return add_speckle(img, noise.param, seed);
  }
  return img;
}

}  // namespace

RocFrames render_roc_frames(const Scene& scene, const SensorModel* sensor_model,
                            std::uint64_t seed) {
  TemporalState with_objects = reference_state();
  with_objects.dynamic_objects = true;
  return {render_state(scene, reference_state(), sensor_model, seed),
          render_state(scene, with_objects, sensor_model, DeriveSeed(seed, 1))};
}

RocScores roc_scores(const GrayImage& reference, const GrayImage& current,
                     const LabelMap& labels, const MatcherInfo& metric,
                     const RocRecipe& recipe) {
  if (recipe.changed <= 0) {
    Fail(ErrorKind::kConfig, "roc recipe needs at least one changed sample");
  }
  if (recipe.unchanged <= 0) {
    Fail(ErrorKind::kConfig, "roc recipe needs at least one unchanged sample");
  }
  if (recipe.size < 3 || recipe.size % 2 == 0) {
    Fail(ErrorKind::kConfig, "roc patch size must be odd and >= 3");
  }
  if (!reference.SameShape(current) || labels.rows() != reference.height() ||
      labels.cols() != reference.width()) {
    Fail(ErrorKind::kDimensionMismatch,
         "roc: reference, current and labels must share dimensions");
  }
  const std::vector<PixelCoord> occluded =
      interior_centers(labels, SpatialContext::kOccluded, recipe.size);
  const std::vector<PixelCoord> clear =
      exterior_centers(labels, SpatialContext::kOccluded, recipe.size);
  if (occluded.empty()) {
    Fail(ErrorKind::kConfig, "roc: no occluded window of size " +
                                 std::to_string(recipe.size));
  }
  if (clear.empty()) {
    Fail(ErrorKind::kConfig, "roc: no occlusion-free window of size " +
                                 std::to_string(recipe.size));
  }
  const CounterRng rng(recipe.seed);
  // Uniform draws with replacement keep the sample count independent of the
  // occluder area.
  auto pick = [&](const std::vector<PixelCoord>& pool, std::uint64_t stream,
                  std::uint64_t i) {
    const auto j = static_cast<std::size_t>(rng.Uniform(stream, i) *
                                            static_cast<double>(pool.size()));
    return pool[std::min(j, pool.size() - 1)];
  };

  RocScores out;
  const Index total = recipe.changed + recipe.unchanged;
  for (Index i = 0; i < total; ++i) {
    const bool changed = i < recipe.changed;
    const auto ui = static_cast<std::uint64_t>(i);
    const PixelCoord at = changed ? pick(occluded, 1, ui) : pick(clear, 2, ui);
    const double gain = recipe.gain_min +
                        rng.Uniform(9, ui) * (recipe.gain_max - recipe.gain_min);
    const GrayPatch ref = extract_patch(reference, at, recipe.size);
    const GrayImage cur =
        PerturbPatch(extract_patch(current, at, recipe.size), gain,
                     recipe.noise, DeriveSeed(recipe.seed, ui, 17));
    try {
      const double score =
          metric.fn(ref.values(), PixelMatrix<double>(cur.pixels().matrix()));
      (changed ? out.changed : out.unchanged).push_back(score);
    } catch (const Error& e) {
      if (!IsExcludedScore(e)) throw;
      ++out.excluded;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void write_manifold_csv(const CriterionManifold& m, std::ostream& out) {
  out << "context,level,size,mean,std,count\n";
  for (std::size_t ci = 0; ci < m.contexts.size(); ++ci) {
    for (std::size_t li = 0; li < m.levels.size(); ++li) {
      for (std::size_t si = 0; si < m.sizes.size(); ++si) {
        const CellStats& c = m.Cell(ci, li, si);
        out << (m.contexts_pooled ? "all" : ContextName(m.contexts[ci]))
            << ',' << (m.levels_pooled ? "all" : FormatDouble(m.levels[li]))
            << ','
            << (m.sizes_pooled ? std::string("all")
                               : std::to_string(m.sizes[si]))
            << ',' << FormatDouble(c.mean) << ',' << FormatDouble(c.std) << ','
            << c.count << '\n';
      }
    }
  }
}

void write_summary_csv(const ManifoldSummary& s, std::ostream& out) {
  out << "context,mean,std,count,rank\n";
  for (std::size_t i = 0; i < s.contexts.size(); ++i) {
    const auto& c = s.contexts[i];
    out << ContextName(c.context) << ',' << FormatDouble(c.stats.mean) << ','
        << FormatDouble(c.stats.std) << ',' << c.stats.count << ','
        << s.ranking.ranks[i] << '\n';
  }
}

void write_roc_csv(const RocCurve& curve, std::ostream& out) {
  out << "threshold,fpr,tpr\n";
  for (const auto& p : curve.points) {
    out << FormatDouble(p.threshold) << ',' << FormatDouble(p.fpr) << ','
        << FormatDouble(p.tpr) << '\n';
  }
  out << "auc," << FormatDouble(curve.auc) << '\n';
}

}  // namespace patchchar
