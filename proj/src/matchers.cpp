#include "patchchar/matchers.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "patchchar/isotonic.hpp"

namespace patchchar {

std::vector<ZigZagEntry> zigzag_order(Index n) {
  std::vector<ZigZagEntry> order;
  order.reserve(static_cast<std::size_t>(n * n));
  for (Index d = 0; d <= 2 * (n - 1); ++d) {
    const Index lo = std::max<Index>(0, d - (n - 1));
    const Index hi = std::min<Index>(d, n - 1);
    if (d % 2 == 0) {
      for (Index r = hi; r >= lo; --r) order.push_back({r, d - r});
    } else {
      for (Index r = lo; r <= hi; ++r) order.push_back({r, d - r});
    }
  }
  return order;
}

Eigen::VectorXd ac_zigzag(const CoeffBlock<double>& coeffs) {
  const auto order = zigzag_order(coeffs.rows());
  Eigen::VectorXd ac(static_cast<Index>(order.size()) - 1);
  for (std::size_t i = 1; i < order.size(); ++i) {
    ac(static_cast<Index>(i) - 1) = coeffs(order[i].row, order[i].col);
  }
  return ac;
}

DctSignature dct_signature(const CoeffBlock<double>& coeffs, Index k) {
  if (k < 1) Fail(ErrorKind::kParameter, "signature pair count must be >= 1");
  if (coeffs.rows() != coeffs.cols()) {
    Fail(ErrorKind::kDimensionMismatch, "signature expects a square block");
  }
  const Eigen::VectorXd ac = ac_zigzag(coeffs);
  const double tol = 1e-12 * coeffs.norm();
  std::vector<Index> pos;
  std::vector<Index> neg;
  for (Index i = 0; i < ac.size(); ++i) {
    if (ac(i) > tol) pos.push_back(i + 1);
    if (ac(i) < -tol) neg.push_back(i + 1);
  }
  // Stable sorts keep the earlier zig-zag position first on ties.
  std::stable_sort(pos.begin(), pos.end(),
                   [&](Index a, Index b) { return ac(a - 1) > ac(b - 1); });
  std::stable_sort(neg.begin(), neg.end(),
                   [&](Index a, Index b) { return ac(a - 1) < ac(b - 1); });
  if (static_cast<Index>(pos.size()) > k) pos.resize(static_cast<std::size_t>(k));
  if (static_cast<Index>(neg.size()) > k) neg.resize(static_cast<std::size_t>(k));
  return {k, std::move(pos), std::move(neg)};
}

int radial_ring(Index u, Index v, Index size, int bins) {
  const double r = std::hypot(static_cast<double>(u), static_cast<double>(v));
  const double r_max = std::sqrt(2.0) * static_cast<double>(size - 1);
  const int ring = static_cast<int>(std::floor(r / r_max * bins));
  return std::clamp(ring, 0, bins - 1);
}

double dct_energy_difference(const CoeffBlock<double>& ref,
                             const CoeffBlock<double>& cur, int bins) {
  detail::CheckSameShape(ref.rows(), ref.cols(), cur.rows(), cur.cols(),
                         "dct_energy_difference");
  if (bins < 1) Fail(ErrorKind::kParameter, "ring count must be >= 1");
  const double dc_ref = ref(0, 0);
  const double dc_cur = cur(0, 0);
  if (dc_ref == 0.0 || dc_cur == 0.0) {
    Fail(ErrorKind::kDegenerate,
         "dct_energy: DC coefficient is zero, cannot normalize");
  }
  std::vector<double> e_ref(static_cast<std::size_t>(bins), 0.0);
  std::vector<double> e_cur(static_cast<std::size_t>(bins), 0.0);
  const Index n = ref.rows();
  for (Index u = 0; u < n; ++u) {
    for (Index v = 0; v < n; ++v) {
      if (u == 0 && v == 0) continue;
      const auto ring = static_cast<std::size_t>(radial_ring(u, v, n, bins));
      const double a = ref(u, v) / dc_ref;
      const double b = cur(u, v) / dc_cur;
      e_ref[ring] += a * a;
      e_cur[ring] += b * b;
    }
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < e_ref.size(); ++i) {
    worst = std::max(worst, std::abs(e_ref[i] - e_cur[i]));
  }
  return worst;
}

Eigen::VectorXd project_to_order_cone(const Eigen::VectorXd& q_b,
                                      const Eigen::VectorXd& q_c) {
  const Index n = q_b.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  // Tied q_b entries are unconstrained among themselves; ordering them by
  // q_c keeps the chain projection optimal for the weak order.
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (q_b(a) != q_b(b)) return q_b(a) < q_b(b);
    if (q_c(a) != q_c(b)) return q_c(a) < q_c(b);
    return a < b;
  });
  Eigen::VectorXd sorted(n);
  for (Index i = 0; i < n; ++i) sorted(i) = q_c(order[i]);
  const Eigen::VectorXd fit = isotonic_fit(sorted);
  Eigen::VectorXd out(n);
  for (Index i = 0; i < n; ++i) out(order[i]) = fit(i);
  return out;
}

namespace detail {

void CheckSameShape(Index rows_a, Index cols_a, Index rows_b, Index cols_b,
                    const char* op) {
  if (rows_a != rows_b || cols_a != cols_b) {
    Fail(ErrorKind::kDimensionMismatch,
         std::string(op) + ": size mismatch " + std::to_string(rows_a) + "x" +
             std::to_string(cols_a) + " vs " + std::to_string(rows_b) + "x" +
             std::to_string(cols_b));
  }
}

double ssd(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).squaredNorm();
}

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
               const char* what) {
  const Eigen::ArrayXd da = a.array() - a.mean();
  const Eigen::ArrayXd db = b.array() - b.mean();
  const double sxx = (da * da).sum();
  const double syy = (db * db).sum();
  if (sxx == 0.0 || syy == 0.0) {
    Fail(ErrorKind::kUndefinedCorrelation,
         std::string(what) + ": zero-variance input, correlation undefined");
  }
  const double sxy = (da * db).sum();
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return pearson(rank_vector(a).ranks, rank_vector(b).ranks, "spearman_rho");
}

Index hamming(const RankVector& a, const RankVector& b) {
  return (a.ranks.array() != b.ranks.array()).count();
}

double projection_distance(const Eigen::VectorXd& q_b,
                           const Eigen::VectorXd& q_c,
                           ProjectionVariant variant) {
  if (q_b.size() == 0) return 0.0;
  const Eigen::VectorXd proj = project_to_order_cone(q_b, q_c);
  const Eigen::VectorXd& target =
      variant == ProjectionVariant::kDistanceToCone ? q_c : q_b;
  return (target - proj).squaredNorm() / static_cast<double>(q_b.size());
}

double dct_ro(const CoeffBlock<double>& c1, const CoeffBlock<double>& c2,
              Index k) {
  const DctSignature s1 = dct_signature(c1, k);
  const DctSignature s2 = dct_signature(c2, k);
  std::set<Index> support;
  support.insert(s1.pos_idx.begin(), s1.pos_idx.end());
  support.insert(s1.neg_idx.begin(), s1.neg_idx.end());
  support.insert(s2.pos_idx.begin(), s2.pos_idx.end());
  support.insert(s2.neg_idx.begin(), s2.neg_idx.end());
  if (support.empty()) return 0.0;
  const RankVector r1 = rank_vector(ac_zigzag(c1));
  const RankVector r2 = rank_vector(ac_zigzag(c2));
  Index differing = 0;
  for (Index zz : support) {
    if (r1.ranks(zz - 1) != r2.ranks(zz - 1)) ++differing;
  }
  return static_cast<double>(differing) / static_cast<double>(support.size());
}

}  // namespace detail

namespace {

using PM = PixelMatrix<double>;

std::vector<MatcherInfo> BuildRegistry(const MatcherOptions& opt) {
  using G = GeometricClass;
  using P = PhotometricClass;
  using N = NoiseClass;
  std::vector<MatcherInfo> r;
  r.push_back({"ssd", Polarity::kHigherIsChanged,
               {G::kIdentity, {P::kIdentity}, N::kGaussian},
               [](const PM& a, const PM& b) { return ssd(a, b); }});
  r.push_back({"ncc", Polarity::kLowerIsChanged,
               {G::kIdentity, {P::kTranslation, P::kScale}, N::kGaussian},
               [](const PM& a, const PM& b) { return ncc(a, b); }});
  r.push_back({"rho", Polarity::kLowerIsChanged,
               {G::kIdentity, {P::kMonotone}, N::kSymmetricNoise},
               [](const PM& a, const PM& b) { return spearman_rho(a, b); }});
  r.push_back({"abs_rho", Polarity::kLowerIsChanged,
               {G::kIdentity, {P::kMonotone}, N::kSymmetricNoise},
               [](const PM& a, const PM& b) { return abs_spearman(a, b); }});
  r.push_back({"ro_hamming", Polarity::kHigherIsChanged,
               {G::kIdentity, {P::kMonotone}, N::kSymmetricNoise},
               [](const PM& a, const PM& b) {
                 return static_cast<double>(ordinal_hamming(a, b));
               }});
  r.push_back({"ro_proj", Polarity::kHigherIsChanged,
               {G::kIdentity, {P::kMonotone}, N::kGaussian},
               [variant = opt.projection](const PM& a, const PM& b) {
                 return rank_consistency_distance(a, b, variant);
               }});
  r.push_back({"dct_energy", Polarity::kHigherIsChanged,
               {G::kIdentity, {P::kScale}, N::kStructured},
               [bins = opt.energy_bins](const PM& a, const PM& b) {
                 return dct_energy_difference(dct2(a), dct2(b), bins);
               }});
  r.push_back({"dct_ro", Polarity::kHigherIsChanged,
               {G::kIdentity, {P::kMonotone}, N::kTransformReplacement},
               [k = opt.dct_pairs](const PM& a, const PM& b) {
                 return dct_ro_distance(a, b, k);
               }});
  return r;
}

}  // namespace

const std::vector<std::string>& matcher_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& m : BuildRegistry({})) out.push_back(m.name);
    return out;
  }();
  return names;
}

bool has_matcher(std::string_view name) {
  const auto& names = matcher_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

MatcherInfo get_matcher(std::string_view name, const MatcherOptions& options) {
  for (auto& m : BuildRegistry(options)) {
    if (m.name == name) return m;
  }
  std::string known;
  for (const auto& n : matcher_names()) known += (known.empty() ? "" : ", ") + n;
  Fail(ErrorKind::kConfig,
       "unknown metric '" + std::string(name) + "' (registered: " + known +
           ")");
}

}  // namespace patchchar
