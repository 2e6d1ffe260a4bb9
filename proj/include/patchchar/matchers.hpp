#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "patchchar/dct.hpp"
#include "patchchar/image.hpp"

namespace patchchar {

// Geometric / photometric / noise invariance class of a matcher.
enum class GeometricClass { kIdentity, kTranslation, kScale, kRotation, kTilt,
                            kPan, kShear };
enum class PhotometricClass { kIdentity, kTranslation, kScale, kMonotone,
                              kOther };
enum class NoiseClass { kGaussian, kReplacement, kStructured, kSymmetricNoise,
                        kTransformReplacement };

struct InvarianceClass {
  GeometricClass g = GeometricClass::kIdentity;
  std::vector<PhotometricClass> p;
  NoiseClass n = NoiseClass::kGaussian;
};

enum class Polarity { kHigherIsChanged, kLowerIsChanged };

enum class ProjectionVariant {
  kDistanceToCone,  // (1/N) ||Q_c - proj(Q_c)||^2
  kLiteral,         // (1/N) ||Q_b - proj(Q_c)||^2
};

namespace detail {

void CheckSameShape(Index rows_a, Index cols_a, Index rows_b, Index cols_b,
                    const char* op);

double ssd(const Eigen::VectorXd& a, const Eigen::VectorXd& b);
double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
               const char* what);
double spearman(const Eigen::VectorXd& a, const Eigen::VectorXd& b);
Index hamming(const RankVector& a, const RankVector& b);
double projection_distance(const Eigen::VectorXd& q_b,
                           const Eigen::VectorXd& q_c,
                           ProjectionVariant variant);
double dct_ro(const CoeffBlock<double>& c1, const CoeffBlock<double>& c2,
              Index k);

}  // namespace detail

template <typename A, typename B>
double ssd(const Eigen::DenseBase<A>& a, const Eigen::DenseBase<B>& b) {
  detail::CheckSameShape(a.rows(), a.cols(), b.rows(), b.cols(), "ssd");
  return detail::ssd(Flatten(a), Flatten(b));
}

/// Pearson correlation of pixel vectors; zero variance is an
/// undefined-correlation error.
template <typename A, typename B>
double ncc(const Eigen::DenseBase<A>& a, const Eigen::DenseBase<B>& b) {
  detail::CheckSameShape(a.rows(), a.cols(), b.rows(), b.cols(), "ncc");
  return detail::pearson(Flatten(a), Flatten(b), "ncc");
}

/// Pearson correlation of fractional rank vectors.
template <typename A, typename B>
double spearman_rho(const Eigen::DenseBase<A>& a,
                    const Eigen::DenseBase<B>& b) {
  detail::CheckSameShape(a.rows(), a.cols(), b.rows(), b.cols(),
                         "spearman_rho");
  return detail::spearman(Flatten(a), Flatten(b));
}

template <typename A, typename B>
double abs_spearman(const Eigen::DenseBase<A>& a,
                    const Eigen::DenseBase<B>& b) {
  return std::abs(spearman_rho(a, b));
}

/// Positions at which the two fractional rank vectors differ.
template <typename A, typename B>
Index ordinal_hamming(const Eigen::DenseBase<A>& a,
                      const Eigen::DenseBase<B>& b) {
  detail::CheckSameShape(a.rows(), a.cols(), b.rows(), b.cols(),
                         "ordinal_hamming");
  return detail::hamming(rank_vector(a), rank_vector(b));
}

/// Squared distance of q_c to the order cone of q_b, per sample. The
/// projection sorts q_c by q_b's order (ties in q_b ordered by q_c) and runs
/// pool-adjacent-violators. Not symmetric.
template <typename A, typename B>
double rank_consistency_distance(
    const Eigen::DenseBase<A>& q_b, const Eigen::DenseBase<B>& q_c,
    ProjectionVariant variant = ProjectionVariant::kDistanceToCone) {
  detail::CheckSameShape(q_b.rows(), q_b.cols(), q_c.rows(), q_c.cols(),
                         "rank_consistency_distance");
  return detail::projection_distance(Flatten(q_b), Flatten(q_c), variant);
}

/// Projection of q_c onto the order cone of q_b (flattened row-major).
Eigen::VectorXd project_to_order_cone(const Eigen::VectorXd& q_b,
                                      const Eigen::VectorXd& q_c);

/// Rank agreement of AC coefficients restricted to the union of both
/// k-pair signatures, normalized by the union size; 0 if the union is empty.
template <typename A, typename B>
double dct_ro_distance(const Eigen::MatrixBase<A>& p1,
                       const Eigen::MatrixBase<B>& p2, Index k) {
  detail::CheckSameShape(p1.rows(), p1.cols(), p2.rows(), p2.cols(),
                         "dct_ro_distance");
  return detail::dct_ro(dct2(p1.template cast<double>()),
                        dct2(p2.template cast<double>()), k);
}

/// Max over radial rings of |E_ref - E_cur|, where a ring energy sums
/// (AC / DC)^2 over coefficients with sqrt(u^2 + v^2) in that ring.
double dct_energy_difference(const CoeffBlock<double>& ref,
                             const CoeffBlock<double>& cur, int bins = 4);

/// Radial ring of coefficient (u, v) among `bins` equal-width rings.
int radial_ring(Index u, Index v, Index size, int bins);

// String-keyed registry used by the harness, detector and CLI.
struct MatcherOptions {
  Index dct_pairs = 3;
  int energy_bins = 4;
  ProjectionVariant projection = ProjectionVariant::kDistanceToCone;
};

using MatcherFn =
    std::function<double(const PixelMatrix<double>&, const PixelMatrix<double>&)>;

struct MatcherInfo {
  std::string name;
  Polarity polarity;
  InvarianceClass invariance;
  MatcherFn fn;
};

const std::vector<std::string>& matcher_names();
bool has_matcher(std::string_view name);
MatcherInfo get_matcher(std::string_view name, const MatcherOptions& options =
                                                   {});

}  // namespace patchchar
