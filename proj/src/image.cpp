#include "patchchar/image.hpp"

#include <Eigen/Eigenvalues>

namespace patchchar {

namespace {

constexpr std::array<std::string_view, 8> kContextNames = {
    "Homogeneous",    "Diffuse", "Edge",     "Corner",
    "ShadowBoundary", "Shadow",  "Specular", "Occluded",
};

}  // namespace

std::string_view ContextName(SpatialContext context) {
  return kContextNames[static_cast<std::size_t>(context)];
}

SpatialContext ParseContext(std::string_view name) {
  for (std::size_t i = 0; i < kContextNames.size(); ++i) {
    if (kContextNames[i] == name) return kAllContexts[i];
  }
  Fail(ErrorKind::kConfig, "unknown spatial context '" + std::string(name) +
                               "'");
}

std::uint8_t ContextLabelCode(SpatialContext context) {
  return static_cast<std::uint8_t>(10 * (static_cast<int>(context) + 1));
}

std::optional<SpatialContext> ContextFromLabelCode(std::uint8_t code) {
  if (code % 10 != 0 || code < 10 || code > 80) return std::nullopt;
  return kAllContexts[code / 10 - 1];
}

Eigen::Vector2d structure_tensor_eigenvalues(const GrayImage& img,
                                             PixelCoord center, Index size) {
  const GrayPatch patch = extract_patch(img, center, size);
  const auto& p = patch.values();
  Eigen::Matrix2d tensor = Eigen::Matrix2d::Zero();
  Index count = 0;
  for (Index r = 1; r + 1 < size; ++r) {
    for (Index c = 1; c + 1 < size; ++c) {
      const double gx = (p(r - 1, c + 1) + 2.0 * p(r, c + 1) +
                         p(r + 1, c + 1) - p(r - 1, c - 1) -
                         2.0 * p(r, c - 1) - p(r + 1, c - 1)) /
                        8.0;
      const double gy = (p(r + 1, c - 1) + 2.0 * p(r + 1, c) +
                         p(r + 1, c + 1) - p(r - 1, c - 1) -
                         2.0 * p(r - 1, c) - p(r - 1, c + 1)) /
                        8.0;
      tensor(0, 0) += gx * gx;
      tensor(0, 1) += gx * gy;
      tensor(1, 1) += gy * gy;
      ++count;
    }
  }
  tensor(1, 0) = tensor(0, 1);
  tensor /= static_cast<double>(count);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(
      tensor, Eigen::EigenvaluesOnly);
  // Ascending from the solver; report (major, minor).
  return solver.eigenvalues().reverse();
}

SpatialContext classify_context(const GrayImage& img, PixelCoord center,
                                Index size,
                                const StructureTensorThresholds& thresholds) {
  const Eigen::Vector2d lambda =
      structure_tensor_eigenvalues(img, center, size);
  const double major = lambda(0);
  const double minor = lambda(1);
  if (major < thresholds.low && minor < thresholds.low) {
    return SpatialContext::kHomogeneous;
  }
  if (major >= thresholds.high && minor >= thresholds.high) {
    return SpatialContext::kCorner;
  }
  if (major >= thresholds.high && minor < thresholds.low) {
    return SpatialContext::kEdge;
  }
  return SpatialContext::kDiffuse;
}

}  // namespace patchchar
