#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "patchchar/error.hpp"

namespace patchchar {

using Index = Eigen::Index;

template <typename Scalar>
using PixelArray =
    Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using PixelMatrix =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using ScalarVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

struct PixelCoord {
  Index row = 0;
  Index col = 0;

  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

/// Row-major 2D scalar field in [0,1]. Samples are clamped on construction
/// and the image is immutable afterwards.
template <typename Scalar>
class Image {
 public:
  Image() = default;

  Image(Index height, Index width, Scalar fill = Scalar(0))
      : pixels_(PixelArray<Scalar>::Constant(height, width, fill)) {
    Sanitize();
  }

  explicit Image(PixelArray<Scalar> pixels) : pixels_(std::move(pixels)) {
    Sanitize();
  }

  static Image FromRowMajor(Index height, Index width,
                            std::span<const Scalar> data) {
    if (static_cast<Index>(data.size()) != height * width) {
      Fail(ErrorKind::kDimensionMismatch,
           "image data length " + std::to_string(data.size()) +
               " does not match " + std::to_string(height) + "x" +
               std::to_string(width));
    }
    PixelArray<Scalar> pixels(height, width);
    std::copy(data.begin(), data.end(), pixels.data());
    return Image(std::move(pixels));
  }

  Index width() const { return pixels_.cols(); }
  Index height() const { return pixels_.rows(); }
  Index size() const { return pixels_.size(); }
  bool empty() const { return pixels_.size() == 0; }

  Scalar operator()(Index row, Index col) const { return pixels_(row, col); }
  const PixelArray<Scalar>& pixels() const { return pixels_; }
  std::span<const Scalar> data() const {
    return {pixels_.data(), static_cast<std::size_t>(pixels_.size())};
  }

  bool SameShape(const Image& other) const {
    return width() == other.width() && height() == other.height();
  }

  friend bool operator==(const Image& a, const Image& b) {
    return a.SameShape(b) && (a.pixels_ == b.pixels_).all();
  }

 private:
  void Sanitize() {
    for (Index i = 0; i < pixels_.size(); ++i) {
      Scalar& v = pixels_.data()[i];
      if (std::isnan(v)) {
        Fail(ErrorKind::kParameter, "image sample " + std::to_string(i) +
                                        " is NaN");
      }
      v = std::clamp(v, Scalar(0), Scalar(1));
    }
  }

  PixelArray<Scalar> pixels_;
};

using GrayImage = Image<double>;

/// Square odd-sized window copied out of an image.
template <typename Scalar>
class Patch {
 public:
  Patch(PixelMatrix<Scalar> values, PixelCoord origin)
      : values_(std::move(values)), origin_(origin) {
    if (values_.rows() != values_.cols() || values_.rows() < 3 ||
        values_.rows() % 2 == 0) {
      Fail(ErrorKind::kParameter,
           "patch must be square with odd size >= 3, got " +
               std::to_string(values_.rows()) + "x" +
               std::to_string(values_.cols()));
    }
    if (!values_.allFinite()) {
      Fail(ErrorKind::kParameter, "patch values must be finite");
    }
  }

  Index size() const { return values_.rows(); }
  const PixelMatrix<Scalar>& values() const { return values_; }
  PixelCoord origin() const { return origin_; }

 private:
  PixelMatrix<Scalar> values_;
  PixelCoord origin_;
};

using GrayPatch = Patch<double>;

/// Fractional (average) ranks, 1-based, ascending by value.
struct RankVector {
  Eigen::VectorXd ranks;

  Index size() const { return ranks.size(); }
  friend bool operator==(const RankVector& a, const RankVector& b) {
    return a.ranks.size() == b.ranks.size() && a.ranks == b.ranks;
  }
};

enum class SpatialContext : std::uint8_t {
  kHomogeneous,
  kDiffuse,
  kEdge,
  kCorner,
  kShadowBoundary,
  kShadow,
  kSpecular,
  kOccluded,
};

inline constexpr std::array<SpatialContext, 8> kAllContexts = {
    SpatialContext::kHomogeneous,    SpatialContext::kDiffuse,
    SpatialContext::kEdge,           SpatialContext::kCorner,
    SpatialContext::kShadowBoundary, SpatialContext::kShadow,
    SpatialContext::kSpecular,       SpatialContext::kOccluded,
};

std::string_view ContextName(SpatialContext context);
SpatialContext ParseContext(std::string_view name);
/// Fixed byte codes used for label-map export (10, 20, ..., 80).
std::uint8_t ContextLabelCode(SpatialContext context);
std::optional<SpatialContext> ContextFromLabelCode(std::uint8_t code);

/// Copies an expression into a dense column vector in row-major order so
/// every matcher sees the same flattening regardless of storage order.
template <typename Derived>
Eigen::VectorXd Flatten(const Eigen::DenseBase<Derived>& values) {
  Eigen::VectorXd out(values.size());
  Index k = 0;
  for (Index r = 0; r < values.rows(); ++r) {
    for (Index c = 0; c < values.cols(); ++c) {
      out(k++) = static_cast<double>(values(r, c));
    }
  }
  return out;
}

template <typename Derived>
RankVector rank_vector(const Eigen::DenseBase<Derived>& values) {
  const Eigen::VectorXd flat = Flatten(values);
  const Index n = flat.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return flat(a) < flat(b); });
  RankVector out{Eigen::VectorXd(n)};
  Index i = 0;
  while (i < n) {
    Index j = i;
    while (j + 1 < n && flat(order[j + 1]) == flat(order[i])) ++j;
    // Positions i..j (0-based) share the mean of the 1-based ranks i+1..j+1.
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (Index k = i; k <= j; ++k) out.ranks(order[k]) = rank;
    i = j + 1;
  }
  return out;
}

template <typename Scalar>
RankVector rank_vector(const Patch<Scalar>& patch) {
  return rank_vector(patch.values());
}

/// Copies the size x size window centered at `center`. No padding: a window
/// leaving the image is an out-of-bounds error.
template <typename Scalar>
Patch<Scalar> extract_patch(const Image<Scalar>& img, PixelCoord center,
                            Index size) {
  if (size < 3 || size % 2 == 0) {
    Fail(ErrorKind::kParameter,
         "patch size must be odd and >= 3, got " + std::to_string(size));
  }
  const Index half = size / 2;
  if (center.row - half < 0 || center.col - half < 0 ||
      center.row + half >= img.height() || center.col + half >= img.width()) {
    Fail(ErrorKind::kOutOfBounds,
         "patch of size " + std::to_string(size) + " at (" +
             std::to_string(center.row) + "," + std::to_string(center.col) +
             ") exceeds " + std::to_string(img.height()) + "x" +
             std::to_string(img.width()) + " image");
  }
  PixelMatrix<Scalar> values = img.pixels()
                                   .block(center.row - half,
                                          center.col - half, size, size)
                                   .matrix();
  return Patch<Scalar>(std::move(values), center);
}

struct StructureTensorThresholds {
  double low = 1e-4;
  double high = 1e-2;
};

/// Eigenvalues (descending) of the mean Sobel structure tensor over the
/// window interior; gradients are in intensity units per pixel.
Eigen::Vector2d structure_tensor_eigenvalues(const GrayImage& img,
                                             PixelCoord center, Index size);

/// Structure-tensor heuristic. Only Homogeneous, Edge, Corner and Diffuse can
/// come out of it; the remaining labels need scene ground truth.
SpatialContext classify_context(const GrayImage& img, PixelCoord center,
                                Index size,
                                const StructureTensorThresholds& thresholds =
                                    {});

}  // namespace patchchar
