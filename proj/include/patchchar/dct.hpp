#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <vector>

#include "patchchar/error.hpp"
#include "patchchar/image.hpp"

namespace patchchar {

/// Coefficients of a square block in the orthonormal DCT-II basis.
template <typename Scalar>
using CoeffBlock = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Orthonormal DCT-II matrix: row k is alpha_k cos(pi (2n+1) k / 2N).
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dct_basis(Index n) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> basis(n, n);
  const Scalar dc = std::sqrt(Scalar(1) / static_cast<Scalar>(n));
  const Scalar ac = std::sqrt(Scalar(2) / static_cast<Scalar>(n));
  for (Index k = 0; k < n; ++k) {
    for (Index i = 0; i < n; ++i) {
      basis(k, i) = (k == 0 ? dc : ac) *
                    std::cos(std::numbers::pi_v<Scalar> *
                             static_cast<Scalar>((2 * i + 1) * k) /
                             static_cast<Scalar>(2 * n));
    }
  }
  return basis;
}

template <typename Derived>
CoeffBlock<typename Derived::Scalar> dct2(
    const Eigen::MatrixBase<Derived>& block) {
  using Scalar = typename Derived::Scalar;
  if (block.rows() != block.cols()) {
    Fail(ErrorKind::kDimensionMismatch, "dct2 expects a square block");
  }
  const auto basis = dct_basis<Scalar>(block.rows());
  return basis * block * basis.transpose();
}

template <typename Derived>
CoeffBlock<typename Derived::Scalar> idct2(
    const Eigen::MatrixBase<Derived>& coeffs) {
  using Scalar = typename Derived::Scalar;
  if (coeffs.rows() != coeffs.cols()) {
    Fail(ErrorKind::kDimensionMismatch, "idct2 expects a square block");
  }
  const auto basis = dct_basis<Scalar>(coeffs.rows());
  return basis.transpose() * coeffs * basis;
}

struct ZigZagEntry {
  Index row;
  Index col;
};

/// JPEG zig-zag scan of an n x n block; entry 0 is DC.
std::vector<ZigZagEntry> zigzag_order(Index n);

/// Zig-zag indices of the k largest-positive and k most-negative AC
/// coefficients, strongest first. Coefficients within 1e-12 of zero
/// (relative to the block norm) are treated as zero.
struct DctSignature {
  Index k = 0;
  std::vector<Index> pos_idx;
  std::vector<Index> neg_idx;
};

DctSignature dct_signature(const CoeffBlock<double>& coeffs, Index k);

/// AC coefficients in zig-zag order (index i holds zig-zag position i + 1).
Eigen::VectorXd ac_zigzag(const CoeffBlock<double>& coeffs);

}  // namespace patchchar
