#pragma once

#include <Eigen/Dense>

#include <vector>

namespace patchchar {

/// Least-squares non-decreasing fit (pool adjacent violators), unit weights.
template <typename Derived>
Eigen::VectorXd isotonic_fit(const Eigen::MatrixBase<Derived>& y) {
  struct Block {
    double sum;
    double count;
  };
  std::vector<Block> blocks;
  blocks.reserve(static_cast<std::size_t>(y.size()));
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    blocks.push_back({static_cast<double>(y(i)), 1.0});
    // Merge while the newest block's mean undercuts its predecessor.
    while (blocks.size() > 1) {
      const Block& last = blocks.back();
      const Block& prev = blocks[blocks.size() - 2];
      if (prev.sum * last.count <= last.sum * prev.count) break;
      const Block merged{prev.sum + last.sum, prev.count + last.count};
      blocks.pop_back();
      blocks.back() = merged;
    }
  }
  Eigen::VectorXd out(y.size());
  Eigen::Index pos = 0;
  for (const Block& b : blocks) {
    const double mean = b.sum / b.count;
    for (int j = 0; j < static_cast<int>(b.count); ++j) out(pos++) = mean;
  }
  return out;
}

}  // namespace patchchar
