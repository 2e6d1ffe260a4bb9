#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "patchchar/image.hpp"

namespace patchchar::testing {

inline GrayImage RandomImage(Index height, Index width, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PixelArray<double> px(height, width);
  for (Index i = 0; i < px.size(); ++i) px.data()[i] = u(gen);
  return GrayImage(std::move(px));
}

/// s x s values in (lo, hi) that are pairwise distinct by construction.
inline PixelMatrix<double> DistinctPatch(Index s, std::mt19937_64& gen,
                                         double lo = 0.05, double hi = 0.95) {
  const Index n = s * s;
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::shuffle(perm.begin(), perm.end(), gen);
  std::uniform_real_distribution<double> jitter(0.1, 0.9);
  PixelMatrix<double> out(s, s);
  for (Index i = 0; i < n; ++i) {
    const double t = (static_cast<double>(perm[static_cast<std::size_t>(i)]) +
                      jitter(gen)) / static_cast<double>(n);
    out.data()[i] = lo + (hi - lo) * t;
  }
  return out;
}

/// Average rank straight from the definition: #smaller + (#equal + 1) / 2.
inline Eigen::VectorXd BruteForceRanks(const Eigen::VectorXd& v) {
  Eigen::VectorXd r(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    double less = 0, equal = 0;
    for (Index j = 0; j < v.size(); ++j) {
      if (v(j) < v(i)) less += 1;
      if (v(j) == v(i)) equal += 1;
    }
    r(i) = less + (equal + 1.0) / 2.0;
  }
  return r;
}

inline double PlainPearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double n = static_cast<double>(a.size());
  const double ma = a.sum() / n, mb = b.sum() / n;
  double sab = 0, saa = 0, sbb = 0;
  for (Index i = 0; i < a.size(); ++i) {
    sab += (a(i) - ma) * (b(i) - mb);
    saa += (a(i) - ma) * (a(i) - ma);
    sbb += (b(i) - mb) * (b(i) - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

// The projection's level sets form an ordered partition of the indices, and
// on each level set the optimum takes the mean of q_c. Enumerate every
// ordered partition, keep the feasible ones and take the best.
inline double BruteForceConeDistance(const Eigen::VectorXd& q_b,
                                     const Eigen::VectorXd& q_c) {
  const Index n = q_b.size();
  std::vector<Index> block(static_cast<std::size_t>(n), 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    Index used = 0;
    for (Index b : block) used = std::max(used, b + 1);
    std::vector<bool> seen(static_cast<std::size_t>(used), false);
    for (Index b : block) seen[static_cast<std::size_t>(b)] = true;
    if (std::all_of(seen.begin(), seen.end(), [](bool s) { return s; })) {
      std::vector<double> sum(static_cast<std::size_t>(used), 0.0);
      std::vector<double> cnt(static_cast<std::size_t>(used), 0.0);
      for (Index i = 0; i < n; ++i) {
        sum[static_cast<std::size_t>(block[i])] += q_c(i);
        cnt[static_cast<std::size_t>(block[i])] += 1;
      }
      Eigen::VectorXd x(n);
      for (Index i = 0; i < n; ++i) {
        const auto b = static_cast<std::size_t>(block[i]);
        x(i) = sum[b] / cnt[b];
      }
      bool feasible = true;
      for (Index i = 0; i < n && feasible; ++i) {
        for (Index j = 0; j < n; ++j) {
          if (q_b(i) < q_b(j) && x(i) > x(j) + 1e-12) {
            feasible = false;
            break;
          }
        }
      }
      if (feasible) best = std::min(best, (q_c - x).squaredNorm() / n);
    }
    Index pos = 0;
    while (pos < n && ++block[pos] == n) block[pos++] = 0;
    if (pos == n) break;
  }
  return best;
}

}  // namespace patchchar::testing
