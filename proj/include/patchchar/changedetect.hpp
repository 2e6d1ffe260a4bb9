#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "patchchar/matchers.hpp"
#include "patchchar/scene.hpp"

namespace patchchar {

enum class ThresholdPolicy { kFixed, kBackgroundCalibrated };

struct DetectorConfig {
  std::string metric = "abs_rho";
  MatcherOptions matcher;
  Index block_size = 13;
  double threshold = 0.8;
  ThresholdPolicy policy = ThresholdPolicy::kFixed;
  double kappa = 3.0;

  void Validate() const;
};

enum class BlockState : std::uint8_t { kUnchanged, kChanged, kSkipped };

/// Non-overlapping block grid; partial border blocks are kSkipped, as are
/// blocks whose score is undefined (zero variance).
struct ChangeMask {
  Index block_size = 0;
  Index grid_rows = 0;
  Index grid_cols = 0;
  std::vector<BlockState> states;
  std::vector<double> scores;

  BlockState At(Index br, Index bc) const {
    return states[static_cast<std::size_t>(br * grid_cols + bc)];
  }
  Index Count(BlockState s) const;
};

/// Blocks that are fully inside the image.
Index full_block_rows(Index height, Index block_size);
Index full_block_cols(Index width, Index block_size);

/// mean + kappa * std of background block scores (mean - kappa * std for
/// lower-is-changed metrics), floored at 1e-9.
double calibrate_threshold(const std::vector<GrayImage>& background_stack,
                           const GrayImage& reference,
                           const DetectorConfig& cfg);

ChangeMask detect_changes(const GrayImage& reference, const GrayImage& current,
                          const DetectorConfig& cfg, double threshold);

/// Ground truth: a full block is changed when any pixel carries one of
/// `changed_labels`.
ChangeMask truth_mask(const LabelMap& labels, Index block_size,
                      const std::vector<SpatialContext>& changed_labels = {
                          SpatialContext::kOccluded});

struct BlockCoord {
  Index row;
  Index col;
};

struct MaskEvaluation {
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
  bool degenerate = false;
  Index true_positives = 0;
  Index false_positives = 0;
  Index false_negatives = 0;
  std::vector<BlockCoord> false_positive_blocks;
};

MaskEvaluation evaluate_mask(const ChangeMask& mask, const ChangeMask& truth);

/// Labels present anywhere in a block.
std::vector<SpatialContext> block_labels(const LabelMap& labels,
                                         Index block_size, BlockCoord block);

/// Pixel-resolution P5 codes: changed 255, unchanged 0, skipped 128.
std::vector<std::uint8_t> mask_codes(const ChangeMask& mask, Index height,
                                     Index width);
void write_mask_csv(const ChangeMask& mask, std::ostream& out);

}  // namespace patchchar
