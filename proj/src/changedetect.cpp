#include "patchchar/changedetect.hpp"

#include <cmath>
#include <ostream>

#include "patchchar/characterize.hpp"

namespace patchchar {

namespace {

constexpr double kThresholdFloor = 1e-9;

PixelMatrix<double> Block(const GrayImage& img, Index br, Index bc,
                          Index size) {
  return img.pixels().block(br * size, bc * size, size, size).matrix();
}

bool IsChanged(Polarity polarity, double score, double threshold) {
  return polarity == Polarity::kHigherIsChanged ? score > threshold
                                                : score < threshold;
}

}  // namespace

void DetectorConfig::Validate() const {
  if (block_size < 3 || block_size % 2 == 0) {
    Fail(ErrorKind::kConfig, "detector block size must be odd and >= 3");
  }
  if (policy == ThresholdPolicy::kBackgroundCalibrated && !(kappa > 0.0)) {
    Fail(ErrorKind::kConfig, "detector kappa must be > 0");
  }
}

Index ChangeMask::Count(BlockState s) const {
  return static_cast<Index>(std::count(states.begin(), states.end(), s));
}

Index full_block_rows(Index height, Index block_size) {
  return height / block_size;
}
Index full_block_cols(Index width, Index block_size) {
  return width / block_size;
}

double calibrate_threshold(const std::vector<GrayImage>& background_stack,
                           const GrayImage& reference,
                           const DetectorConfig& cfg) {
  if (cfg.block_size < 3 || cfg.block_size % 2 == 0) {
    Fail(ErrorKind::kConfig, "detector block size must be odd and >= 3");
  }
  if (background_stack.empty()) {
    Fail(ErrorKind::kDegenerate, "calibration needs a non-empty stack");
  }
  const MatcherInfo matcher = get_matcher(cfg.metric, cfg.matcher);
  const Index rows = full_block_rows(reference.height(), cfg.block_size);
  const Index cols = full_block_cols(reference.width(), cfg.block_size);
  std::vector<double> scores;
  for (const GrayImage& frame : background_stack) {
    if (!frame.SameShape(reference)) {
      Fail(ErrorKind::kDimensionMismatch,
           "background frame does not match reference dimensions");
    }
    for (Index br = 0; br < rows; ++br) {
      for (Index bc = 0; bc < cols; ++bc) {
        try {
          scores.push_back(
              matcher.fn(Block(reference, br, bc, cfg.block_size),
                         Block(frame, br, bc, cfg.block_size)));
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::kUndefinedCorrelation &&
              e.kind() != ErrorKind::kDegenerate) {
            throw;
          }
        }
      }
    }
  }
  if (scores.empty()) {
    Fail(ErrorKind::kDegenerate, "calibration produced no defined scores");
  }
  double mean = 0.0;
  for (double s : scores) mean += s;
  mean /= static_cast<double>(scores.size());
  double var = 0.0;
  for (double s : scores) var += (s - mean) * (s - mean);
  const double sd = std::sqrt(var / static_cast<double>(scores.size()));
  const double threshold = matcher.polarity == Polarity::kHigherIsChanged
                               ? mean + cfg.kappa * sd
                               : mean - cfg.kappa * sd;
  return std::max(threshold, kThresholdFloor);
}

ChangeMask detect_changes(const GrayImage& reference, const GrayImage& current,
                          const DetectorConfig& cfg, double threshold) {
  cfg.Validate();
  if (!reference.SameShape(current)) {
    Fail(ErrorKind::kDimensionMismatch,
         "detect: reference " + std::to_string(reference.height()) + "x" +
             std::to_string(reference.width()) + " vs current " +
             std::to_string(current.height()) + "x" +
             std::to_string(current.width()));
  }
  const MatcherInfo matcher = get_matcher(cfg.metric, cfg.matcher);
  const Index bs = cfg.block_size;
  ChangeMask mask;
  mask.block_size = bs;
  mask.grid_rows = (reference.height() + bs - 1) / bs;
  mask.grid_cols = (reference.width() + bs - 1) / bs;
  const auto cells = static_cast<std::size_t>(mask.grid_rows * mask.grid_cols);
  mask.states.assign(cells, BlockState::kSkipped);
  mask.scores.assign(cells, std::numeric_limits<double>::quiet_NaN());
  const Index rows = full_block_rows(reference.height(), bs);
  const Index cols = full_block_cols(reference.width(), bs);
  for (Index br = 0; br < rows; ++br) {
    for (Index bc = 0; bc < cols; ++bc) {
      const auto i = static_cast<std::size_t>(br * mask.grid_cols + bc);
      try {
        const double score = matcher.fn(Block(reference, br, bc, bs),
                                        Block(current, br, bc, bs));
        mask.scores[i] = score;
        mask.states[i] = IsChanged(matcher.polarity, score, threshold)
                             ? BlockState::kChanged
                             : BlockState::kUnchanged;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kUndefinedCorrelation &&
            e.kind() != ErrorKind::kDegenerate) {
          throw;
        }
      }
    }
  }
  return mask;
}

ChangeMask truth_mask(const LabelMap& labels, Index block_size,
                      const std::vector<SpatialContext>& changed_labels) {
  ChangeMask mask;
  mask.block_size = block_size;
  mask.grid_rows = (labels.rows() + block_size - 1) / block_size;
  mask.grid_cols = (labels.cols() + block_size - 1) / block_size;
  const auto cells = static_cast<std::size_t>(mask.grid_rows * mask.grid_cols);
  mask.states.assign(cells, BlockState::kSkipped);
  mask.scores.assign(cells, std::numeric_limits<double>::quiet_NaN());
  const Index rows = full_block_rows(labels.rows(), block_size);
  const Index cols = full_block_cols(labels.cols(), block_size);
  for (Index br = 0; br < rows; ++br) {
    for (Index bc = 0; bc < cols; ++bc) {
      bool changed = false;
      for (SpatialContext c : block_labels(labels, block_size, {br, bc})) {
        changed = changed || std::find(changed_labels.begin(),
                                       changed_labels.end(),
                                       c) != changed_labels.end();
      }
      mask.states[static_cast<std::size_t>(br * mask.grid_cols + bc)] =
          changed ? BlockState::kChanged : BlockState::kUnchanged;
    }
  }
  return mask;
}

std::vector<SpatialContext> block_labels(const LabelMap& labels,
                                         Index block_size, BlockCoord block) {
  std::array<bool, kAllContexts.size()> seen{};
  const auto region = labels.block(block.row * block_size,
                                   block.col * block_size, block_size,
                                   block_size);
  for (Index r = 0; r < region.rows(); ++r) {
    for (Index c = 0; c < region.cols(); ++c) seen[region(r, c)] = true;
  }
  std::vector<SpatialContext> out;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i]) out.push_back(kAllContexts[i]);
  }
  return out;
}

MaskEvaluation evaluate_mask(const ChangeMask& mask, const ChangeMask& truth) {
  if (mask.grid_rows != truth.grid_rows || mask.grid_cols != truth.grid_cols ||
      mask.block_size != truth.block_size) {
    Fail(ErrorKind::kDimensionMismatch, "evaluate_mask: grid mismatch");
  }
  MaskEvaluation ev;
  for (Index br = 0; br < mask.grid_rows; ++br) {
    for (Index bc = 0; bc < mask.grid_cols; ++bc) {
      const BlockState m = mask.At(br, bc);
      const BlockState t = truth.At(br, bc);
      if (m == BlockState::kSkipped || t == BlockState::kSkipped) continue;
      const bool flagged = m == BlockState::kChanged;
      const bool actual = t == BlockState::kChanged;
      if (flagged && actual) ++ev.true_positives;
      if (flagged && !actual) {
        ++ev.false_positives;
        ev.false_positive_blocks.push_back({br, bc});
      }
      if (!flagged && actual) ++ev.false_negatives;
    }
  }
  const auto ratio = [&](Index num, Index den) {
    if (den == 0) {
      ev.degenerate = true;
      return 1.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
  };
  ev.precision = ratio(ev.true_positives, ev.true_positives + ev.false_positives);
  ev.recall = ratio(ev.true_positives, ev.true_positives + ev.false_negatives);
  ev.f1 = ev.precision + ev.recall > 0.0
              ? 2.0 * ev.precision * ev.recall / (ev.precision + ev.recall)
              : 0.0;
  return ev;
}

std::vector<std::uint8_t> mask_codes(const ChangeMask& mask, Index height,
                                     Index width) {
  std::vector<std::uint8_t> codes(static_cast<std::size_t>(height * width),
                                  128);
  for (Index r = 0; r < height; ++r) {
    for (Index c = 0; c < width; ++c) {
      const BlockState s = mask.At(r / mask.block_size, c / mask.block_size);
      codes[static_cast<std::size_t>(r * width + c)] =
          s == BlockState::kChanged ? 255
          : s == BlockState::kUnchanged ? 0
                                         : 128;
    }
  }
  return codes;
}

void write_mask_csv(const ChangeMask& mask, std::ostream& out) {
  out << "block_row,block_col,score,decision\n";
  for (Index br = 0; br < mask.grid_rows; ++br) {
    for (Index bc = 0; bc < mask.grid_cols; ++bc) {
      const auto i = static_cast<std::size_t>(br * mask.grid_cols + bc);
      const BlockState s = mask.states[i];
      out << br << ',' << bc << ',' << FormatDouble(mask.scores[i]) << ','
          << (s == BlockState::kChanged     ? "changed"
              : s == BlockState::kUnchanged ? "unchanged"
                                            : "skipped")
          << '\n';
    }
  }
}

}  // namespace patchchar
