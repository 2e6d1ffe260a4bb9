#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "patchchar/config.hpp"
#include "patchchar/error.hpp"

namespace patchchar::cli {

namespace fs = std::filesystem;

/// Exit status for a library error: 2 config, 3 IO, 4 numerical.
int exit_code_for(ErrorKind kind);

/// Returns `dir`, creating it when `create` is set; a missing directory is
/// an IO error otherwise.
fs::path prepare_output_dir(const fs::path& dir, bool create);

// Each command writes its artifacts plus the resolved config.json into `out`.
void cmd_generate(const ExperimentConfig& cfg, const fs::path& out);
/// Renders one level of the configured family with the reference noise
/// draw; `occluder` adds the dynamic objects.
void cmd_perturb(const ExperimentConfig& cfg, double level, bool occluder,
                 const fs::path& out);
void cmd_characterize(const ExperimentConfig& cfg, const fs::path& out,
                      bool svg = false);
void cmd_roc(const ExperimentConfig& cfg, const fs::path& out);

struct DetectInputs {
  fs::path reference;
  fs::path current;
  std::optional<fs::path> labels;   // labels.pgm from generate
  std::vector<fs::path> background;  // frames for a calibrated threshold
};
void cmd_detect(const ExperimentConfig& cfg, const DetectInputs& inputs,
                const fs::path& out);

int run_cli(int argc, char** argv);

}  // namespace patchchar::cli
