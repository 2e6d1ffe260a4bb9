#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "patchchar/changedetect.hpp"
#include "patchchar/characterize.hpp"
#include "patchchar/scene.hpp"

namespace patchchar {

struct PerturbationConfig {
  std::string family = "global_illumination";
  std::vector<double> levels;  // empty: the family's default levels
  FamilyParams params;
};

struct SweepConfig {
  std::vector<Index> sizes{5, 9, 13, 17, 21};
  Index samples_per_context = 100;
  std::vector<SpatialContext> contexts = SweepOptions{}.contexts;
};

struct RocConfig {
  std::vector<std::string> metrics{"dct_energy", "ro_hamming", "dct_ro"};
  RocRecipe recipe{13, 500, 500, 0.7, 1.3,
                   {NoiseChoice::Kind::kGaussian, 0.02}, 0};
};

/// Default strength of each ROC noise kind.
double default_noise_param(NoiseChoice::Kind kind);

/// Everything a subcommand needs. All fields have defaults except the
/// master seed, which a config file must state (or --seed must supply).
struct ExperimentConfig {
  std::optional<std::uint64_t> seed;
  std::string output_dir = "out";
  int jobs = 1;
  SceneSpec scene = default_scene_spec();
  PerturbationConfig perturbation;
  std::optional<SensorModel> sensor;
  std::vector<std::string> metrics{"abs_rho"};
  MatcherOptions matcher;
  SweepConfig sweep;
  RocConfig roc;
  DetectorConfig detector;

  std::uint64_t Seed() const;
  std::vector<double> Levels() const;
  /// Resolves every name and range; throws kConfig.
  void Validate() const;
};

/// Defaults with seed 1 and thermal noise 2/255 at 8 bits.
ExperimentConfig default_config();

/// JSON text merged field by field onto default_config(), except that the
/// seed is not inherited. Unknown keys are errors.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string dump_config(const ExperimentConfig& config);

}  // namespace patchchar
