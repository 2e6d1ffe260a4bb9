#include "patchchar/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "patchchar/netpbm.hpp"
#include "patchchar/rng.hpp"

namespace patchchar::cli {

namespace {

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorKind::kIo, "cannot write " + path.string());
  out << text;
  if (!out) Fail(ErrorKind::kIo, "write failed for " + path.string());
  spdlog::debug("wrote {}", path.string());
}

template <typename Fn>
void WriteWith(const fs::path& path, Fn&& fn) {
  std::ostringstream ss;
  fn(ss);
  WriteText(path, ss.str());
}

void WriteResolvedConfig(const ExperimentConfig& cfg, const fs::path& out) {
  WriteText(out / "config.json", dump_config(cfg));
}

const SensorModel* SensorOf(const ExperimentConfig& cfg) {
  return cfg.sensor ? &*cfg.sensor : nullptr;
}

LabelMap LoadLabels(const fs::path& path) {
  const GrayImage img = load_image(path);
  LabelMap labels(img.height(), img.width());
  for (Index r = 0; r < img.height(); ++r) {
    for (Index c = 0; c < img.width(); ++c) {
      const std::uint8_t code = QuantizeByte(img.pixels()(r, c));
      const auto ctx = ContextFromLabelCode(code);
      if (!ctx) {
        Fail(ErrorKind::kInvalidFormat,
             path.string() + ": unknown label code " + std::to_string(code));
      }
      labels(r, c) = static_cast<std::uint8_t>(*ctx);
    }
  }
  return labels;
}

// Line chart of the level-pooled criterion against patch size, one polyline
// per context.
std::string SizeCurveSvg(const CriterionManifold& pooled_levels) {
  constexpr double kW = 480, kH = 320, kPad = 48;
  const auto& sizes = pooled_levels.sizes;
  const double smin = static_cast<double>(sizes.front());
  const double smax = static_cast<double>(sizes.back());
  auto x = [&](double s) {
    return smax > smin ? kPad + (s - smin) / (smax - smin) * (kW - 2 * kPad)
                       : kW / 2;
  };
  auto y = [&](double v) { return kH - kPad - v * (kH - 2 * kPad); };
  static constexpr const char* kColors[] = {"#1b9e77", "#d95f02", "#7570b3",
                                            "#e7298a", "#66a61e", "#e6ab02",
                                            "#a6761d", "#666666"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
      << "\" height=\"" << kH << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<line x1=\"" << kPad << "\" y1=\"" << y(0) << "\" x2=\"" << kW - kPad
      << "\" y2=\"" << y(0) << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kPad << "\" y1=\"" << y(0) << "\" x2=\"" << kPad
      << "\" y2=\"" << y(1) << "\" stroke=\"black\"/>\n";
  for (Index s : sizes) {
    svg << "<text x=\"" << x(static_cast<double>(s)) << "\" y=\""
        << kH - kPad + 16 << "\" font-size=\"11\" text-anchor=\"middle\">"
        << s << "</text>\n";
  }
  for (double v : {0.0, 0.5, 1.0}) {
    svg << "<text x=\"" << kPad - 6 << "\" y=\"" << y(v) + 4
        << "\" font-size=\"11\" text-anchor=\"end\">" << v << "</text>\n";
  }
  for (std::size_t ci = 0; ci < pooled_levels.contexts.size(); ++ci) {
    const char* color = kColors[ci % std::size(kColors)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (std::size_t si = 0; si < sizes.size(); ++si) {
      const CellStats& c = pooled_levels.Cell(ci, 0, si);
      if (c.count == 0) continue;
      svg << x(static_cast<double>(sizes[si])) << ',' << y(c.mean) << ' ';
    }
    svg << "\"/>\n<text x=\"" << kW - kPad + 4 << "\" y=\""
        << kPad + 14.0 * static_cast<double>(ci) << "\" font-size=\"11\" fill=\""
        << color << "\">" << ContextName(pooled_levels.contexts[ci])
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
    case ErrorKind::kParameter:
      return 2;
    case ErrorKind::kIo:
    case ErrorKind::kParse:
    case ErrorKind::kInvalidFormat:
      return 3;
    case ErrorKind::kOutOfBounds:
    case ErrorKind::kDimensionMismatch:
    case ErrorKind::kUndefinedCorrelation:
    case ErrorKind::kDegenerate:
      return 4;
  }
  return 4;
}

fs::path prepare_output_dir(const fs::path& dir, bool create) {
  std::error_code ec;
  if (fs::is_directory(dir, ec)) return dir;
  if (fs::exists(dir, ec)) {
    Fail(ErrorKind::kIo, dir.string() + " exists and is not a directory");
  }
  if (!create) {
    Fail(ErrorKind::kIo, "output directory " + dir.string() +
                             " does not exist (pass --create)");
  }
  fs::create_directories(dir, ec);
  if (ec) {
    Fail(ErrorKind::kIo, "cannot create " + dir.string() + ": " + ec.message());
  }
  return dir;
}

void cmd_generate(const ExperimentConfig& cfg, const fs::path& out) {
  cfg.Validate();
  const Scene scene = generate_scene(cfg.scene);
  save_image(scene.base, out / "base.pgm");
  save_image(render_state(scene, reference_state(), SensorOf(cfg), cfg.Seed()),
             out / "reference.pgm");
  save_codes(scene.height(), scene.width(), label_codes(scene.labels),
             out / "labels.pgm");
  save_image(scene.depth, out / "depth.pgm");
  save_image(scene.illum_direct, out / "illum_direct.pgm");
  save_image(scene.illum_ambient, out / "illum_ambient.pgm");
  WriteResolvedConfig(cfg, out);
  spdlog::info("generate: {}x{} scene written to {}", scene.width(),
               scene.height(), out.string());
}

void cmd_perturb(const ExperimentConfig& cfg, double level, bool occluder,
                 const fs::path& out) {
  cfg.Validate();
  const PerturbationFamily family =
      make_family(cfg.perturbation.family, cfg.perturbation.params);
  const Scene scene = generate_scene(cfg.scene);
  TemporalState state = family.state(level);
  state.dynamic_objects = occluder;
  save_image(render_state(scene, state, SensorOf(cfg), cfg.Seed()),
             out / "frame.pgm");
  WriteResolvedConfig(cfg, out);
  spdlog::info("perturb: {} level {} written to {}", family.name, level,
               (out / "frame.pgm").string());
}

void cmd_characterize(const ExperimentConfig& cfg, const fs::path& out,
                      bool svg) {
  cfg.Validate();
  const PerturbationFamily family =
      make_family(cfg.perturbation.family, cfg.perturbation.params);
  const Scene scene = generate_scene(cfg.scene);
  SweepOptions opts;
  opts.levels = cfg.Levels();
  opts.sizes = cfg.sweep.sizes;
  opts.contexts = cfg.sweep.contexts;
  opts.matcher = cfg.matcher;
  opts.samples_per_context = cfg.sweep.samples_per_context;
  opts.seed = cfg.Seed();
  opts.sensor = cfg.sensor;
  opts.jobs = cfg.jobs;
  // The occlusion manifold is left out of every integration.
  const std::vector<SpatialContext> exclude{SpatialContext::kOccluded};

  std::ostringstream optimal;
  optimal << "metric,optimal_size\n";
  for (const std::string& metric : cfg.metrics) {
    opts.metric = metric;
    const CriterionManifold m = sweep_manifold(scene, family, opts);
    WriteWith(out / ("manifold_" + metric + ".csv"),
              [&](std::ostream& os) { write_manifold_csv(m, os); });

    bool has_kept = false;
    for (auto c : m.contexts) has_kept = has_kept || c != SpatialContext::kOccluded;
    const std::vector<SpatialContext> ex =
        has_kept ? exclude : std::vector<SpatialContext>{};
    const CriterionManifold by_level_size = marginalize(m, Axis::kContexts, ex);
    const CriterionManifold by_context_size = marginalize(m, Axis::kLevels);
    const CriterionManifold by_size =
        marginalize(by_level_size, Axis::kLevels);
    WriteWith(out / ("marginal_levels_" + metric + ".csv"),
              [&](std::ostream& os) { write_manifold_csv(by_level_size, os); });
    WriteWith(out / ("marginal_contexts_" + metric + ".csv"), [&](std::ostream& os) {
      write_manifold_csv(by_context_size, os);
    });
    WriteWith(out / ("marginal_sizes_" + metric + ".csv"),
              [&](std::ostream& os) { write_manifold_csv(by_size, os); });

    const ManifoldSummary summary = summarize(m);
    WriteWith(out / ("summary_" + metric + ".csv"),
              [&](std::ostream& os) { write_summary_csv(summary, os); });
    const Index best = optimal_patch_size(m, ex);
    optimal << metric << ',' << best << '\n';
    if (svg) {
      WriteText(out / ("sizes_" + metric + ".svg"), SizeCurveSvg(by_context_size));
    }
    spdlog::info("characterize: {} on {} ({} levels x {} sizes x {} contexts), "
                 "optimal size {}",
                 metric, family.name, m.levels.size(), m.sizes.size(),
                 m.contexts.size(), best);
  }
  WriteText(out / "optimal_size.csv", optimal.str());
  WriteResolvedConfig(cfg, out);
}

void cmd_roc(const ExperimentConfig& cfg, const fs::path& out) {
  cfg.Validate();
  if (cfg.roc.metrics.empty()) {
    Fail(ErrorKind::kConfig, "roc: no metrics configured");
  }
  const Scene scene = generate_scene(cfg.scene);
  const RocFrames frames = render_roc_frames(scene, SensorOf(cfg), cfg.Seed());
  RocRecipe recipe = cfg.roc.recipe;
  recipe.seed = DeriveSeed(cfg.Seed(), 2);

  std::ostringstream summary;
  summary << "metric,auc,changed,unchanged,excluded\n";
  for (const std::string& metric : cfg.roc.metrics) {
    const MatcherInfo info = get_matcher(metric, cfg.matcher);
    const RocScores scores = roc_scores(frames.reference, frames.current,
                                        scene.labels, info, recipe);
    if (scores.changed.empty() || scores.unchanged.empty()) {
      Fail(ErrorKind::kDegenerate,
           "roc: " + metric + " left no defined scores in one class");
    }
    const RocCurve curve = roc(scores.changed, scores.unchanged, info.polarity);
    WriteWith(out / ("roc_" + metric + ".csv"),
              [&](std::ostream& os) { write_roc_csv(curve, os); });
    summary << metric << ',' << FormatDouble(curve.auc) << ','
            << scores.changed.size() << ',' << scores.unchanged.size() << ','
            << scores.excluded << '\n';
    spdlog::info("roc: {} auc {:.4f} ({} noise {})", metric, curve.auc,
                 NoiseKindName(recipe.noise.kind), recipe.noise.param);
  }
  WriteText(out / "roc_summary.csv", summary.str());
  WriteResolvedConfig(cfg, out);
}

void cmd_detect(const ExperimentConfig& cfg, const DetectInputs& inputs,
                const fs::path& out) {
  cfg.Validate();
  const GrayImage reference = load_image(inputs.reference);
  const GrayImage current = load_image(inputs.current);
  const DetectorConfig& det = cfg.detector;

  double threshold = det.threshold;
  if (det.policy == ThresholdPolicy::kBackgroundCalibrated) {
    if (inputs.background.empty()) {
      Fail(ErrorKind::kConfig,
           "detect: background_calibrated policy needs --background frames");
    }
    std::vector<GrayImage> stack;
    for (const auto& p : inputs.background) stack.push_back(load_image(p));
    threshold = calibrate_threshold(stack, reference, det);
    spdlog::info("detect: calibrated threshold {}", threshold);
  }
  const ChangeMask mask = detect_changes(reference, current, det, threshold);
  save_codes(reference.height(), reference.width(),
             mask_codes(mask, reference.height(), reference.width()),
             out / "mask.pgm");
  WriteWith(out / "mask.csv",
            [&](std::ostream& os) { write_mask_csv(mask, os); });

  std::ostringstream metrics;
  metrics << "key,value\n"
          << "metric," << det.metric << '\n'
          << "threshold," << FormatDouble(threshold) << '\n'
          << "blocks_changed," << mask.Count(BlockState::kChanged) << '\n'
          << "blocks_unchanged," << mask.Count(BlockState::kUnchanged) << '\n'
          << "blocks_skipped," << mask.Count(BlockState::kSkipped) << '\n';
  if (inputs.labels) {
    const LabelMap labels = LoadLabels(*inputs.labels);
    if (labels.rows() != reference.height() ||
        labels.cols() != reference.width()) {
      Fail(ErrorKind::kDimensionMismatch,
           "detect: labels do not match the reference dimensions");
    }
    const MaskEvaluation ev =
        evaluate_mask(mask, truth_mask(labels, det.block_size));
    metrics << "precision," << FormatDouble(ev.precision) << '\n'
            << "recall," << FormatDouble(ev.recall) << '\n'
            << "f1," << FormatDouble(ev.f1) << '\n'
            << "degenerate," << (ev.degenerate ? 1 : 0) << '\n'
            << "true_positives," << ev.true_positives << '\n'
            << "false_positives," << ev.false_positives << '\n'
            << "false_negatives," << ev.false_negatives << '\n';
    spdlog::info("detect: precision {:.3f} recall {:.3f} f1 {:.3f}",
                 ev.precision, ev.recall, ev.f1);
  }
  WriteText(out / "detect_metrics.csv", metrics.str());
  WriteResolvedConfig(cfg, out);
  spdlog::info("detect: {} of {} blocks flagged", mask.Count(BlockState::kChanged),
               mask.states.size());
}

namespace {

void ConfigureLogging() {
  if (!spdlog::get("patchchar")) {
    auto logger = spdlog::stderr_logger_st("patchchar");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
  }
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("PATCHCHAR_LOG")) {
    const std::string value(env);
    bool known = false;
    for (auto l : {spdlog::level::trace, spdlog::level::debug,
                   spdlog::level::info, spdlog::level::warn,
                   spdlog::level::err, spdlog::level::critical,
                   spdlog::level::off}) {
      const auto name = spdlog::level::to_string_view(l);
      if (value == std::string_view(name.data(), name.size())) {
        spdlog::set_level(l);
        known = true;
      }
    }
    if (value == "warning") {
      spdlog::set_level(spdlog::level::warn);
      known = true;
    }
    if (!known) spdlog::warn("PATCHCHAR_LOG='{}' not recognized", value);
  }
}

}  // namespace

int run_cli(int argc, char** argv) {
  ConfigureLogging();
  CLI::App app{"Patch-matcher performance characterization on synthetic scenes"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::string out_dir;
  bool create = false;
  bool dump_defaults = false;
  app.add_option("--config", config_path, "Experiment config (JSON)")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Master seed (overrides the config)");
  app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "Output directory (overrides the config)");
  app.add_flag("--create", create, "Create the output directory if missing");
  app.add_flag("--dump-defaults", dump_defaults,
               "Print the default config and exit");

  auto* gen = app.add_subcommand("generate", "Write scene layers and labels");
  auto* per = app.add_subcommand("perturb", "Render one perturbation level");
  double level = 0.0;
  bool occluder = false;
  std::string family;
  per->add_option("--level", level, "Perturbation level")->required();
  per->add_option("--family", family, "Override the configured family");
  per->add_flag("--occluder", occluder, "Include the dynamic objects");

  auto* chr = app.add_subcommand("characterize", "Criterion-manifold sweep");
  bool svg = false;
  chr->add_flag("--svg", svg, "Also write SVG size curves");

  auto* rc = app.add_subcommand("roc", "ROC curves for the configured metrics");
  std::string noise;
  std::optional<double> noise_param;
  rc->add_option("--noise", noise, "Noise kind (none, gaussian, salt_pepper, speckle)");
  rc->add_option("--noise-param", noise_param, "Noise strength");

  auto* det = app.add_subcommand("detect", "Block change detection");
  DetectInputs inputs;
  std::string labels;
  det->add_option("--reference", inputs.reference, "Reference image")
      ->required()
      ->check(CLI::ExistingFile);
  det->add_option("--current", inputs.current, "Current image")
      ->required()
      ->check(CLI::ExistingFile);
  det->add_option("--labels", labels, "Ground-truth labels.pgm")
      ->check(CLI::ExistingFile);
  det->add_option("--background", inputs.background,
                  "Background frames for threshold calibration")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (dump_defaults) {
      std::cout << dump_config(default_config());
      return 0;
    }
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return 2;
    }
    ExperimentConfig cfg =
        config_path.empty() ? default_config() : load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (jobs) cfg.jobs = *jobs;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (!family.empty()) cfg.perturbation.family = family;
    if (!noise.empty()) {
      cfg.roc.recipe.noise.kind = ParseNoiseKind(noise);
      cfg.roc.recipe.noise.param = default_noise_param(cfg.roc.recipe.noise.kind);
    }
    if (noise_param) cfg.roc.recipe.noise.param = *noise_param;
    cfg.Validate();
    const fs::path out = prepare_output_dir(cfg.output_dir, create);

    if (gen->parsed()) {
      cmd_generate(cfg, out);
    } else if (per->parsed()) {
      cmd_perturb(cfg, level, occluder, out);
    } else if (chr->parsed()) {
      cmd_characterize(cfg, out, svg);
    } else if (rc->parsed()) {
      cmd_roc(cfg, out);
    } else if (det->parsed()) {
      if (!labels.empty()) inputs.labels = labels;
      cmd_detect(cfg, inputs, out);
    }
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 3;
  }
  return 0;
}

}  // namespace patchchar::cli
