#include "patchchar/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace patchchar {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void ConfigFail(const std::string& path, const std::string& msg) {
  Fail(ErrorKind::kConfig, "config " + path + ": " + msg);
}

void CheckKeys(const json& j, const std::string& path,
               std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) ConfigFail(path, "expected a table");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || a == key;
    if (!known) ConfigFail(path, "unknown key '" + key + "'");
  }
}

// Overwrites `out` when `key` is present.
template <typename T>
void Get(const json& j, const std::string& path, const char* key, T& out) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception& e) {
    ConfigFail(path + "." + key, e.what());
  }
}

std::string_view ResponseName(ResponseKind kind) {
  switch (kind) {
    case ResponseKind::kIdentity:
      return "identity";
    case ResponseKind::kGamma:
      return "gamma";
    case ResponseKind::kSCurve:
      return "s_curve";
  }
  return "identity";
}

ResponseKind ParseResponse(const std::string& name, const std::string& path) {
  for (auto k : {ResponseKind::kIdentity, ResponseKind::kGamma,
                 ResponseKind::kSCurve}) {
    if (ResponseName(k) == name) return k;
  }
  ConfigFail(path, "unknown response '" + name +
                       "' (identity, gamma, s_curve)");
}

std::string_view ProjectionName(ProjectionVariant v) {
  return v == ProjectionVariant::kLiteral ? "literal" : "distance_to_cone";
}

std::string_view PolicyName(ThresholdPolicy p) {
  return p == ThresholdPolicy::kBackgroundCalibrated ? "background_calibrated"
                                                     : "fixed";
}

// --- rects and textures ---

ordered_json RectJson(const Rect& r) {
  return ordered_json::array({r.row, r.col, r.height, r.width});
}

Rect ReadRect(const json& j, const std::string& path) {
  std::vector<Index> v;
  try {
    v = j.get<std::vector<Index>>();
  } catch (const json::exception& e) {
    ConfigFail(path, e.what());
  }
  if (v.size() != 4) ConfigFail(path, "rect is [row, col, height, width]");
  return {v[0], v[1], v[2], v[3]};
}

ordered_json TextureJson(const TextureSpec& t) {
  ordered_json j;
  j["kind"] = std::string(TextureKindName(t.kind));
  j["level"] = t.level;
  j["amplitude"] = t.amplitude;
  j["period"] = t.period;
  j["angle_deg"] = t.angle_deg;
  j["detail"] = t.detail;
  j["salt"] = t.salt;
  return j;
}

void ReadTexture(const json& j, const std::string& path, TextureSpec& t) {
  CheckKeys(j, path, {"kind", "level", "amplitude", "period", "angle_deg",
                      "detail", "salt"});
  if (j.contains("kind")) {
    std::string kind;
    Get(j, path, "kind", kind);
    try {
      t.kind = ParseTextureKind(kind);
    } catch (const Error& e) {
      ConfigFail(path + ".kind", e.what());
    }
  }
  Get(j, path, "level", t.level);
  Get(j, path, "amplitude", t.amplitude);
  Get(j, path, "period", t.period);
  Get(j, path, "angle_deg", t.angle_deg);
  Get(j, path, "detail", t.detail);
  Get(j, path, "salt", t.salt);
}

// --- scene ---

ordered_json SceneJson(const SceneSpec& s) {
  ordered_json j;
  j["width"] = s.width;
  j["height"] = s.height;
  j["background_level"] = s.background_level;
  j["seed"] = s.seed;
  j["depth_scale"] = s.depth_scale;
  j["depth"] = {{"near", s.depth.near}, {"far", s.depth.far}};
  ordered_json regions = ordered_json::array();
  for (const auto& r : s.regions) {
    ordered_json rj;
    rj["rect"] = RectJson(r.rect);
    if (r.mirror_of) {
      rj["mirror_of"] = *r.mirror_of;
    } else {
      rj["texture"] = TextureJson(r.texture);
    }
    regions.push_back(rj);
  }
  j["regions"] = regions;
  if (s.shadow) {
    j["shadow"] = {{"nx", s.shadow->nx},
                   {"ny", s.shadow->ny},
                   {"offset", s.shadow->offset},
                   {"penumbra", s.shadow->penumbra}};
  } else {
    j["shadow"] = nullptr;
  }
  if (s.occluder) {
    j["occluder"] = {{"rect", RectJson(s.occluder->rect)},
                     {"texture", TextureJson(s.occluder->texture)}};
  } else {
    j["occluder"] = nullptr;
  }
  return j;
}

void ReadScene(const json& j, SceneSpec& s) {
  const std::string path = "scene";
  CheckKeys(j, path, {"width", "height", "background_level", "seed",
                      "depth_scale", "depth", "regions", "shadow",
                      "occluder"});
  Get(j, path, "width", s.width);
  Get(j, path, "height", s.height);
  Get(j, path, "background_level", s.background_level);
  Get(j, path, "seed", s.seed);
  Get(j, path, "depth_scale", s.depth_scale);
  if (j.contains("depth")) {
    CheckKeys(j["depth"], path + ".depth", {"near", "far"});
    Get(j["depth"], path + ".depth", "near", s.depth.near);
    Get(j["depth"], path + ".depth", "far", s.depth.far);
  }
  if (j.contains("regions")) {
    const json& rs = j["regions"];
    if (!rs.is_array()) ConfigFail(path + ".regions", "expected a list");
    s.regions.clear();
    for (std::size_t i = 0; i < rs.size(); ++i) {
      const std::string rp = path + ".regions[" + std::to_string(i) + "]";
      CheckKeys(rs[i], rp, {"rect", "texture", "mirror_of"});
      if (!rs[i].contains("rect")) ConfigFail(rp, "missing rect");
      RegionSpec r;
      r.rect = ReadRect(rs[i]["rect"], rp + ".rect");
      if (rs[i].contains("mirror_of")) {
        int m = 0;
        Get(rs[i], rp, "mirror_of", m);
        r.mirror_of = m;
      }
      if (rs[i].contains("texture")) {
        ReadTexture(rs[i]["texture"], rp + ".texture", r.texture);
      }
      s.regions.push_back(r);
    }
  }
  if (j.contains("shadow")) {
    const json& sj = j["shadow"];
    if (sj.is_null()) {
      s.shadow.reset();
    } else {
      ShadowSpec sh = s.shadow.value_or(ShadowSpec{});
      CheckKeys(sj, path + ".shadow", {"nx", "ny", "offset", "penumbra"});
      Get(sj, path + ".shadow", "nx", sh.nx);
      Get(sj, path + ".shadow", "ny", sh.ny);
      Get(sj, path + ".shadow", "offset", sh.offset);
      Get(sj, path + ".shadow", "penumbra", sh.penumbra);
      s.shadow = sh;
    }
  }
  if (j.contains("occluder")) {
    const json& oj = j["occluder"];
    if (oj.is_null()) {
      s.occluder.reset();
    } else {
      OccluderSpec oc = s.occluder.value_or(OccluderSpec{});
      CheckKeys(oj, path + ".occluder", {"rect", "texture"});
      if (oj.contains("rect")) {
        oc.rect = ReadRect(oj["rect"], path + ".occluder.rect");
      }
      if (oj.contains("texture")) {
        ReadTexture(oj["texture"], path + ".occluder.texture", oc.texture);
      }
      s.occluder = oc;
    }
  }
}

// --- sensor ---

ordered_json SensorJson(const std::optional<SensorModel>& m) {
  if (!m) return nullptr;
  ordered_json j;
  j["gain"] = m->gain;
  j["offset"] = m->offset;
  j["exposure"] = m->exposure;
  j["response"] = std::string(ResponseName(m->response));
  j["response_param"] = m->response_param;
  j["shot_scale"] = m->shot_scale;
  j["thermal_sigma"] = m->thermal_sigma;
  j["quant_bits"] = m->quant_bits;
  return j;
}

void ReadSensor(const json& j, std::optional<SensorModel>& out) {
  if (j.is_null()) {
    out.reset();
    return;
  }
  const std::string path = "sensor";
  CheckKeys(j, path, {"gain", "offset", "exposure", "response",
                      "response_param", "shot_scale", "thermal_sigma",
                      "quant_bits"});
  SensorModel m = out.value_or(SensorModel{});
  Get(j, path, "gain", m.gain);
  Get(j, path, "offset", m.offset);
  Get(j, path, "exposure", m.exposure);
  if (j.contains("response")) {
    std::string name;
    Get(j, path, "response", name);
    m.response = ParseResponse(name, path + ".response");
  }
  Get(j, path, "response_param", m.response_param);
  Get(j, path, "shot_scale", m.shot_scale);
  Get(j, path, "thermal_sigma", m.thermal_sigma);
  Get(j, path, "quant_bits", m.quant_bits);
  out = m;
}

std::vector<std::string> ContextNames(const std::vector<SpatialContext>& cs) {
  std::vector<std::string> out;
  for (auto c : cs) out.emplace_back(ContextName(c));
  return out;
}

void CheckMetric(const std::string& name, const std::string& path) {
  if (has_matcher(name)) return;
  std::string known;
  for (const auto& n : matcher_names()) known += (known.empty() ? "" : ", ") + n;
  ConfigFail(path, "unknown metric '" + name + "' (registered: " + known + ")");
}

}  // namespace

double default_noise_param(NoiseChoice::Kind kind) {
  switch (kind) {
    case NoiseChoice::Kind::kNone:
      return 0.0;
    case NoiseChoice::Kind::kGaussian:
      return 0.02;
    case NoiseChoice::Kind::kSaltPepper:
      return 0.02;
    case NoiseChoice::Kind::kSpeckle:
      return 0.01;
  }
  return 0.0;
}

std::uint64_t ExperimentConfig::Seed() const {
  if (!seed) {
    Fail(ErrorKind::kConfig, "config: seed is mandatory (set \"seed\" or "
                             "pass --seed)");
  }
  return *seed;
}

std::vector<double> ExperimentConfig::Levels() const {
  if (!perturbation.levels.empty()) return perturbation.levels;
  return make_family(perturbation.family, perturbation.params).default_levels;
}

void ExperimentConfig::Validate() const {
  Seed();
  if (jobs < 1) Fail(ErrorKind::kConfig, "config: jobs must be >= 1");
  try {
    scene.Validate();
    if (sensor) sensor->Validate();
  } catch (const Error& e) {
    Fail(ErrorKind::kConfig, std::string("config: ") + e.what());
  }
  make_family(perturbation.family, perturbation.params);
  if (metrics.empty()) Fail(ErrorKind::kConfig, "config: metrics is empty");
  for (const auto& m : metrics) CheckMetric(m, "metrics");
  for (const auto& m : roc.metrics) CheckMetric(m, "roc.metrics");
  CheckMetric(detector.metric, "detector.metric");
  if (matcher.dct_pairs < 1) ConfigFail("matcher.dct_pairs", "must be >= 1");
  if (matcher.energy_bins < 1) {
    ConfigFail("matcher.energy_bins", "must be >= 1");
  }
  if (sweep.sizes.empty()) ConfigFail("sweep.sizes", "must not be empty");
  for (Index s : sweep.sizes) {
    if (s < 3 || s % 2 == 0) ConfigFail("sweep.sizes", "sizes must be odd >= 3");
  }
  if (sweep.samples_per_context < 1) {
    ConfigFail("sweep.samples_per_context", "must be >= 1");
  }
  if (sweep.contexts.empty()) ConfigFail("sweep.contexts", "must not be empty");
  if (roc.recipe.size < 3 || roc.recipe.size % 2 == 0) {
    ConfigFail("roc.size", "must be odd >= 3");
  }
  if (roc.recipe.changed < 1 || roc.recipe.unchanged < 1) {
    ConfigFail("roc", "changed and unchanged sample counts must be >= 1");
  }
  if (!(roc.recipe.gain_min > 0.0) || roc.recipe.gain_max < roc.recipe.gain_min) {
    ConfigFail("roc", "need 0 < gain_min <= gain_max");
  }
  try {
    detector.Validate();
  } catch (const Error& e) {
    Fail(ErrorKind::kConfig, std::string("config: ") + e.what());
  }
}

ExperimentConfig default_config() {
  ExperimentConfig c;
  c.seed = 1;
  SensorModel m;
  m.thermal_sigma = 2.0 / 255.0;
  m.quant_bits = 8;
  c.sensor = m;
  return c;
}

std::string dump_config(const ExperimentConfig& c) {
  ordered_json j;
  if (c.seed) {
    j["seed"] = *c.seed;
  } else {
    j["seed"] = nullptr;
  }
  j["output_dir"] = c.output_dir;
  j["jobs"] = c.jobs;
  j["scene"] = SceneJson(c.scene);
  const FamilyParams& fp = c.perturbation.params;
  j["perturbation"] = {
      {"family", c.perturbation.family},
      {"levels", c.perturbation.levels},
      {"params",
       {{"night_ambient", fp.night_ambient},
        {"light_center", {fp.light_center.row, fp.light_center.col}},
        {"light_radius", fp.light_radius},
        {"fog_direct_level", fp.fog_direct_level},
        {"fog_airlight", fp.fog_airlight}}}};
  j["sensor"] = SensorJson(c.sensor);
  j["metrics"] = c.metrics;
  j["matcher"] = {{"dct_pairs", c.matcher.dct_pairs},
                  {"energy_bins", c.matcher.energy_bins},
                  {"projection", std::string(ProjectionName(c.matcher.projection))}};
  j["sweep"] = {{"sizes", c.sweep.sizes},
                {"samples_per_context", c.sweep.samples_per_context},
                {"contexts", ContextNames(c.sweep.contexts)}};
  const RocRecipe& r = c.roc.recipe;
  j["roc"] = {{"metrics", c.roc.metrics},
              {"size", r.size},
              {"changed", r.changed},
              {"unchanged", r.unchanged},
              {"gain_min", r.gain_min},
              {"gain_max", r.gain_max},
              {"noise",
               {{"kind", std::string(NoiseKindName(r.noise.kind))},
                {"param", r.noise.param}}}};
  const DetectorConfig& d = c.detector;
  j["detector"] = {{"metric", d.metric},
                   {"block_size", d.block_size},
                   {"threshold", d.threshold},
                   {"policy", std::string(PolicyName(d.policy))},
                   {"kappa", d.kappa}};
  return j.dump(2) + "\n";
}

ExperimentConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    Fail(ErrorKind::kConfig, std::string("config parse error: ") + e.what());
  }
  CheckKeys(j, "root", {"seed", "output_dir", "jobs", "scene", "perturbation",
                        "sensor", "metrics", "matcher", "sweep", "roc",
                        "detector"});
  ExperimentConfig c = default_config();
  c.seed.reset();
  if (j.contains("seed") && !j["seed"].is_null()) {
    std::uint64_t seed = 0;
    Get(j, "root", "seed", seed);
    c.seed = seed;
  }
  Get(j, "root", "output_dir", c.output_dir);
  Get(j, "root", "jobs", c.jobs);
  if (j.contains("scene")) ReadScene(j["scene"], c.scene);

  if (j.contains("perturbation")) {
    const json& pj = j["perturbation"];
    const std::string path = "perturbation";
    CheckKeys(pj, path, {"family", "levels", "params"});
    Get(pj, path, "family", c.perturbation.family);
    Get(pj, path, "levels", c.perturbation.levels);
    if (pj.contains("params")) {
      const json& fj = pj["params"];
      FamilyParams& fp = c.perturbation.params;
      CheckKeys(fj, path + ".params",
                {"night_ambient", "light_center", "light_radius",
                 "fog_direct_level", "fog_airlight"});
      Get(fj, path + ".params", "night_ambient", fp.night_ambient);
      if (fj.contains("light_center")) {
        std::vector<Index> v;
        Get(fj, path + ".params", "light_center", v);
        if (v.size() != 2) ConfigFail(path + ".params.light_center", "[row, col]");
        fp.light_center = {v[0], v[1]};
      }
      Get(fj, path + ".params", "light_radius", fp.light_radius);
      Get(fj, path + ".params", "fog_direct_level", fp.fog_direct_level);
      Get(fj, path + ".params", "fog_airlight", fp.fog_airlight);
    }
  }
  if (j.contains("sensor")) ReadSensor(j["sensor"], c.sensor);
  Get(j, "root", "metrics", c.metrics);

  if (j.contains("matcher")) {
    const json& mj = j["matcher"];
    CheckKeys(mj, "matcher", {"dct_pairs", "energy_bins", "projection"});
    Get(mj, "matcher", "dct_pairs", c.matcher.dct_pairs);
    Get(mj, "matcher", "energy_bins", c.matcher.energy_bins);
    if (mj.contains("projection")) {
      std::string name;
      Get(mj, "matcher", "projection", name);
      if (name == "literal") {
        c.matcher.projection = ProjectionVariant::kLiteral;
      } else if (name == "distance_to_cone") {
        c.matcher.projection = ProjectionVariant::kDistanceToCone;
      } else {
        ConfigFail("matcher.projection",
                   "expected distance_to_cone or literal, got '" + name + "'");
      }
    }
  }
  if (j.contains("sweep")) {
    const json& sj = j["sweep"];
    CheckKeys(sj, "sweep", {"sizes", "samples_per_context", "contexts"});
    Get(sj, "sweep", "sizes", c.sweep.sizes);
    Get(sj, "sweep", "samples_per_context", c.sweep.samples_per_context);
    if (sj.contains("contexts")) {
      std::vector<std::string> names;
      Get(sj, "sweep", "contexts", names);
      c.sweep.contexts.clear();
      for (const auto& n : names) {
        try {
          c.sweep.contexts.push_back(ParseContext(n));
        } catch (const Error& e) {
          ConfigFail("sweep.contexts", e.what());
        }
      }
    }
  }
  if (j.contains("roc")) {
    const json& rj = j["roc"];
    RocRecipe& r = c.roc.recipe;
    CheckKeys(rj, "roc", {"metrics", "size", "changed", "unchanged",
                          "gain_min", "gain_max", "noise"});
    Get(rj, "roc", "metrics", c.roc.metrics);
    Get(rj, "roc", "size", r.size);
    Get(rj, "roc", "changed", r.changed);
    Get(rj, "roc", "unchanged", r.unchanged);
    Get(rj, "roc", "gain_min", r.gain_min);
    Get(rj, "roc", "gain_max", r.gain_max);
    if (rj.contains("noise")) {
      const json& nj = rj["noise"];
      CheckKeys(nj, "roc.noise", {"kind", "param"});
      if (nj.contains("kind")) {
        std::string kind;
        Get(nj, "roc.noise", "kind", kind);
        try {
          r.noise.kind = ParseNoiseKind(kind);
        } catch (const Error& e) {
          ConfigFail("roc.noise.kind", e.what());
        }
        r.noise.param = default_noise_param(r.noise.kind);
      }
      Get(nj, "roc.noise", "param", r.noise.param);
    }
  }
  if (j.contains("detector")) {
    const json& dj = j["detector"];
    DetectorConfig& d = c.detector;
    CheckKeys(dj, "detector",
              {"metric", "block_size", "threshold", "policy", "kappa"});
    Get(dj, "detector", "metric", d.metric);
    Get(dj, "detector", "block_size", d.block_size);
    Get(dj, "detector", "threshold", d.threshold);
    Get(dj, "detector", "kappa", d.kappa);
    if (dj.contains("policy")) {
      std::string p;
      Get(dj, "detector", "policy", p);
      if (p == "fixed") {
        d.policy = ThresholdPolicy::kFixed;
      } else if (p == "background_calibrated") {
        d.policy = ThresholdPolicy::kBackgroundCalibrated;
      } else {
        ConfigFail("detector.policy",
                   "expected fixed or background_calibrated, got '" + p + "'");
      }
    }
  }
  c.detector.matcher = c.matcher;
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace patchchar
