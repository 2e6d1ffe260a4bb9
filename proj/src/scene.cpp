#include "patchchar/scene.hpp"

#include <numbers>

#include "patchchar/rng.hpp"

namespace patchchar {

namespace {

constexpr std::uint64_t kStreamTexture = 100;
constexpr std::uint64_t kStreamDetail = 101;

constexpr std::array<std::string_view, 5> kTextureNames = {
    "constant", "sine_grating", "checkerboard", "smooth_gradient", "noise",
};

SpatialContext TextureLabel(TextureKind kind) {
  switch (kind) {
    case TextureKind::kConstant:
    case TextureKind::kSmoothGradient:
      return SpatialContext::kHomogeneous;
    case TextureKind::kSineGrating:
      return SpatialContext::kEdge;
    case TextureKind::kCheckerboard:
      return SpatialContext::kCorner;
    case TextureKind::kNoise:
      return SpatialContext::kDiffuse;
  }
  return SpatialContext::kHomogeneous;
}

void CheckRect(const Rect& rect, Index height, Index width, const char* what) {
  if (!rect.FitsIn(height, width)) {
    Fail(ErrorKind::kParameter,
         std::string(what) + " rect (" + std::to_string(rect.row) + "," +
             std::to_string(rect.col) + "," + std::to_string(rect.height) +
             "," + std::to_string(rect.width) + ") leaves the " +
             std::to_string(height) + "x" + std::to_string(width) + " canvas");
  }
}

double Unit(const CounterRng& rng, std::uint64_t stream, Index row,
            Index col) {
  const auto key = (static_cast<std::uint64_t>(row) << 32U) ^
                   static_cast<std::uint64_t>(col);
  return rng.Uniform(stream, key);
}

}  // namespace

std::string_view TextureKindName(TextureKind kind) {
  return kTextureNames[static_cast<std::size_t>(kind)];
}

TextureKind ParseTextureKind(std::string_view name) {
  for (std::size_t i = 0; i < kTextureNames.size(); ++i) {
    if (kTextureNames[i] == name) return static_cast<TextureKind>(i);
  }
  Fail(ErrorKind::kConfig, "unknown texture kind '" + std::string(name) + "'");
}

double texture_value(const TextureSpec& texture, Index local_row,
                     Index local_col, Index height, Index width,
                     std::uint64_t seed) {
  const CounterRng rng(seed ^ CounterRng::Mix(texture.salt));
  const double theta = texture.angle_deg * std::numbers::pi / 180.0;
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  const auto x = static_cast<double>(local_col);
  const auto y = static_cast<double>(local_row);
  double v = texture.level;
  switch (texture.kind) {
    case TextureKind::kConstant:
      break;
    case TextureKind::kSineGrating:
      v += texture.amplitude *
           std::sin(2.0 * std::numbers::pi * (x * ct + y * st) /
                    texture.period);
      break;
    case TextureKind::kCheckerboard: {
      const auto cell = static_cast<long>(std::floor(x / texture.period)) +
                        static_cast<long>(std::floor(y / texture.period));
      v += (cell % 2 == 0) ? texture.amplitude : -texture.amplitude;
      break;
    }
    case TextureKind::kSmoothGradient: {
      const double cx = 0.5 * static_cast<double>(width - 1);
      const double cy = 0.5 * static_cast<double>(height - 1);
      const double extent = std::abs(ct) * cx + std::abs(st) * cy;
      const double t = (x - cx) * ct + (y - cy) * st;
      if (extent > 0.0) v += texture.amplitude * t / extent;
      break;
    }
    case TextureKind::kNoise:
      v += texture.amplitude *
           (2.0 * Unit(rng, kStreamTexture, local_row, local_col) - 1.0);
      break;
  }
  if (texture.detail != 0.0) {
    v += texture.detail *
         (2.0 * Unit(rng, kStreamDetail, local_row, local_col) - 1.0);
  }
  return std::clamp(v, 0.0, 1.0);
}

void SceneSpec::Validate() const {
  if (width <= 0 || height <= 0) {
    Fail(ErrorKind::kParameter, "scene dimensions must be positive");
  }
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const auto& region = regions[i];
    CheckRect(region.rect, height, width, "region");
    if (region.mirror_of) {
      const int src = *region.mirror_of;
      if (src < 0 || src >= static_cast<int>(regions.size()) ||
          src == static_cast<int>(i) || regions[src].mirror_of) {
        Fail(ErrorKind::kParameter,
             "region " + std::to_string(i) + " mirrors invalid region " +
                 std::to_string(src));
      }
    }
    if ((region.texture.kind == TextureKind::kSineGrating ||
         region.texture.kind == TextureKind::kCheckerboard) &&
        !(region.texture.period > 0.0)) {
      Fail(ErrorKind::kParameter, "texture period must be > 0");
    }
  }
  if (shadow) {
    if (shadow->penumbra < 1) {
      Fail(ErrorKind::kParameter, "penumbra width must be >= 1");
    }
    if (std::hypot(shadow->nx, shadow->ny) == 0.0) {
      Fail(ErrorKind::kParameter, "shadow line normal must be non-zero");
    }
  }
  if (occluder) CheckRect(occluder->rect, height, width, "occluder");
  if (!(depth_scale > 0.0)) {
    Fail(ErrorKind::kParameter, "depth_scale must be > 0");
  }
}

void TemporalState::Validate() const {
  if (!std::isfinite(direct_level) || direct_level < 0.0) {
    Fail(ErrorKind::kParameter, "direct_level must be finite and >= 0");
  }
  if (!std::isfinite(ambient_level) || ambient_level < 0.0) {
    Fail(ErrorKind::kParameter, "ambient_level must be finite and >= 0");
  }
  if (local_light && !(local_light->radius > 0.0)) {
    Fail(ErrorKind::kParameter, "local light radius must be > 0");
  }
  if (fog) fog->Validate();
}

SceneSpec default_scene_spec() {
  SceneSpec spec;
  spec.width = 256;
  spec.height = 256;
  spec.background_level = 0.25;
  spec.seed = 20240501;

  auto region = [](TextureKind kind, Rect rect, double level, double amplitude,
                   double period, double detail, std::uint64_t salt) {
    RegionSpec r;
    r.texture = {kind, level, amplitude, period, 0.0, detail, salt};
    r.rect = rect;
    return r;
  };
  // Upper band: Diffuse | Edge | Corner.
  spec.regions.push_back(
      region(TextureKind::kNoise, {0, 0, 100, 86}, 0.3, 0.095, 1.0, 0.0, 1));
  spec.regions.push_back(region(TextureKind::kSineGrating, {0, 86, 100, 85},
                                0.3, 0.15, 8.0, 0.0, 2));
  spec.regions.push_back(region(TextureKind::kCheckerboard, {0, 171, 100, 85},
                                0.3, 0.1, 10.0, 0.06, 3));
  // Middle band: shaded Homogeneous surface | background-reflecting mirror.
  auto homogeneous = region(TextureKind::kSmoothGradient, {100, 0, 80, 128},
                            0.25, 0.2, 1.0, 0.0, 4);
  homogeneous.texture.angle_deg = 0.0;
  spec.regions.push_back(homogeneous);
  auto mirror = region(TextureKind::kConstant, {100, 128, 80, 128}, 0.3, 0.0,
                       1.0, 0.0, 5);
  mirror.mirror_of = 0;
  spec.regions.push_back(mirror);
  // Ground strip; the cast shadow falls here.
  spec.regions.push_back(region(TextureKind::kSmoothGradient,
                                {180, 0, 76, 256}, 0.25, 0.2, 1.0, 0.0, 6));

  spec.shadow = ShadowSpec{0.0, 1.0, 200.0, 24};

  OccluderSpec occ;
  occ.rect = {110, 24, 56, 64};
  occ.texture = {TextureKind::kNoise, 0.35, 0.1, 1.0, 0.0, 0.0, 77};
  spec.occluder = occ;

  spec.depth = {0.2, 1.0};
  spec.depth_scale = 100.0;
  return spec;
}

Scene generate_scene(const SceneSpec& spec, std::uint64_t seed) {
  spec.Validate();
  const Index h = spec.height;
  const Index w = spec.width;

  PixelArray<double> base =
      PixelArray<double>::Constant(h, w, spec.background_level);
  LabelMap labels =
      LabelMap::Constant(h, w, static_cast<std::uint8_t>(
                                   SpatialContext::kHomogeneous));
  for (const auto& region : spec.regions) {
    const Rect& rect = region.rect;
    const RegionSpec& source =
        region.mirror_of ? spec.regions[*region.mirror_of] : region;
    const auto label = region.mirror_of ? SpatialContext::kSpecular
                                        : TextureLabel(region.texture.kind);
    for (Index r = 0; r < rect.height; ++r) {
      for (Index c = 0; c < rect.width; ++c) {
        double v;
        if (region.mirror_of) {
          const Index sr = r % source.rect.height;
          const Index sc =
              source.rect.width - 1 - (c % source.rect.width);
          v = texture_value(source.texture, sr, sc, source.rect.height,
                            source.rect.width, seed);
        } else {
          v = texture_value(region.texture, r, c, rect.height, rect.width,
                            seed);
        }
        base(rect.row + r, rect.col + c) = v;
        labels(rect.row + r, rect.col + c) = static_cast<std::uint8_t>(label);
      }
    }
  }

  PixelArray<double> direct = PixelArray<double>::Ones(h, w);
  if (spec.shadow) {
    const ShadowSpec& s = *spec.shadow;
    const double norm = std::hypot(s.nx, s.ny);
    const double width_px = static_cast<double>(s.penumbra);
    for (Index r = 0; r < h; ++r) {
      for (Index c = 0; c < w; ++c) {
        const double d = (s.nx * static_cast<double>(c) +
                          s.ny * static_cast<double>(r)) /
                             norm -
                         s.offset;
        if (d < 0.0) continue;
        if (d < width_px) {
          direct(r, c) = 1.0 - (d + 0.5) / width_px;
          labels(r, c) =
              static_cast<std::uint8_t>(SpatialContext::kShadowBoundary);
        } else {
          direct(r, c) = 0.0;
          labels(r, c) = static_cast<std::uint8_t>(SpatialContext::kShadow);
        }
      }
    }
  }
  if (spec.occluder) {
    const Rect& rect = spec.occluder->rect;
    labels.block(rect.row, rect.col, rect.height, rect.width)
        .setConstant(static_cast<std::uint8_t>(SpatialContext::kOccluded));
  }

  PixelArray<double> depth(h, w);
  for (Index r = 0; r < h; ++r) {
    const double t = h > 1 ? static_cast<double>(r) / static_cast<double>(h - 1)
                           : 0.0;
    depth.row(r).setConstant(spec.depth.far +
                             t * (spec.depth.near - spec.depth.far));
  }

  Scene scene;
  scene.base = GrayImage(std::move(base));
  scene.illum_direct = GrayImage(std::move(direct));
  scene.illum_ambient = GrayImage(h, w, 1.0);
  scene.depth = GrayImage(std::move(depth));
  scene.depth_scale = spec.depth_scale;
  scene.labels = std::move(labels);
  scene.occluder = spec.occluder;
  scene.seed = seed;
  return scene;
}

GrayImage apply_occlusion(const GrayImage& img, const Rect& rect,
                          const TextureSpec& fg, std::uint64_t seed) {
  CheckRect(rect, img.height(), img.width(), "occlusion");
  if (rect.Empty()) return img;
  PixelArray<double> out = img.pixels();
  for (Index r = 0; r < rect.height; ++r) {
    for (Index c = 0; c < rect.width; ++c) {
      out(rect.row + r, rect.col + c) =
          texture_value(fg, r, c, rect.height, rect.width, seed);
    }
  }
  return GrayImage(std::move(out));
}

PixelArray<double> render_radiance(const Scene& scene,
                                   const TemporalState& state) {
  state.Validate();
  const GrayImage albedo =
      (state.dynamic_objects && scene.occluder)
          ? apply_occlusion(scene.base, scene.occluder->rect,
                            scene.occluder->texture, scene.seed)
          : scene.base;
  PixelArray<double> gain =
      state.ambient_level * scene.illum_ambient.pixels() +
      state.direct_level * scene.illum_direct.pixels();
  if (state.local_light) {
    const LocalLight& light = *state.local_light;
    for (Index r = 0; r < gain.rows(); ++r) {
      for (Index c = 0; c < gain.cols(); ++c) {
        const double dist =
            std::hypot(static_cast<double>(r - light.center.row),
                       static_cast<double>(c - light.center.col));
        gain(r, c) +=
            light.intensity * std::max(0.0, 1.0 - dist / light.radius);
      }
    }
  }
  return albedo.pixels() * gain;
}

GrayImage render_state(const Scene& scene, const TemporalState& state,
                       const SensorModel* sensor_model, std::uint64_t seed) {
  GrayImage img(render_radiance(scene, state));
  if (state.fog) img = fog(img, scene.depth, scene.depth_scale, *state.fog);
  if (sensor_model) img = sensor(img, *sensor_model, seed);
  return img;
}

std::vector<std::uint8_t> label_codes(const LabelMap& labels) {
  std::vector<std::uint8_t> codes(static_cast<std::size_t>(labels.size()));
  for (Index i = 0; i < labels.size(); ++i) {
    codes[static_cast<std::size_t>(i)] =
        ContextLabelCode(static_cast<SpatialContext>(labels.data()[i]));
  }
  return codes;
}

}  // namespace patchchar
