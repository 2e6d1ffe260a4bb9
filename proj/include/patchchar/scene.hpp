#pragma once

#include <optional>
#include <vector>

#include "patchchar/image.hpp"
#include "patchchar/perturb.hpp"

namespace patchchar {

struct Rect {
  Index row = 0;
  Index col = 0;
  Index height = 0;
  Index width = 0;

  bool Contains(Index r, Index c) const {
    return r >= row && r < row + height && c >= col && c < col + width;
  }
  bool Empty() const { return height == 0 || width == 0; }
  bool FitsIn(Index img_height, Index img_width) const {
    return row >= 0 && col >= 0 && height >= 0 && width >= 0 &&
           row + height <= img_height && col + width <= img_width;
  }
};

enum class TextureKind {
  kConstant,
  kSineGrating,
  kCheckerboard,
  kSmoothGradient,
  kNoise,
};

std::string_view TextureKindName(TextureKind kind);
TextureKind ParseTextureKind(std::string_view name);

struct TextureSpec {
  TextureKind kind = TextureKind::kConstant;
  double level = 0.3;       // mean intensity
  double amplitude = 0.1;   // peak deviation from level
  double period = 8.0;      // pixels (grating period, checker cell size)
  double angle_deg = 0.0;   // grating / gradient direction
  double detail = 0.0;      // amplitude of added per-pixel micro-texture
  std::uint64_t salt = 0;   // decorrelates noise between textures
};

/// Evaluates a texture at local coordinates of a height x width rect.
double texture_value(const TextureSpec& texture, Index local_row,
                     Index local_col, Index height, Index width,
                     std::uint64_t seed);

struct RegionSpec {
  TextureSpec texture;
  Rect rect;
  // When set, the region is a mirror reflecting the texture of region
  // `mirror_of` (flipped left-right), labeled Specular.
  std::optional<int> mirror_of;
};

/// Half-plane shadow. Signed distance of a pixel center is
/// nx*col + ny*row - offset with (nx, ny) normalized; [0, penumbra) is the
/// penumbra band and >= penumbra the umbra.
struct ShadowSpec {
  double nx = 0.0;
  double ny = 1.0;
  double offset = 0.0;
  int penumbra = 1;
};

struct OccluderSpec {
  Rect rect;
  TextureSpec texture;
};

struct DepthSpec {
  // Linear ramp over rows: top row `far`, bottom row `near` (units of
  // depth_scale meters), values in [0,1].
  double near = 0.2;
  double far = 1.0;
};

struct SceneSpec {
  Index width = 256;
  Index height = 256;
  double background_level = 0.3;
  std::vector<RegionSpec> regions;
  std::optional<ShadowSpec> shadow;
  std::optional<OccluderSpec> occluder;
  DepthSpec depth;
  double depth_scale = 100.0;
  std::uint64_t seed = 0;

  void Validate() const;
};

/// 256x256 layout with one region per primary context, a penumbra band on
/// the ground strip and a foreground occluder.
SceneSpec default_scene_spec();

using LabelMap = PixelArray<std::uint8_t>;

struct Scene {
  GrayImage base;           // background albedo, no dynamic objects
  GrayImage illum_direct;   // direct-light gain, 0 in umbra
  GrayImage illum_ambient;  // ambient gain, 1 everywhere
  GrayImage depth;          // [0,1], meters = depth * depth_scale
  double depth_scale = 1.0;
  LabelMap labels;          // SpatialContext ordinal per pixel
  std::optional<OccluderSpec> occluder;
  std::uint64_t seed = 0;

  SpatialContext Label(Index row, Index col) const {
    return static_cast<SpatialContext>(labels(row, col));
  }
  Index width() const { return base.width(); }
  Index height() const { return base.height(); }
};

struct LocalLight {
  PixelCoord center;
  double radius = 1.0;
  double intensity = 0.0;
};

struct TemporalState {
  double direct_level = 0.0;
  double ambient_level = 1.0;
  std::optional<LocalLight> local_light;
  std::optional<FogParams> fog;
  bool dynamic_objects = true;

  void Validate() const;
};

Scene generate_scene(const SceneSpec& spec, std::uint64_t seed);
inline Scene generate_scene(const SceneSpec& spec) {
  return generate_scene(spec, spec.seed);
}

/// Lit radiance before fog, sensor and clamping.
PixelArray<double> render_radiance(const Scene& scene,
                                   const TemporalState& state);

/// base' = base (+ occluder when dynamic objects are on), then
/// base' * (ambient_level * illum_ambient + direct_level * illum_direct +
/// local) -> fog -> sensor -> clamp.
GrayImage render_state(const Scene& scene, const TemporalState& state,
                       const SensorModel* sensor_model, std::uint64_t seed);

/// Replaces `rect` by a sample of `fg`; pixels outside are untouched.
GrayImage apply_occlusion(const GrayImage& img, const Rect& rect,
                          const TextureSpec& fg, std::uint64_t seed);

/// Label map as P5 codes (Homogeneous 10 ... Occluded 80).
std::vector<std::uint8_t> label_codes(const LabelMap& labels);

}  // namespace patchchar
