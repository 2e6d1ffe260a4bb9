#pragma once

#include <array>
#include <cstdint>
#include <variant>

#include "patchchar/image.hpp"

namespace patchchar {

/// Homogeneous participating medium: Koschmieder attenuation plus a constant
/// airlight.
struct FogParams {
  double beta = 0.0;      // extinction per meter
  double airlight = 0.8;  // medium radiance in [0,1]

  void Validate() const;
};

enum class ResponseKind { kIdentity, kGamma, kSCurve };

struct SensorModel {
  double gain = 1.0;
  double offset = 0.0;
  double exposure = 1.0;
  ResponseKind response = ResponseKind::kIdentity;
  double response_param = 1.0;  // gamma exponent or s-curve steepness
  double shot_scale = 0.0;      // shot-noise variance per unit signal
  double thermal_sigma = 0.0;
  int quant_bits = 8;

  void Validate() const;
  // Response curve on a [0,1]-clamped signal.
  double Response(double x) const;
};

struct GaussianNoise {
  double sigma = 0.0;
};
struct SaltPepperNoise {
  double density = 0.0;
};
struct SpeckleNoise {
  double variance = 0.0;
};

struct NoiseSpec {
  std::variant<GaussianNoise, SaltPepperNoise, SpeckleNoise> kind;
  std::uint64_t seed = 0;

  void Validate() const;
};

GrayImage gain_offset(const GrayImage& img, double a, double b);
GrayImage gamma_map(const GrayImage& img, double gamma);

/// 256 output codes; entry i is the 8-bit output for 8-bit input i.
using Lut = std::array<double, 256>;
GrayImage monotone_lut(const GrayImage& img, const Lut& lut);

/// I' = I e^(-beta d) + A (1 - e^(-beta d)), d = depth * depth_scale.
GrayImage fog(const GrayImage& img, const GrayImage& depth, double depth_scale,
              const FogParams& params);

GrayImage sensor(const GrayImage& img, const SensorModel& model,
                 std::uint64_t seed);

GrayImage add_gaussian(const GrayImage& img, double sigma, std::uint64_t seed);
GrayImage add_salt_pepper(const GrayImage& img, double density,
                          std::uint64_t seed);
GrayImage add_speckle(const GrayImage& img, double variance,
                      std::uint64_t seed);
GrayImage add_noise(const GrayImage& img, const NoiseSpec& spec);

}  // namespace patchchar
