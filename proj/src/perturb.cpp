#include "patchchar/perturb.hpp"

#include "patchchar/netpbm.hpp"
#include "patchchar/rng.hpp"

namespace patchchar {

namespace {

// Disjoint RNG stream ids per operator (Normal draws consume 2*id, 2*id+1).
constexpr std::uint64_t kStreamGaussian = 1;
constexpr std::uint64_t kStreamSpeckle = 2;
constexpr std::uint64_t kStreamShot = 3;
constexpr std::uint64_t kStreamThermal = 4;
constexpr std::uint64_t kStreamSaltPepper = 20;

template <typename Fn>
GrayImage MapPixels(const GrayImage& img, Fn&& fn) {
  PixelArray<double> out(img.height(), img.width());
  const double* src = img.pixels().data();
  for (Index i = 0; i < img.size(); ++i) {
    out.data()[i] = fn(src[i], static_cast<std::uint64_t>(i));
  }
  return GrayImage(std::move(out));
}

}  // namespace

void FogParams::Validate() const {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    Fail(ErrorKind::kParameter, "fog beta must be finite and >= 0");
  }
  if (!(airlight >= 0.0 && airlight <= 1.0)) {
    Fail(ErrorKind::kParameter, "fog airlight must lie in [0,1]");
  }
}

void SensorModel::Validate() const {
  if (!(exposure > 0.0)) {
    Fail(ErrorKind::kParameter, "sensor exposure must be > 0");
  }
  if (response == ResponseKind::kGamma && !(response_param > 0.0)) {
    Fail(ErrorKind::kParameter, "gamma response requires gamma > 0");
  }
  if (response == ResponseKind::kSCurve && !(response_param > 0.0)) {
    Fail(ErrorKind::kParameter, "s-curve response requires alpha > 0");
  }
  if (!(shot_scale >= 0.0) || !(thermal_sigma >= 0.0)) {
    Fail(ErrorKind::kParameter, "sensor noise parameters must be >= 0");
  }
  if (quant_bits < 1 || quant_bits > 16) {
    Fail(ErrorKind::kParameter, "quant_bits must lie in 1..16");
  }
}

double SensorModel::Response(double x) const {
  x = std::clamp(x, 0.0, 1.0);
  switch (response) {
    case ResponseKind::kIdentity:
      return x;
    case ResponseKind::kGamma:
      return std::pow(x, response_param);
    case ResponseKind::kSCurve: {
      // Logistic centered at 0.5, renormalized to map [0,1] onto [0,1].
      const auto logistic = [&](double v) {
        return 1.0 / (1.0 + std::exp(-response_param * (v - 0.5)));
      };
      const double lo = logistic(0.0);
      const double hi = logistic(1.0);
      return (logistic(x) - lo) / (hi - lo);
    }
  }
  return x;
}

void NoiseSpec::Validate() const {
  std::visit(
      [](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, GaussianNoise>) {
          if (!(k.sigma >= 0.0)) Fail(ErrorKind::kParameter, "sigma < 0");
        } else if constexpr (std::is_same_v<T, SaltPepperNoise>) {
          if (!(k.density >= 0.0 && k.density <= 1.0)) {
            Fail(ErrorKind::kParameter, "salt/pepper density outside [0,1]");
          }
        } else {
          if (!(k.variance >= 0.0)) {
            Fail(ErrorKind::kParameter, "speckle variance < 0");
          }
        }
      },
      kind);
}

GrayImage gain_offset(const GrayImage& img, double a, double b) {
  return MapPixels(img, [&](double v, std::uint64_t) { return a * v + b; });
}

GrayImage gamma_map(const GrayImage& img, double gamma) {
  if (!(gamma > 0.0)) {
    Fail(ErrorKind::kParameter, "gamma must be > 0");
  }
  return MapPixels(img,
                   [&](double v, std::uint64_t) { return std::pow(v, gamma); });
}

GrayImage monotone_lut(const GrayImage& img, const Lut& lut) {
  for (std::size_t i = 1; i < lut.size(); ++i) {
    if (lut[i] < lut[i - 1]) {
      Fail(ErrorKind::kParameter,
           "lut decreases at entry " + std::to_string(i));
    }
  }
  return MapPixels(img, [&](double v, std::uint64_t) {
    return lut[QuantizeByte(v)] / 255.0;
  });
}

GrayImage fog(const GrayImage& img, const GrayImage& depth, double depth_scale,
              const FogParams& params) {
  params.Validate();
  if (!img.SameShape(depth)) {
    Fail(ErrorKind::kDimensionMismatch,
         "fog depth field does not match image dimensions");
  }
  if (params.beta == 0.0) return img;
  const double* d = depth.pixels().data();
  return MapPixels(img, [&](double v, std::uint64_t i) {
    const double transmission = std::exp(-params.beta * d[i] * depth_scale);
    return v * transmission + params.airlight * (1.0 - transmission);
  });
}

GrayImage sensor(const GrayImage& img, const SensorModel& model,
                 std::uint64_t seed) {
  model.Validate();
  const CounterRng rng(seed);
  const double levels = std::ldexp(1.0, model.quant_bits) - 1.0;
  return MapPixels(img, [&](double v, std::uint64_t i) {
    double e = model.gain * (v * model.exposure) + model.offset;
    if (model.shot_scale > 0.0) {
      e += std::sqrt(model.shot_scale * std::max(e, 0.0)) *
           rng.Normal(kStreamShot, i);
    }
    if (model.thermal_sigma > 0.0) {
      e += model.thermal_sigma * rng.Normal(kStreamThermal, i);
    }
    const double z = model.Response(e);
    return std::round(z * levels) / levels;
  });
}

GrayImage add_gaussian(const GrayImage& img, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) Fail(ErrorKind::kParameter, "sigma must be >= 0");
  if (sigma == 0.0) return img;
  const CounterRng rng(seed);
  return MapPixels(img, [&](double v, std::uint64_t i) {
    return v + sigma * rng.Normal(kStreamGaussian, i);
  });
}

GrayImage add_salt_pepper(const GrayImage& img, double density,
                          std::uint64_t seed) {
  if (!(density >= 0.0 && density <= 1.0)) {
    Fail(ErrorKind::kParameter, "salt/pepper density must lie in [0,1]");
  }
  if (density == 0.0) return img;
  const CounterRng rng(seed);
  return MapPixels(img, [&](double v, std::uint64_t i) {
    if (rng.Uniform(kStreamSaltPepper, i) >= density) return v;
    return rng.Uniform(kStreamSaltPepper + 1, i) < 0.5 ? 0.0 : 1.0;
  });
}

GrayImage add_speckle(const GrayImage& img, double variance,
                      std::uint64_t seed) {
  if (!(variance >= 0.0)) Fail(ErrorKind::kParameter, "variance must be >= 0");
  if (variance == 0.0) return img;
  const CounterRng rng(seed);
  const double sd = std::sqrt(variance);
  return MapPixels(img, [&](double v, std::uint64_t i) {
    return v * (1.0 + sd * rng.Normal(kStreamSpeckle, i));
  });
}

GrayImage add_noise(const GrayImage& img, const NoiseSpec& spec) {
  spec.Validate();
  return std::visit(
      [&](const auto& k) -> GrayImage {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, GaussianNoise>) {
          return add_gaussian(img, k.sigma, spec.seed);
        } else if constexpr (std::is_same_v<T, SaltPepperNoise>) {
          return add_salt_pepper(img, k.density, spec.seed);
        } else {
          return add_speckle(img, k.variance, spec.seed);
        }
      },
      spec.kind);
}

}  // namespace patchchar
