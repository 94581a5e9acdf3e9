#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sadre/latent.hpp"
#include "sadre/plane.hpp"

namespace sadre {

enum class NoiseFamily { Laplace, Cauchy, Poisson };

NoiseFamily noise_family_from_name(const std::string& name);
std::string noise_family_name(NoiseFamily f);

// sigma is the target scale: Laplace uses b = sigma/sqrt(2) (variance
// sigma^2), Cauchy uses gamma = sigma, Poisson draws P(lambda=10) centered
// and rescaled so the variance is sigma^2.
struct NoiseSpec {
  NoiseFamily family = NoiseFamily::Laplace;
  double sigma = 0.1;
  uint64_t seed = 0;
};

inline constexpr double kPoissonBaseRate = 10.0;

// i.i.d. field of w*h samples; deterministic in (w, h, spec, stream) and
// independent across stream ids.
Plane sample_noise(int w, int h, const NoiseSpec& spec, uint64_t stream = 0);

// Gaussian field with standard deviation sigma (inverse-CDF transform);
// the forward-diffusion driver.
Plane sample_gaussian(int w, int h, double sigma, uint64_t seed, uint64_t stream = 0);

// z + M .* eta on the detail bands (LL untouched); coefficients where the
// resampled mask is exactly 0 are bit-identical to the input. Each detail
// band draws its own stream from spec.seed.
Latent inject(const Latent& z, const Mask& m, const NoiseSpec& spec);

struct SigmaSearchConfig {
  std::vector<double> grid{0.05, 0.075, 0.10, 0.125, 0.15};
  double lambda_w = 0.1;
  enum class Mode { Oracle, Blind };
  Mode mode = Mode::Blind;
};

// Grid search for the noise level: J(sigma) = Detectability + lambda_w *
// Distortion, evaluated by running `pipeline` (the full attack at that sigma)
// once per grid point. Oracle mode scores Detectability = |BRA - 0.5| * 2 via
// `detector` (required); blind mode uses the strength ratio
// tau(attacked)/max(tau(xw), eps) clamped to [0,1]. Distortion is
// DSSIM(xw, attacked). Ties (within 1e-12) go to the smaller sigma.
double select_sigma(const Plane& xw, const SigmaSearchConfig& cfg,
                    const std::function<Plane(double)>& pipeline,
                    const std::function<double(const Plane&)>* detector = nullptr);

}  // namespace sadre
