#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "sadre/latent.hpp"
#include "sadre/perturb.hpp"

namespace sadre {

// Linear schedule: beta_t from beta_min to beta_max over t = 1..T,
// alpha_t = 1 - beta_t, alpha_bar_t the running product. Entries are indexed
// by t-1.
struct Schedule {
  int t_count = 0;
  std::vector<double> alpha;
  std::vector<double> alpha_bar;

  double alpha_at(int t) const { return alpha[t - 1]; }
  double alpha_bar_at(int t) const { return alpha_bar[t - 1]; }
  double noise_level_at(int t) const;  // sqrt(1 - alpha_bar_t)
};

Schedule make_schedule(int t_count = 50, double beta_min = 1e-4, double beta_max = 0.2);

// Noise predictor for the reverse phase. Implementations must be stateless
// across calls so one instance can serve concurrent jobs.
class Denoiser {
 public:
  virtual ~Denoiser() = default;
  virtual Latent predict(const Latent& zt, int t) const = 0;
};

// Analytic stand-in for a trained predictor: estimates z0 by soft-thresholding
// detail coefficients of z_t / sqrt(abar_t) at lambda_s * sqrt(1-abar_t) /
// sqrt(abar_t) (LL passes through), then converts to a noise estimate.
class ShrinkDenoiser : public Denoiser {
 public:
  explicit ShrinkDenoiser(Schedule sched, double lambda_s = 1.5)
      : sched_(std::move(sched)), lambda_s_(lambda_s) {}

  Latent predict(const Latent& zt, int t) const override;

 private:
  Schedule sched_;
  double lambda_s_;
};

// Replays recorded per-step noise; the exact inverse of a recorded forward
// chain. Test and calibration aid.
class OracleDenoiser : public Denoiser {
 public:
  void record(int t, Latent eps) { eps_by_step_[t] = std::move(eps); }
  Latent predict(const Latent& zt, int t) const override;

 private:
  std::map<int, Latent> eps_by_step_;
};

// z_t = sqrt(alpha_t) z_{t-1} + sqrt(1 - alpha_t) eps, coefficient-wise.
Latent forward_step(const Latent& z_prev, int t, const Schedule& sched, const Latent& eps);

// z_{t-1} = (z_t - sqrt(1 - alpha_t) eps_theta(z_t, t)) / sqrt(alpha_t):
// the deterministic single-step inversion (no posterior sampling).
Latent reverse_step(const Latent& zt, int t, const Schedule& sched, const Denoiser& den);

// Smallest t with sqrt(1 - alpha_bar_t) >= sigma, capped at T; 0 when sigma
// is below the first step's level (run no reverse steps).
int start_step_for_sigma(const Schedule& sched, double sigma);

// Reverse the chain from start_step_for_sigma(sigma) down to 1, then blend
// M .* reversed + (1-M) .* z_tilde per band and decode (clamped to [0,1]).
// Coefficients where the mask is 0 revert to their pre-injection values,
// since injection was gated by the same mask.
Plane reconstruct(const Latent& z_tilde, const Mask& m, double sigma,
                  const Schedule& sched, const Denoiser& den);

struct AttackConfig {
  uint64_t seed = 0;
  NoiseFamily family = NoiseFamily::Laplace;
  double sigma = 0.10;
  bool adaptive_sigma = false;
  SigmaSearchConfig search;
  SaliencyConfig saliency;
  double lambda_s = 1.5;
  int steps = 50;
  double beta_min = 1e-4;
  double beta_max = 0.2;
};

struct AttackTrace {
  double tau = 0.0;
  double sigma = 0.0;
  int t_star = 0;
  double mask_mean = 0.0;
  double mask_frac_above_half = 0.0;
  double elapsed_ms = 0.0;

  std::string to_json() const;
};

struct AttackResult {
  Plane image;
  AttackTrace trace;
};

// The full pipeline: encode -> estimate saliency and strength -> pick sigma
// (fixed or adaptive) -> masked noise injection -> reverse diffusion with the
// shrink denoiser -> saliency-blended decode. Deterministic given cfg.seed.
AttackResult sadre_attack(const Plane& xw, const AttackConfig& cfg);

}  // namespace sadre
