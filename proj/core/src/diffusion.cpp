#include "sadre/diffusion.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "sadre/pixelio.hpp"

namespace sadre {

double Schedule::noise_level_at(int t) const { return std::sqrt(1.0 - alpha_bar_at(t)); }

Schedule make_schedule(int t_count, double beta_min, double beta_max) {
  if (t_count < 1) throw std::invalid_argument("make_schedule: need at least one step");
  if (!(beta_min > 0.0 && beta_min < beta_max && beta_max < 1.0))
    throw std::invalid_argument("make_schedule: need 0 < beta_min < beta_max < 1");
  Schedule s;
  s.t_count = t_count;
  s.alpha.resize(t_count);
  s.alpha_bar.resize(t_count);
  double abar = 1.0;
  for (int i = 0; i < t_count; ++i) {
    double beta = t_count == 1
                      ? beta_min
                      : beta_min + (beta_max - beta_min) * i / static_cast<double>(t_count - 1);
    s.alpha[i] = 1.0 - beta;
    abar *= s.alpha[i];
    s.alpha_bar[i] = abar;
  }
  return s;
}

namespace {

void check_step(int t, const Schedule& sched) {
  if (t < 1 || t > sched.t_count) throw std::invalid_argument("diffusion step out of range");
}

}  // namespace

Latent forward_step(const Latent& z_prev, int t, const Schedule& sched, const Latent& eps) {
  check_step(t, sched);
  if (!same_geometry(z_prev, eps))
    throw std::invalid_argument("forward_step: noise geometry mismatch");
  double sa = std::sqrt(sched.alpha_at(t));
  double sb = std::sqrt(1.0 - sched.alpha_at(t));
  Latent out = z_prev;
  auto ob = bands_of(out);
  auto eb = bands_of(eps);
  for (size_t k = 0; k < ob.size(); ++k)
    for (size_t i = 0; i < ob[k]->size(); ++i)
      ob[k]->data[i] = sa * ob[k]->data[i] + sb * eb[k]->data[i];
  return out;
}

Latent reverse_step(const Latent& zt, int t, const Schedule& sched, const Denoiser& den) {
  check_step(t, sched);
  Latent eps_hat = den.predict(zt, t);
  if (!same_geometry(zt, eps_hat))
    throw std::invalid_argument("reverse_step: denoiser output geometry mismatch");
  double sa = std::sqrt(sched.alpha_at(t));
  double sb = std::sqrt(1.0 - sched.alpha_at(t));
  Latent out = zt;
  auto ob = bands_of(out);
  auto eb = bands_of(eps_hat);
  for (size_t k = 0; k < ob.size(); ++k)
    for (size_t i = 0; i < ob[k]->size(); ++i)
      ob[k]->data[i] = (ob[k]->data[i] - sb * eb[k]->data[i]) / sa;
  return out;
}

Latent ShrinkDenoiser::predict(const Latent& zt, int t) const {
  if (t < 1 || t > sched_.t_count) throw std::invalid_argument("ShrinkDenoiser: step out of range");
  double abar = sched_.alpha_bar_at(t);
  double s_abar = std::sqrt(abar);
  double s_rem = std::sqrt(1.0 - abar);
  double threshold = lambda_s_ * s_rem / s_abar;

  // z0_hat = shrink(z_t / sqrt(abar)) with LL passed through, then
  // eps_hat = (z_t - sqrt(abar) z0_hat) / sqrt(1 - abar).
  Latent out = zt;
  auto bands = bands_of(out);
  for (size_t k = 0; k < bands.size(); ++k) {
    for (double& v : bands[k]->data) {
      double scaled = v / s_abar;
      double z0;
      if (k == 0) {
        z0 = scaled;
      } else {
        double mag = std::abs(scaled) - threshold;
        z0 = mag > 0 ? (scaled > 0 ? mag : -mag) : 0.0;
      }
      v = (v - s_abar * z0) / s_rem;
    }
  }
  return out;
}

Latent OracleDenoiser::predict(const Latent& zt, int t) const {
  auto it = eps_by_step_.find(t);
  if (it == eps_by_step_.end())
    throw std::invalid_argument("OracleDenoiser: no noise recorded for step " + std::to_string(t));
  if (!same_geometry(zt, it->second))
    throw std::invalid_argument("OracleDenoiser: recorded noise geometry mismatch");
  return it->second;
}

int start_step_for_sigma(const Schedule& sched, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("start_step_for_sigma: sigma must be > 0");
  // Below the first step's level there is no matching step: run none.
  if (sigma < sched.noise_level_at(1)) return 0;
  for (int t = 1; t <= sched.t_count; ++t)
    if (sched.noise_level_at(t) >= sigma) return t;
  return sched.t_count;
}

Plane reconstruct(const Latent& z_tilde, const Mask& m, double sigma,
                  const Schedule& sched, const Denoiser& den) {
  int t_star = start_step_for_sigma(sched, sigma);
  Latent z = z_tilde;
  for (int t = t_star; t >= 1; --t) z = reverse_step(z, t, sched, den);

  // Saliency blend: masked coefficients take the reversed chain, the rest
  // revert to z_tilde (identical to the pre-injection latent wherever the
  // same mask gated injection to zero).
  Latent blended = z_tilde;
  auto bb = bands_of(blended);
  auto rb = bands_of(z);
  for (size_t k = 0; k < bb.size(); ++k) {
    Plane w = mask_to_plane(m, bb[k]->width, bb[k]->height);
    for (size_t i = 0; i < bb[k]->size(); ++i) {
      double wi = w.data[i];
      if (wi != 0.0)
        bb[k]->data[i] = wi * rb[k]->data[i] + (1.0 - wi) * bb[k]->data[i];
    }
  }
  return clamp01(decode(blended));
}

std::string AttackTrace::to_json() const {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "{\"tau\": %.6g, \"sigma\": %.6g, \"t_star\": %d, \"mask_mean\": %.6g, "
                "\"mask_frac_above_half\": %.6g, \"elapsed_ms\": %.3f}",
                tau, sigma, t_star, mask_mean, mask_frac_above_half, elapsed_ms);
  return buf;
}

AttackResult sadre_attack(const Plane& xw, const AttackConfig& cfg) {
  if (xw.width < 64 || xw.height < 64)
    throw std::invalid_argument("sadre_attack: plane must be at least 64x64");
  auto t0 = std::chrono::steady_clock::now();

  Plane padded = pad_to_multiple(xw, 1 << kLatentLevels);
  Latent z = encode(padded);
  Mask m = estimate_saliency(xw, cfg.saliency);
  StrengthEstimate tau = estimate_strength(xw, cfg.saliency);
  Schedule sched = make_schedule(cfg.steps, cfg.beta_min, cfg.beta_max);
  ShrinkDenoiser den(sched, cfg.lambda_s);

  auto run_fixed = [&](double sigma) {
    NoiseSpec spec{cfg.family, sigma, cfg.seed};
    Latent z_tilde = inject(z, m, spec);
    Plane out = reconstruct(z_tilde, m, sigma, sched, den);
    return crop(out, xw.width, xw.height);
  };

  double sigma = cfg.sigma;
  if (cfg.adaptive_sigma) {
    sigma = select_sigma(xw, cfg.search, run_fixed, nullptr);
  }

  AttackResult result;
  result.image = run_fixed(sigma);
  result.trace.tau = tau.tau;
  result.trace.sigma = sigma;
  result.trace.t_star = start_step_for_sigma(sched, sigma);
  result.trace.mask_mean = m.mean();
  result.trace.mask_frac_above_half = m.frac_above_half();
  result.trace.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace sadre
