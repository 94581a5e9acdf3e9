#pragma once

#include "sadre/latent.hpp"
#include "sadre/plane.hpp"
#include "sadre/saliency.hpp"

namespace sadre {

// 10 log10(1 / MSE) with peak 1.0; +infinity for identical inputs.
double psnr(const Plane& a, const Plane& b);

// Mean local SSIM, 11x11 Gaussian window (std 1.5), K1=0.01, K2=0.03, L=1,
// valid windows only. Requires min side >= 11.
double ssim(const Plane& a, const Plane& b);

// (1 - ssim) / 2.
double dssim(const Plane& a, const Plane& b);

// Exact 1-D Wasserstein distance between the intensity distributions:
// sort both pixel multisets, W_p = (mean |a_(i) - b_(i)|^p)^(1/p); p in {1,2}.
double wasserstein(const Plane& a, const Plane& b, int p = 1);

struct FidelityWeights {
  double alpha = 0.85;
  double beta = 0.75;
};

// Composite perceptual distance D = alpha * wp + beta * ds.
double composite_d(double wp, double ds, const FidelityWeights& w = {});

// Detection trade-off: eps2 >= Phi(Phi^{-1}(1 - eps1) - delta / sigma).
double type2_bound(double eps1, double delta, double sigma);

struct BoundInputs {
  double delta = 0.0;    // distribution gap
  double delta_m = 0.0;  // masked-region latent gap
  double sigma = 0.0;
  double c = 1.0;
  double alpha_h = 1.0;
  double eps1 = 0.05;
  double k_sigma = 0.0;  // calibrated slope of the noise-induced term
};

// C * delta_m^alpha_h + k_sigma * sigma.
double error_bound_rhs(const BoundInputs& in);

// delta_m = || encode(xw) - encode(x) ||_M (masked latent seminorm).
// Planes must be multiples of 8 per side.
double masked_latent_gap(const Plane& x, const Plane& xw, const Mask& m);

struct TradeoffReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double delta_m = 0.0;
  bool holds = false;
};

// Disruption/fidelity trade-off check:
//   lhs = alpha * W_p(x, xw) + beta * DSSIM(x, xw)
//   rhs = delta_m^alpha_h / sigma + k_sigma * sigma
TradeoffReport tradeoff_check(const Plane& x, const Plane& xw, const Mask& m,
                              double sigma, const FidelityWeights& w,
                              const HolderCert& cert, double k_sigma);

}  // namespace sadre
