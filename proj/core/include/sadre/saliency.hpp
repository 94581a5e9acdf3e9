#pragma once

#include <vector>

#include "sadre/plane.hpp"

namespace sadre {

// Per-region weights in [0,1] marking where the watermark is believed to
// live; geometry matches the coarsest latent level (one weight per 8x8 pixel
// region).
struct Mask {
  int width = 0;
  int height = 0;
  std::vector<double> v;

  Mask() = default;
  Mask(int w, int h, double fill = 0.0)
      : width(w), height(h), v(static_cast<size_t>(w) * h, fill) {}

  double& at(int x, int y) { return v[static_cast<size_t>(y) * width + x]; }
  double at(int x, int y) const { return v[static_cast<size_t>(y) * width + x]; }

  double mean() const;
  double frac_above_half() const;
};

struct SaliencyConfig {
  double pct_lo = 50.0;  // smoothstep lower edge, percentile of tile scores
  double pct_hi = 95.0;  // smoothstep upper edge
  double eps0 = 1e-8;    // energy-ratio denominator guard
  double kappa = 1.0;    // blur-baseline weight in the strength estimate
};

// Blind saliency: per 8x8 DCT block of the HL subband of a 1-level Haar
// decomposition, score r = mid-band energy / (total AC energy + eps0); the
// mask is a smoothstep of r between the pct_lo and pct_hi percentiles of all
// tile scores, upsampled to the mask geometry. A constant image yields an
// all-zero mask. Deterministic.
Mask estimate_saliency(const Plane& xw, const SaliencyConfig& cfg = {});

struct StrengthEstimate {
  double tau = 0.0;
};

// tau = max(0, B_mid(xw) - kappa * B_mid(blur3x3(xw))) where B_mid is the
// mean absolute mid-band coefficient over the same tiling as the mask.
StrengthEstimate estimate_strength(const Plane& xw, const SaliencyConfig& cfg = {});

// Nearest-neighbor resample of mask weights onto a w x h grid (used to gate
// each subband, and to export heat maps).
Plane mask_to_plane(const Mask& m, int w, int h);

}  // namespace sadre
