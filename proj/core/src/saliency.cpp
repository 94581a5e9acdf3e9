#include "sadre/saliency.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "sadre/mathutil.hpp"
#include "sadre/pixelio.hpp"
#include "sadre/transforms.hpp"

namespace sadre {

double Mask::mean() const {
  if (v.empty()) return 0.0;
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double Mask::frac_above_half() const {
  if (v.empty()) return 0.0;
  size_t n = 0;
  for (double x : v)
    if (x > 0.5) ++n;
  return static_cast<double>(n) / static_cast<double>(v.size());
}

Plane mask_to_plane(const Mask& m, int w, int h) {
  if (m.width < 1 || m.height < 1 || w < 1 || h < 1)
    throw std::invalid_argument("mask_to_plane: empty mask or target");
  Plane out(w, h);
  for (int y = 0; y < h; ++y) {
    int sy = std::min(m.height - 1, y * m.height / h);
    for (int x = 0; x < w; ++x) {
      int sx = std::min(m.width - 1, x * m.width / w);
      out.at(x, y) = m.at(sx, sy);
    }
  }
  return out;
}

namespace {

struct TileScores {
  int tw = 0, th = 0;              // tile grid dimensions
  std::vector<double> mid_energy;  // sum of squared mid-band coefficients
  std::vector<double> ac_energy;   // sum of squared AC coefficients
  std::vector<double> mid_abs;     // sum of |mid-band| coefficients
};

// Tiles are 8x8 DCT blocks of the HL subband of a 1-level Haar
// decomposition — the same representation the spread-spectrum embedders
// write into, so mid-band (zig-zag 6..17) scores respond directly to
// embedding energy.
TileScores tile_scores(const Plane& xw) {
  Plane padded = pad_to_multiple(xw, 16);
  Subbands bands = haar_dwt2(padded, 1);
  const Plane& hl = bands.detail[0].hl;

  TileScores t;
  t.tw = hl.width / 8;
  t.th = hl.height / 8;
  t.mid_energy.resize(static_cast<size_t>(t.tw) * t.th);
  t.ac_energy.resize(t.mid_energy.size());
  t.mid_abs.resize(t.mid_energy.size());

  const auto& mid = midband_positions();
  for (int by = 0; by < t.th; ++by)
    for (int bx = 0; bx < t.tw; ++bx) {
      Block8 b{};
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) b[y * 8 + x] = hl.at(bx * 8 + x, by * 8 + y);
      Block8 c = dct2(b);
      double ac = 0;
      for (int k = 1; k < 64; ++k) {
        int pos = zigzag_order()[k];
        ac += c[pos] * c[pos];
      }
      double me = 0, ma = 0;
      for (int pos : mid) {
        me += c[pos] * c[pos];
        ma += std::abs(c[pos]);
      }
      size_t idx = static_cast<size_t>(by) * t.tw + bx;
      t.mid_energy[idx] = me;
      t.ac_energy[idx] = ac;
      t.mid_abs[idx] = ma;
    }
  return t;
}

Plane box_blur3(const Plane& p) {
  Plane out(p.width, p.height);
  for (int y = 0; y < p.height; ++y)
    for (int x = 0; x < p.width; ++x) {
      double s = 0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          int sx = std::clamp(x + dx, 0, p.width - 1);
          int sy = std::clamp(y + dy, 0, p.height - 1);
          s += p.at(sx, sy);
        }
      out.at(x, y) = s / 9.0;
    }
  return out;
}

double mean_mid_abs(const Plane& xw) {
  TileScores t = tile_scores(xw);
  double s = 0;
  for (double v : t.mid_abs) s += v;
  return s / (12.0 * static_cast<double>(t.mid_abs.size()));
}

}  // namespace

Mask estimate_saliency(const Plane& xw, const SaliencyConfig& cfg) {
  if (xw.width < 64 || xw.height < 64)
    throw std::invalid_argument("estimate_saliency: plane must be at least 64x64");

  TileScores t = tile_scores(xw);
  std::vector<double> r(t.mid_energy.size());
  for (size_t i = 0; i < r.size(); ++i)
    r[i] = t.mid_energy[i] / (t.ac_energy[i] + cfg.eps0);

  std::vector<double> sorted = r;
  std::sort(sorted.begin(), sorted.end());
  double lo = percentile_sorted(sorted, cfg.pct_lo);
  double hi = percentile_sorted(sorted, cfg.pct_hi);

  // Degenerate spread (e.g. a constant image, where every score is 0):
  // nothing stands out, so nothing is masked.
  Mask tile_mask(t.tw, t.th, 0.0);
  if (hi - lo > 1e-12) {
    for (size_t i = 0; i < r.size(); ++i) tile_mask.v[i] = smoothstep(lo, hi, r[i]);
  }

  // Mask geometry: one weight per coarsest-level latent coefficient
  // (an 8x8 pixel region); tiles cover 16x16 pixels, so upsample 2x.
  int mw = (xw.width + 7) / 8;
  int mh = (xw.height + 7) / 8;
  Plane up = mask_to_plane(tile_mask, mw, mh);
  Mask out(mw, mh);
  out.v = std::move(up.data);
  return out;
}

StrengthEstimate estimate_strength(const Plane& xw, const SaliencyConfig& cfg) {
  if (xw.width < 64 || xw.height < 64)
    throw std::invalid_argument("estimate_strength: plane must be at least 64x64");
  double raw = mean_mid_abs(xw);
  double blurred = mean_mid_abs(box_blur3(xw));
  return StrengthEstimate{std::max(0.0, raw - cfg.kappa * blurred)};
}

}  // namespace sadre
