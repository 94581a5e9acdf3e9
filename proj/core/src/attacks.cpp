#include "sadre/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sadre/pixelio.hpp"
#include "sadre/transforms.hpp"

namespace sadre {

const std::array<int, 64>& jpeg_luminance_table() {
  // Annex K luminance table.
  static const std::array<int, 64> table = {
      16, 11, 10, 16, 24,  40,  51,  61,   //
      12, 12, 14, 19, 26,  58,  60,  55,   //
      14, 13, 16, 24, 40,  57,  69,  56,   //
      14, 17, 22, 29, 51,  87,  80,  62,   //
      18, 22, 37, 56, 68,  109, 103, 77,   //
      24, 35, 55, 64, 81,  104, 113, 92,   //
      49, 64, 78, 87, 103, 121, 120, 101,  //
      72, 92, 95, 98, 112, 100, 103, 99};
  return table;
}

std::array<double, 64> jpeg_scaled_table(int quality) {
  if (quality < 1 || quality > 100)
    throw std::invalid_argument("jpeg quality must be in 1..100");
  // libjpeg quality convention.
  int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  std::array<double, 64> q{};
  for (int i = 0; i < 64; ++i) {
    int entry = (jpeg_luminance_table()[i] * scale + 50) / 100;
    q[i] = static_cast<double>(std::clamp(entry, 1, 255));
  }
  return q;
}

Plane jpeg_attack(const Plane& x, int quality) {
  if (x.width % 8 != 0 || x.height % 8 != 0)
    throw std::invalid_argument("jpeg_attack: dimensions must be multiples of 8; pad_to_multiple first");
  std::array<double, 64> q = jpeg_scaled_table(quality);

  Plane out(x.width, x.height);
  for (int by = 0; by < x.height / 8; ++by)
    for (int bx = 0; bx < x.width / 8; ++bx) {
      Block8 b{};
      for (int y = 0; y < 8; ++y)
        for (int xx = 0; xx < 8; ++xx)
          b[y * 8 + xx] = x.at(bx * 8 + xx, by * 8 + y) * 255.0 - 128.0;
      Block8 c = dct2(b);
      for (int i = 0; i < 64; ++i) c[i] = std::round(c[i] / q[i]) * q[i];
      Block8 r = idct2(c);
      for (int y = 0; y < 8; ++y)
        for (int xx = 0; xx < 8; ++xx)
          out.at(bx * 8 + xx, by * 8 + y) = std::clamp((r[y * 8 + xx] + 128.0) / 255.0, 0.0, 1.0);
    }
  return out;
}

Plane regen_attack(const Plane& xw, double sigma, NoiseFamily family,
                   uint64_t seed, const Schedule& sched, const Denoiser& den) {
  if (!(sigma > 0.0)) throw std::invalid_argument("regen_attack: sigma must be > 0");
  Plane padded = pad_to_multiple(xw, 1 << kLatentLevels);
  Latent z = encode(padded);
  Mask all_ones((xw.width + 7) / 8, (xw.height + 7) / 8, 1.0);
  NoiseSpec spec{family, sigma, seed};
  Latent z_tilde = inject(z, all_ones, spec);
  Plane out = reconstruct(z_tilde, all_ones, sigma, sched, den);
  return crop(out, xw.width, xw.height);
}

}  // namespace sadre
