#include "sadre/latent.hpp"

#include <cmath>
#include <stdexcept>

namespace sadre {

Latent encode(const Plane& x) {
  int div = 1 << kLatentLevels;
  if (x.width % div != 0 || x.height % div != 0)
    throw std::invalid_argument("encode: dimensions must be multiples of 8; pad_to_multiple first");
  Latent z;
  z.bands = haar_dwt2(x, kLatentLevels);
  z.source_width = x.width;
  z.source_height = x.height;
  return z;
}

Plane decode(const Latent& z) {
  Plane p = haar_idwt2(z.bands);
  if (p.width != z.source_width || p.height != z.source_height)
    throw std::invalid_argument("decode: recorded source geometry does not match bands");
  return p;
}

std::vector<Plane*> bands_of(Latent& z) {
  std::vector<Plane*> out;
  out.push_back(&z.bands.ll);
  for (auto& d : z.bands.detail) {
    out.push_back(&d.lh);
    out.push_back(&d.hl);
    out.push_back(&d.hh);
  }
  return out;
}

std::vector<const Plane*> bands_of(const Latent& z) {
  std::vector<const Plane*> out;
  out.push_back(&z.bands.ll);
  for (const auto& d : z.bands.detail) {
    out.push_back(&d.lh);
    out.push_back(&d.hl);
    out.push_back(&d.hh);
  }
  return out;
}

bool same_geometry(const Latent& a, const Latent& b) {
  auto ba = bands_of(a), bb = bands_of(b);
  if (ba.size() != bb.size()) return false;
  for (size_t i = 0; i < ba.size(); ++i)
    if (!ba[i]->same_geometry(*bb[i])) return false;
  return true;
}

double latent_norm(const Latent& z) {
  double acc = 0;
  for (const Plane* p : bands_of(z))
    for (double v : p->data) acc += v * v;
  return std::sqrt(acc);
}

double latent_masked_norm(const Latent& z, const Mask& m) {
  double acc = 0;
  for (const Plane* p : bands_of(z)) {
    Plane w = mask_to_plane(m, p->width, p->height);
    for (size_t i = 0; i < p->size(); ++i) {
      double v = w.data[i] * p->data[i];
      acc += v * v;
    }
  }
  return std::sqrt(acc);
}

Latent zeros_like(const Latent& z) {
  Latent out = z;
  for (Plane* p : bands_of(out)) std::fill(p->data.begin(), p->data.end(), 0.0);
  return out;
}

}  // namespace sadre
