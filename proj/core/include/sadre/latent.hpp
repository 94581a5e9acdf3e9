#pragma once

#include <vector>

#include "sadre/saliency.hpp"
#include "sadre/transforms.hpp"

namespace sadre {

inline constexpr int kLatentLevels = 3;

// Image under the latent codec: a 3-level orthonormal Haar decomposition.
// The codec is an isometry, so it carries a Holder certificate with C = 1,
// alpha_h = 1.
struct Latent {
  Subbands bands;
  int source_width = 0;
  int source_height = 0;
};

struct HolderCert {
  double c = 1.0;
  double alpha_h = 1.0;
};

// Requires dimensions divisible by 2^3 = 8 (see pad_to_multiple).
Latent encode(const Plane& x);
Plane decode(const Latent& z);

// Flat views over the subband planes. Index 0 is LL; detail bands follow,
// finest level first, in (lh, hl, hh) order.
std::vector<Plane*> bands_of(Latent& z);
std::vector<const Plane*> bands_of(const Latent& z);

bool same_geometry(const Latent& a, const Latent& b);

// l2 norm over every coefficient (LL and details).
double latent_norm(const Latent& z);

// Masked seminorm: sqrt(sum (m_i * c_i)^2) with the mask nearest-neighbor
// resampled to each band. Weights in [0,1] make this a lower bound on the
// plain norm.
double latent_masked_norm(const Latent& z, const Mask& m);

Latent zeros_like(const Latent& z);

}  // namespace sadre
