#pragma once

#include <cstdint>

#include "sadre/diffusion.hpp"
#include "sadre/plane.hpp"

namespace sadre {

// Transform-domain JPEG simulation on the luminance plane: per 8x8 block,
// level-shift to [0,255], orthonormal DCT, quantize with the standard
// luminance table scaled by the libjpeg quality convention
// (scale = q < 50 ? 5000/q : 200 - 2q; entry' = clamp((entry*scale+50)/100,
// 1, 255)), dequantize, inverse DCT, clamp. Quality in 1..100; dimensions
// must be multiples of 8 (see pad_to_multiple).
Plane jpeg_attack(const Plane& x, int quality);

const std::array<int, 64>& jpeg_luminance_table();

// The luminance table after quality scaling (entries clamped to 1..255).
std::array<double, 64> jpeg_scaled_table(int quality);

// Unmasked ablation of the sadre pipeline: inject with an all-ones mask and
// reconstruct with the same all-ones mask (global regeneration, no saliency
// blending).
Plane regen_attack(const Plane& xw, double sigma, NoiseFamily family,
                   uint64_t seed, const Schedule& sched, const Denoiser& den);

}  // namespace sadre
