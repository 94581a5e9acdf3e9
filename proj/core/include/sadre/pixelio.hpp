#pragma once

#include <string>

#include "sadre/plane.hpp"

namespace sadre {

// Load PGM (P5), PPM (P6) or 8-bit PNG; intensities scaled to [0,1].
// Grayscale sources replicate the channel. Throws std::runtime_error with a
// message naming the format on unreadable or unsupported input.
ImageRGB load_image(const std::string& path);

// Write a Plane as PGM (.pgm) or grayscale PNG (.png). Values are clamped to
// [0,1] then quantized with round-half-up to a byte.
void save_image(const Plane& p, const std::string& path);

// Write an ImageRGB as PPM (.ppm) or RGB PNG (.png); same quantization rule.
void save_image(const ImageRGB& img, const std::string& path);

// BT.601 luminance: Y = 0.299 R + 0.587 G + 0.114 B, clamped to [0,1].
Plane to_luma(const ImageRGB& img);

// Add (newY - oldY) to each channel, then clamp. The luminance of the result
// equals newY wherever no channel clamped.
ImageRGB replace_luma(const ImageRGB& img, const Plane& new_y);

// Quantization used by all writers.
inline unsigned char quantize_byte(double v) {
  if (v < 0.0) v = 0.0;
  if (v > 1.0) v = 1.0;
  int q = static_cast<int>(v * 255.0 + 0.5);
  return static_cast<unsigned char>(q > 255 ? 255 : q);
}

}  // namespace sadre
