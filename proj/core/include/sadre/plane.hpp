#pragma once

#include <cstddef>
#include <vector>

namespace sadre {

// Single-channel 2-D grid, row-major doubles. Decoded images carry
// intensities in [0,1]; transform code reuses the same container for signed
// coefficients and noise fields.
struct Plane {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  Plane() = default;
  Plane(int w, int h, double fill = 0.0)
      : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {}

  double& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
  double at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }

  size_t size() const { return data.size(); }
  bool same_geometry(const Plane& o) const {
    return width == o.width && height == o.height;
  }
};

// Three identically sized planes.
struct ImageRGB {
  Plane r, g, b;

  int width() const { return r.width; }
  int height() const { return r.height; }
};

// Clamp all values into [0,1].
Plane clamp01(Plane p);

// Top-left crop to w x h (must not exceed the source).
Plane crop(const Plane& p, int w, int h);

// Symmetric-reflect padding on the right/bottom up to the next multiple of m.
// Original content is preserved in the top-left; pads wider than the source
// fold periodically.
Plane pad_to_multiple(const Plane& p, int m);

// Bilinear resample to w x h (pixel-center aligned).
Plane resize_bilinear(const Plane& p, int w, int h);

// Center crop to w x h (must not exceed the source).
Plane center_crop(const Plane& p, int w, int h);

}  // namespace sadre
