#pragma once

#include <array>
#include <vector>

#include "sadre/plane.hpp"

namespace sadre {

// 8x8 coefficient block, row-major.
using Block8 = std::array<double, 64>;

// Orthonormal type-II 2-D DCT and its inverse (type-III). A constant block of
// value c transforms to DC = 8c with zero AC.
Block8 dct2(const Block8& b);
Block8 idct2(const Block8& c);

// Standard 8x8 zig-zag scan: zigzag_order()[k] is the row-major position of
// the k-th coefficient along the scan.
const std::array<int, 64>& zigzag_order();

// Zig-zag positions 6..17 — the mid-band shared by the embedders and the
// saliency estimator.
const std::array<int, 12>& midband_positions();

// Multi-level 2-D Haar decomposition. detail[0] is the finest level (level 1);
// ll is the coarsest approximation. Total coefficient count equals the input
// pixel count.
struct Subbands {
  struct Detail {
    Plane lh;  // lowpass rows, highpass columns (vertical structure)
    Plane hl;  // highpass rows, lowpass columns (horizontal structure)
    Plane hh;  // diagonal
  };

  int levels = 0;
  Plane ll;
  std::vector<Detail> detail;

  size_t coeff_count() const;
};

// Orthonormal analysis/synthesis with filters (1,1)/sqrt(2) and
// (1,-1)/sqrt(2). Perfect reconstruction; preserves l2 energy. Input
// dimensions must be divisible by 2^levels (see pad_to_multiple).
Subbands haar_dwt2(const Plane& p, int levels);
Plane haar_idwt2(const Subbands& s);

// Small dense matrix, row-major.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c, double fill = 0.0)
      : rows(r), cols(c), a(static_cast<size_t>(r) * c, fill) {}

  double& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
};

Mat matmul(const Mat& x, const Mat& y);
Mat transpose(const Mat& x);

// Thin SVD a = u * diag(s) * vt with s non-negative and non-increasing.
// One-sided Jacobi, capped at 100 sweeps; throws on non-convergence.
// Intended for matrices up to 64x64.
struct Svd {
  Mat u;                  // m x n
  std::vector<double> s;  // n
  Mat vt;                 // n x n
};
Svd svd_small(const Mat& a);

}  // namespace sadre
