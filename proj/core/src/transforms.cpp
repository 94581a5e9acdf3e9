#include "sadre/transforms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sadre {

namespace {

// Orthonormal DCT-II basis: C[k][n] = a_k cos(pi (2n+1) k / 16),
// a_0 = sqrt(1/8), a_k = sqrt(2/8). Rows are orthonormal.
struct DctBasis {
  double c[8][8];
  DctBasis() {
    for (int k = 0; k < 8; ++k) {
      double ak = k == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
      for (int n = 0; n < 8; ++n)
        c[k][n] = ak * std::cos(std::numbers::pi * (2 * n + 1) * k / 16.0);
    }
  }
};

const DctBasis& basis() {
  static const DctBasis b;
  return b;
}

}  // namespace

Block8 dct2(const Block8& b) {
  const auto& C = basis().c;
  // rows: tmp = x * C^T
  double tmp[8][8];
  for (int r = 0; r < 8; ++r)
    for (int k = 0; k < 8; ++k) {
      double s = 0;
      for (int n = 0; n < 8; ++n) s += b[r * 8 + n] * C[k][n];
      tmp[r][k] = s;
    }
  // cols: out = C * tmp
  Block8 out{};
  for (int k = 0; k < 8; ++k)
    for (int c = 0; c < 8; ++c) {
      double s = 0;
      for (int r = 0; r < 8; ++r) s += C[k][r] * tmp[r][c];
      out[k * 8 + c] = s;
    }
  return out;
}

Block8 idct2(const Block8& coeffs) {
  const auto& C = basis().c;
  double tmp[8][8];
  for (int r = 0; r < 8; ++r)
    for (int n = 0; n < 8; ++n) {
      double s = 0;
      for (int k = 0; k < 8; ++k) s += coeffs[r * 8 + k] * C[k][n];
      tmp[r][n] = s;
    }
  Block8 out{};
  for (int n = 0; n < 8; ++n)
    for (int c = 0; c < 8; ++c) {
      double s = 0;
      for (int k = 0; k < 8; ++k) s += C[k][n] * tmp[k][c];
      out[n * 8 + c] = s;
    }
  return out;
}

const std::array<int, 64>& zigzag_order() {
  static const std::array<int, 64> order = [] {
    std::array<int, 64> o{};
    int idx = 0;
    for (int s = 0; s <= 14; ++s) {
      if (s % 2 == 1) {
        // odd diagonal: top-right to bottom-left
        for (int r = std::max(0, s - 7); r <= std::min(7, s); ++r) o[idx++] = r * 8 + (s - r);
      } else {
        for (int r = std::min(7, s); r >= std::max(0, s - 7); --r) o[idx++] = r * 8 + (s - r);
      }
    }
    return o;
  }();
  return order;
}

const std::array<int, 12>& midband_positions() {
  static const std::array<int, 12> mid = [] {
    std::array<int, 12> m{};
    for (int i = 0; i < 12; ++i) m[i] = zigzag_order()[6 + i];
    return m;
  }();
  return mid;
}

// ---------------------------------------------------------------------------
// Haar DWT: each level is a 2x2 orthonormal butterfly
//   a = (p00 + p01 + p10 + p11) / 2     (LL)
//   h = (p00 - p01 + p10 - p11) / 2     (HL, horizontal differences)
//   v = (p00 + p01 - p10 - p11) / 2     (LH, vertical differences)
//   d = (p00 - p01 - p10 + p11) / 2     (HH)

size_t Subbands::coeff_count() const {
  size_t n = ll.size();
  for (const auto& d : detail) n += d.lh.size() + d.hl.size() + d.hh.size();
  return n;
}

Subbands haar_dwt2(const Plane& p, int levels) {
  if (levels < 1) throw std::invalid_argument("haar_dwt2: levels must be >= 1");
  int div = 1 << levels;
  if (p.width % div != 0 || p.height % div != 0)
    throw std::invalid_argument(
        "haar_dwt2: dimensions must be divisible by 2^levels; pad_to_multiple first");

  Subbands out;
  out.levels = levels;
  out.detail.resize(levels);
  Plane cur = p;
  for (int lev = 0; lev < levels; ++lev) {
    int hw = cur.width / 2, hh = cur.height / 2;
    Plane a(hw, hh), h(hw, hh), v(hw, hh), d(hw, hh);
    for (int y = 0; y < hh; ++y)
      for (int x = 0; x < hw; ++x) {
        double p00 = cur.at(2 * x, 2 * y);
        double p01 = cur.at(2 * x + 1, 2 * y);
        double p10 = cur.at(2 * x, 2 * y + 1);
        double p11 = cur.at(2 * x + 1, 2 * y + 1);
        a.at(x, y) = (p00 + p01 + p10 + p11) * 0.5;
        h.at(x, y) = (p00 - p01 + p10 - p11) * 0.5;
        v.at(x, y) = (p00 + p01 - p10 - p11) * 0.5;
        d.at(x, y) = (p00 - p01 - p10 + p11) * 0.5;
      }
    out.detail[lev].hl = std::move(h);
    out.detail[lev].lh = std::move(v);
    out.detail[lev].hh = std::move(d);
    cur = std::move(a);
  }
  out.ll = std::move(cur);
  return out;
}

Plane haar_idwt2(const Subbands& s) {
  if (s.levels < 1 || static_cast<int>(s.detail.size()) != s.levels)
    throw std::invalid_argument("haar_idwt2: malformed subbands");
  Plane cur = s.ll;
  for (int lev = s.levels - 1; lev >= 0; --lev) {
    const auto& d = s.detail[lev];
    if (!d.hl.same_geometry(cur) || !d.lh.same_geometry(cur) || !d.hh.same_geometry(cur))
      throw std::invalid_argument("haar_idwt2: band geometry mismatch");
    Plane up(cur.width * 2, cur.height * 2);
    for (int y = 0; y < cur.height; ++y)
      for (int x = 0; x < cur.width; ++x) {
        double a = cur.at(x, y), h = d.hl.at(x, y), v = d.lh.at(x, y), dd = d.hh.at(x, y);
        up.at(2 * x, 2 * y) = (a + h + v + dd) * 0.5;
        up.at(2 * x + 1, 2 * y) = (a - h + v - dd) * 0.5;
        up.at(2 * x, 2 * y + 1) = (a + h - v - dd) * 0.5;
        up.at(2 * x + 1, 2 * y + 1) = (a - h - v + dd) * 0.5;
      }
    cur = std::move(up);
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Small dense helpers and one-sided Jacobi SVD.

Mat matmul(const Mat& x, const Mat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("matmul: shape mismatch");
  Mat out(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      double v = x.at(i, k);
      if (v == 0.0) continue;
      for (int j = 0; j < y.cols; ++j) out.at(i, j) += v * y.at(k, j);
    }
  return out;
}

Mat transpose(const Mat& x) {
  Mat out(x.cols, x.rows);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) out.at(j, i) = x.at(i, j);
  return out;
}

namespace {

// One-sided Jacobi on the columns of w (m x n, m >= n): rotates column pairs
// until all are mutually orthogonal, accumulating the rotations in v.
Svd jacobi_svd_tall(const Mat& a) {
  int m = a.rows, n = a.cols;
  Mat w = a;
  Mat v(n, n);
  for (int i = 0; i < n; ++i) v.at(i, i) = 1.0;

  double fro2 = 0;
  for (double x : a.a) fro2 += x * x;
  double fro = std::sqrt(fro2);
  const int max_sweeps = 100;

  bool converged = false;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    converged = true;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double app = 0, aqq = 0, apq = 0;
        for (int i = 0; i < m; ++i) {
          double wp = w.at(i, p), wq = w.at(i, q);
          app += wp * wp;
          aqq += wq * wq;
          apq += wp * wq;
        }
        // Columns count as orthogonal when the dot product is negligible
        // against both the column norms and the matrix scale.
        if (apq * apq <= 1e-26 * app * aqq) continue;
        if (std::abs(apq) <= 1e-24 * fro2) continue;
        converged = false;
        double zeta = (aqq - app) / (2.0 * apq);
        double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = c * t;
        for (int i = 0; i < m; ++i) {
          double wp = w.at(i, p), wq = w.at(i, q);
          w.at(i, p) = c * wp - s * wq;
          w.at(i, q) = s * wp + c * wq;
        }
        for (int i = 0; i < n; ++i) {
          double vp = v.at(i, p), vq = v.at(i, q);
          v.at(i, p) = c * vp - s * vq;
          v.at(i, q) = s * vp + c * vq;
        }
      }
    }
  }
  if (!converged) throw std::runtime_error("svd_small: Jacobi iteration did not converge");

  std::vector<double> sigma(n);
  Mat u(m, n);
  for (int j = 0; j < n; ++j) {
    double norm2 = 0;
    for (int i = 0; i < m; ++i) norm2 += w.at(i, j) * w.at(i, j);
    sigma[j] = std::sqrt(norm2);
  }

  // Sort singular values descending, permuting v alongside.
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::stable_sort(perm.begin(), perm.end(),
                   [&](int i, int j) { return sigma[i] > sigma[j]; });
  Mat w_sorted(m, n), v_sorted(n, n);
  std::vector<double> s_sorted(n);
  for (int j = 0; j < n; ++j) {
    s_sorted[j] = sigma[perm[j]];
    for (int i = 0; i < m; ++i) w_sorted.at(i, j) = w.at(i, perm[j]);
    for (int i = 0; i < n; ++i) v_sorted.at(i, j) = v.at(i, perm[j]);
  }

  // Left vectors: normalized columns; zero singular values get a basis
  // completion orthogonal to the existing columns.
  const double tiny = 1e-300;
  for (int j = 0; j < n; ++j) {
    if (s_sorted[j] > tiny && s_sorted[j] > 1e-14 * (fro > 0 ? fro : 1.0)) {
      for (int i = 0; i < m; ++i) u.at(i, j) = w_sorted.at(i, j) / s_sorted[j];
    } else {
      s_sorted[j] = 0.0;
      // Gram-Schmidt a unit vector against columns 0..j-1.
      for (int attempt = 0; attempt < m; ++attempt) {
        std::vector<double> e(m, 0.0);
        e[attempt] = 1.0;
        for (int k = 0; k < j; ++k) {
          double dot = 0;
          for (int i = 0; i < m; ++i) dot += e[i] * u.at(i, k);
          for (int i = 0; i < m; ++i) e[i] -= dot * u.at(i, k);
        }
        double norm2 = 0;
        for (double x : e) norm2 += x * x;
        if (norm2 > 0.5) {
          double inv = 1.0 / std::sqrt(norm2);
          for (int i = 0; i < m; ++i) u.at(i, j) = e[i] * inv;
          break;
        }
      }
    }
  }

  Svd out;
  out.u = std::move(u);
  out.s = std::move(s_sorted);
  out.vt = transpose(v_sorted);
  return out;
}

}  // namespace

Svd svd_small(const Mat& a) {
  if (a.rows < 1 || a.cols < 1) throw std::invalid_argument("svd_small: empty matrix");
  for (double x : a.a)
    if (!std::isfinite(x)) throw std::invalid_argument("svd_small: non-finite entry");
  if (a.rows >= a.cols) return jacobi_svd_tall(a);
  // Wide matrix: factor the transpose and swap the roles of u and v.
  Svd t = jacobi_svd_tall(transpose(a));
  Svd out;
  out.u = transpose(t.vt);
  out.s = std::move(t.s);
  out.vt = transpose(t.u);
  return out;
}

}  // namespace sadre
