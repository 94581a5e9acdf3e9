#include "sadre/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sadre/mathutil.hpp"

namespace sadre {

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p must be in (0,1)");

  // Acklam's rational approximation.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425, p_high = 1.0 - p_low;

  double x;
  if (p < p_low) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= p_high) {
    double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // Two Halley refinements against the erf-based CDF.
  const double inv_sqrt_2pi = 0.3989422804014326779;
  for (int i = 0; i < 2; ++i) {
    double e = normal_cdf(x) - p;
    double pdf = inv_sqrt_2pi * std::exp(-0.5 * x * x);
    if (pdf <= 0) break;
    double u = e / pdf;
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

double psnr(const Plane& a, const Plane& b) {
  if (!a.same_geometry(b)) throw std::invalid_argument("psnr: geometry mismatch");
  double mse = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = a.data[i] - b.data[i];
    mse += d * d;
  }
  mse /= static_cast<double>(a.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

namespace {

// 11-tap Gaussian window, std 1.5, normalized to sum 1.
const std::array<double, 11>& ssim_window() {
  static const std::array<double, 11> w = [] {
    std::array<double, 11> g{};
    double sum = 0;
    for (int i = 0; i < 11; ++i) {
      double d = i - 5;
      g[i] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
      sum += g[i];
    }
    for (double& x : g) x /= sum;
    return g;
  }();
  return w;
}

// Separable weighted local sums for all valid window positions.
Plane gauss_filter_valid(const Plane& p) {
  const auto& w = ssim_window();
  Plane rows(p.width - 10, p.height);
  for (int y = 0; y < p.height; ++y)
    for (int x = 0; x < rows.width; ++x) {
      double s = 0;
      for (int k = 0; k < 11; ++k) s += w[k] * p.at(x + k, y);
      rows.at(x, y) = s;
    }
  Plane out(rows.width, p.height - 10);
  for (int y = 0; y < out.height; ++y)
    for (int x = 0; x < out.width; ++x) {
      double s = 0;
      for (int k = 0; k < 11; ++k) s += w[k] * rows.at(x, y + k);
      out.at(x, y) = s;
    }
  return out;
}

Plane hadamard(const Plane& a, const Plane& b) {
  Plane out(a.width, a.height);
  for (size_t i = 0; i < a.size(); ++i) out.data[i] = a.data[i] * b.data[i];
  return out;
}

}  // namespace

double ssim(const Plane& a, const Plane& b) {
  if (!a.same_geometry(b)) throw std::invalid_argument("ssim: geometry mismatch");
  if (a.width < 11 || a.height < 11)
    throw std::invalid_argument("ssim: min side is 11");

  const double c1 = 0.01 * 0.01;  // (K1 L)^2, L = 1
  const double c2 = 0.03 * 0.03;

  Plane mu_a = gauss_filter_valid(a);
  Plane mu_b = gauss_filter_valid(b);
  Plane aa = gauss_filter_valid(hadamard(a, a));
  Plane bb = gauss_filter_valid(hadamard(b, b));
  Plane ab = gauss_filter_valid(hadamard(a, b));

  double total = 0;
  for (size_t i = 0; i < mu_a.size(); ++i) {
    double ma = mu_a.data[i], mb = mu_b.data[i];
    double va = aa.data[i] - ma * ma;
    double vb = bb.data[i] - mb * mb;
    double cov = ab.data[i] - ma * mb;
    double num = (2.0 * ma * mb + c1) * (2.0 * cov + c2);
    double den = (ma * ma + mb * mb + c1) * (va + vb + c2);
    total += num / den;
  }
  return total / static_cast<double>(mu_a.size());
}

double dssim(const Plane& a, const Plane& b) { return (1.0 - ssim(a, b)) / 2.0; }

double wasserstein(const Plane& a, const Plane& b, int p) {
  if (a.size() != b.size()) throw std::invalid_argument("wasserstein: pixel count mismatch");
  if (p != 1 && p != 2) throw std::invalid_argument("wasserstein: order must be 1 or 2");
  std::vector<double> sa = a.data, sb = b.data;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  double acc = 0;
  for (size_t i = 0; i < sa.size(); ++i) {
    double d = std::abs(sa[i] - sb[i]);
    acc += p == 1 ? d : d * d;
  }
  acc /= static_cast<double>(sa.size());
  return p == 1 ? acc : std::sqrt(acc);
}

double composite_d(double wp, double ds, const FidelityWeights& w) {
  return w.alpha * wp + w.beta * ds;
}

double type2_bound(double eps1, double delta, double sigma) {
  if (!(eps1 > 0.0 && eps1 < 1.0)) throw std::invalid_argument("type2_bound: eps1 must be in (0,1)");
  if (!(sigma > 0.0)) throw std::invalid_argument("type2_bound: sigma must be > 0");
  return normal_cdf(normal_quantile(1.0 - eps1) - delta / sigma);
}

double error_bound_rhs(const BoundInputs& in) {
  return in.c * std::pow(in.delta_m, in.alpha_h) + in.k_sigma * in.sigma;
}

double masked_latent_gap(const Plane& x, const Plane& xw, const Mask& m) {
  if (!x.same_geometry(xw)) throw std::invalid_argument("masked_latent_gap: geometry mismatch");
  Latent zx = encode(x);
  Latent zw = encode(xw);
  Latent diff = zx;
  auto db = bands_of(diff);
  auto wb = bands_of(zw);
  for (size_t k = 0; k < db.size(); ++k)
    for (size_t i = 0; i < db[k]->size(); ++i) db[k]->data[i] = wb[k]->data[i] - db[k]->data[i];
  return latent_masked_norm(diff, m);
}

TradeoffReport tradeoff_check(const Plane& x, const Plane& xw, const Mask& m,
                              double sigma, const FidelityWeights& w,
                              const HolderCert& cert, double k_sigma) {
  if (!x.same_geometry(xw)) throw std::invalid_argument("tradeoff_check: geometry mismatch");
  if (!(sigma > 0.0)) throw std::invalid_argument("tradeoff_check: sigma must be > 0");
  TradeoffReport rep;
  rep.lhs = composite_d(wasserstein(x, xw, 1), dssim(x, xw), w);
  rep.delta_m = masked_latent_gap(x, xw, m);
  rep.rhs = std::pow(rep.delta_m, cert.alpha_h) / sigma + k_sigma * sigma;
  rep.holds = rep.lhs <= rep.rhs;
  return rep;
}

}  // namespace sadre
