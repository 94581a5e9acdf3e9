// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code = number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "sadre/attacks.hpp"
#include "sadre/bench.hpp"
#include "sadre/corpus.hpp"
#include "sadre/diffusion.hpp"
#include "sadre/mathutil.hpp"
#include "sadre/metrics.hpp"
#include "sadre/pixelio.hpp"
#include "sadre/transforms.hpp"
#include "sadre/watermark.hpp"
#include "test_support.hpp"

using namespace sadre;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

Plane random_plane(uint64_t seed, int w, int h, double lo = 0.0, double hi = 1.0) {
  return testsup::random_plane(seed, w, h, lo, hi);
}

Latent gaussian_latent_like(const Latent& shape, double sigma, uint64_t seed) {
  Latent eps = shape;
  auto bands = bands_of(eps);
  for (size_t k = 0; k < bands.size(); ++k)
    bands[k]->data = sample_gaussian(bands[k]->width, bands[k]->height, sigma, seed, 100 + k).data;
  return eps;
}

// --------------------------------------------------------------------------
// Shared fixtures: the frozen corpus and the Table-2-shaped benchmark config.

constexpr uint64_t kCorpusSeed = 20250801;
constexpr uint64_t kBenchSeed = 424242;
constexpr double kAttackSigma = 0.075;

std::string bench_config_text(const std::string& corpus_dir, const std::string& output) {
  return std::string("{\n") +
         "  \"corpus_dir\": \"" + corpus_dir + "\",\n" +
         "  \"image_size\": 256,\n" +
         "  \"methods\": [\"dwtdct\", \"dwtdctsvd\"],\n" +
         "  \"strengths\": {\"dwtdctsvd\": 0.25},\n" +
         "  \"attacks\": [\n" +
         "    {\"type\": \"none\"},\n" +
         "    {\"type\": \"jpeg\", \"quality\": 50},\n" +
         "    {\"type\": \"sadre\", \"sigma\": 0.075, \"mask_pct_lo\": 25, \"mask_pct_hi\": 50, "
         "\"lambda_s\": 3.5},\n" +
         "    {\"type\": \"regen\", \"sigma\": 0.075}\n" +
         "  ],\n" +
         "  \"seed\": 424242,\n" +
         "  \"payload_len\": 32,\n" +
         "  \"output\": \"" + output + "\",\n" +
         "  \"formats\": [\"csv\", \"json\", \"md\"]\n" +
         "}\n";
}

struct BenchFixture {
  BenchResult result;
  double elapsed_s = 0;

  const BenchRow& row(const std::string& method, const std::string& attack_prefix) const {
    for (const auto& r : result.rows)
      if (r.method == method && r.attack.rfind(attack_prefix, 0) == 0) return r;
    throw std::runtime_error("missing bench row " + method + "/" + attack_prefix);
  }
};

// --------------------------------------------------------------------------

Check c1_transform_exactness() {
  Check c;
  auto t0 = std::chrono::steady_clock::now();

  double dct_err = 0, dwt_err = 0, codec_err = 0, svd_err = 0;
  for (uint64_t i = 0; i < 100; ++i) {
    Block8 b{};
    for (int k = 0; k < 64; ++k) b[k] = 2.0 * rng::u01(i, 1, k) - 1.0;
    Block8 back = idct2(dct2(b));
    for (int k = 0; k < 64; ++k) dct_err = std::max(dct_err, std::abs(back[k] - b[k]));

    Plane p = random_plane(1000 + i, 64, 64);
    dwt_err = std::max(dwt_err, testsup::max_abs_diff(p, haar_idwt2(haar_dwt2(p, 3))));
    codec_err = std::max(codec_err, testsup::max_abs_diff(p, decode(encode(p))));

    int n = 4 + static_cast<int>(i % 9);
    Mat a(n, n);
    for (size_t k = 0; k < a.a.size(); ++k) a.a[k] = 2.0 * rng::u01(i, 2, k) - 1.0;
    Svd s = svd_small(a);
    Mat sm(n, n);
    for (int k = 0; k < n; ++k) sm.at(k, k) = s.s[k];
    Mat rebuilt = matmul(matmul(s.u, sm), s.vt);
    double num = 0, den = 0;
    for (size_t k = 0; k < a.a.size(); ++k) {
      num += (a.a[k] - rebuilt.a[k]) * (a.a[k] - rebuilt.a[k]);
      den += a.a[k] * a.a[k];
    }
    svd_err = std::max(svd_err, std::sqrt(num / den));
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  c.require(dct_err <= 1e-10, "dct round trip " + fmt(dct_err));
  c.require(dwt_err <= 1e-10, "dwt round trip " + fmt(dwt_err));
  c.require(codec_err <= 1e-10, "codec round trip " + fmt(codec_err));
  c.require(svd_err <= 1e-8, "svd reconstruction " + fmt(svd_err));
  c.require(secs < 5.0, "runtime " + fmt(secs) + "s");
  c.note("max errors: dct " + fmt(dct_err) + ", dwt " + fmt(dwt_err) + ", codec " +
         fmt(codec_err) + ", svd " + fmt(svd_err) + ", " + fmt(secs) + "s");
  return c;
}

Check c2_isometry() {
  Check c;
  double worst_ratio = 0;
  for (uint64_t i = 0; i < 50; ++i) {
    Plane a = random_plane(2000 + 2 * i, 64, 64);
    Plane b = random_plane(2001 + 2 * i, 64, 64);
    Plane diff(64, 64);
    double pix = 0;
    for (size_t k = 0; k < diff.size(); ++k) {
      diff.data[k] = a.data[k] - b.data[k];
      pix += diff.data[k] * diff.data[k];
    }
    pix = std::sqrt(pix);
    double ratio = latent_norm(encode(diff)) / pix;
    worst_ratio = std::max(worst_ratio, std::abs(ratio - 1.0));

    Mask soft(8, 8);
    for (size_t k = 0; k < soft.v.size(); ++k) soft.v[k] = rng::u01(i, 3, k);
    double masked = latent_masked_norm(encode(diff), soft);
    c.require(masked <= pix * (1.0 + 1e-12),
              "masked seminorm exceeded the pixel norm at pair " + std::to_string(i));
  }
  c.require(worst_ratio <= 1e-9, "isometry ratio deviation " + fmt(worst_ratio));
  c.note("max |ratio-1| " + fmt(worst_ratio));
  return c;
}

Check c3_diffusion_inversion() {
  Check c;
  Schedule sched = make_schedule();

  Plane x = random_plane(3000, 64, 64);
  Latent z = encode(x);

  // single step
  {
    Latent eps = gaussian_latent_like(z, 1.0, 3001);
    OracleDenoiser oracle;
    oracle.record(13, eps);
    Latent back = reverse_step(forward_step(z, 13, sched, eps), 13, sched, oracle);
    double err = 0;
    auto ba = bands_of(back), bz = bands_of(z);
    for (size_t k = 0; k < ba.size(); ++k)
      for (size_t i2 = 0; i2 < ba[k]->size(); ++i2)
        err = std::max(err, std::abs(ba[k]->data[i2] - bz[k]->data[i2]));
    c.require(err <= 1e-12, "single-step inversion " + fmt(err));
    c.note("single step " + fmt(err));
  }

  // 50-step chain
  {
    OracleDenoiser oracle;
    Latent zt = z;
    for (int t = 1; t <= 50; ++t) {
      Latent eps = gaussian_latent_like(z, 1.0, 3100 + t);
      oracle.record(t, eps);
      zt = forward_step(zt, t, sched, eps);
    }
    for (int t = 50; t >= 1; --t) zt = reverse_step(zt, t, sched, oracle);
    double err = 0;
    auto ba = bands_of(zt), bz = bands_of(z);
    for (size_t k = 0; k < ba.size(); ++k)
      for (size_t i2 = 0; i2 < ba[k]->size(); ++i2)
        err = std::max(err, std::abs(ba[k]->data[i2] - bz[k]->data[i2]));
    c.require(err <= 1e-8, "50-step chain " + fmt(err));
    c.note("50 steps " + fmt(err));
  }

  // forward variance
  {
    const int t_probe = 10;
    const double sigma0 = 0.7;
    Latent proto = encode(Plane(8, 8, 0.0));
    double sum = 0, sum2 = 0;
    size_t n = 0;
    for (int trial = 0; trial < 10000; ++trial) {
      Latent zt = gaussian_latent_like(proto, sigma0, 50000 + trial);
      for (int t = 1; t <= t_probe; ++t)
        zt = forward_step(zt, t, sched, gaussian_latent_like(proto, 1.0, 90000 + trial * 64 + t));
      for (const Plane* p : bands_of(zt))
        for (double v : p->data) {
          sum += v;
          sum2 += v * v;
          ++n;
        }
    }
    double mean = sum / n;
    double var = sum2 / n - mean * mean;
    double expected = sched.alpha_bar_at(t_probe) * sigma0 * sigma0 +
                      (1.0 - sched.alpha_bar_at(t_probe));
    double rel = std::abs(var - expected) / expected;
    c.require(rel <= 0.03, "variance composition off by " + fmt(rel));
    c.note("variance rel err " + fmt(rel));
  }
  return c;
}

Check c4_sampler_statistics() {
  Check c;
  const int side = 1000;
  const double sigma = 0.1, var_target = sigma * sigma;

  {
    NoiseSpec spec{NoiseFamily::Laplace, sigma, 41};
    Plane f = sample_noise(side, side, spec);
    double mean = std::accumulate(f.data.begin(), f.data.end(), 0.0) / f.size();
    double var = 0;
    for (double v : f.data) var += (v - mean) * (v - mean);
    var /= f.size();
    double band = 3.0 * std::sqrt(5.0) * var_target / side;  // Var(X^2) = 5 sigma^4
    c.require(std::abs(var - var_target) <= band,
              "laplace variance " + fmt(var) + " outside 3-sigma band " + fmt(band));
    Plane again = sample_noise(side, side, spec);
    c.require(f.data == again.data, "laplace not byte-reproducible");
    c.note("laplace var " + fmt(var));
  }
  {
    NoiseSpec spec{NoiseFamily::Poisson, sigma, 42};
    Plane f = sample_noise(side, side, spec);
    double mean = std::accumulate(f.data.begin(), f.data.end(), 0.0) / f.size();
    double var = 0;
    for (double v : f.data) var += (v - mean) * (v - mean);
    var /= f.size();
    double band = 3.0 * std::sqrt(2.0 + 1.0 / kPoissonBaseRate) * var_target / side;
    c.require(std::abs(var - var_target) <= band,
              "poisson variance " + fmt(var) + " outside 3-sigma band " + fmt(band));
    Plane again = sample_noise(side, side, spec);
    c.require(f.data == again.data, "poisson not byte-reproducible");
    c.note("poisson var " + fmt(var));
  }
  {
    NoiseSpec spec{NoiseFamily::Cauchy, sigma, 43};
    Plane f = sample_noise(side, side, spec);
    size_t below_neg = 0, below_pos = 0;
    for (double v : f.data) {
      if (v < -sigma) ++below_neg;
      if (v < sigma) ++below_pos;
    }
    double q1 = static_cast<double>(below_neg) / f.size();
    double q3 = static_cast<double>(below_pos) / f.size();
    c.require(std::abs(q1 - 0.25) <= 0.01, "cauchy lower quartile " + fmt(q1));
    c.require(std::abs(q3 - 0.75) <= 0.01, "cauchy upper quartile " + fmt(q3));
    Plane again = sample_noise(side, side, spec);
    c.require(f.data == again.data, "cauchy not byte-reproducible");
    c.note("cauchy F(-g) " + fmt(q1) + ", F(+g) " + fmt(q3));
  }
  return c;
}

Check c5_roundtrip_watermarking(const BenchFixture& bench) {
  Check c;
  for (const char* method : {"dwtdct", "dwtdctsvd"}) {
    const BenchRow& row = bench.row(method, "none");
    c.require(row.n_images == 20, std::string(method) + " corpus size " + std::to_string(row.n_images));
    c.require(row.bra_mean == 1.0, std::string(method) + " BRA " + fmt(row.bra_mean));
    c.require(row.psnr_mean >= 38.0, std::string(method) + " PSNR " + fmt(row.psnr_mean));
    c.note(std::string(method) + ": BRA " + fmt(row.bra_mean) + ", PSNR " + fmt(row.psnr_mean));
  }
  return c;
}

Check c6_directional_analogue(const BenchFixture& bench) {
  Check c;
  c.require(bench.elapsed_s <= 300.0, "grid runtime " + fmt(bench.elapsed_s) + "s > 5 min");
  for (const char* method : {"dwtdct", "dwtdctsvd"}) {
    const BenchRow& sadre = bench.row(method, "sadre");
    const BenchRow& jpeg = bench.row(method, "jpeg");
    const BenchRow& regen = bench.row(method, "regen");
    c.require(sadre.bra_mean <= 0.65, std::string(method) + " (a) sadre BRA " + fmt(sadre.bra_mean));
    c.require(sadre.bra_mean < jpeg.bra_mean,
              std::string(method) + " (b) sadre " + fmt(sadre.bra_mean) + " !< jpeg " + fmt(jpeg.bra_mean));
    c.require(sadre.psnr_mean > regen.psnr_mean,
              std::string(method) + " (c) sadre " + fmt(sadre.psnr_mean) + " !> regen " + fmt(regen.psnr_mean));
    c.require(sadre.ssim_mean >= 0.85, std::string(method) + " (d) sadre SSIM " + fmt(sadre.ssim_mean));
    c.note(std::string(method) + ": BRA " + fmt(sadre.bra_mean) + " (jpeg " + fmt(jpeg.bra_mean) +
           "), PSNR " + fmt(sadre.psnr_mean) + " (regen " + fmt(regen.psnr_mean) + "), SSIM " +
           fmt(sadre.ssim_mean));
  }
  c.note("grid " + fmt(bench.elapsed_s) + "s");
  return c;
}

Check c7_metric_oracles() {
  Check c;

  Plane a = random_plane(7000, 48, 48);
  Plane b = random_plane(7001, 48, 48);
  double mse = 0;
  for (size_t i = 0; i < a.size(); ++i) mse += (a.data[i] - b.data[i]) * (a.data[i] - b.data[i]);
  mse /= a.size();
  double oracle_db = 10.0 * std::log10(1.0 / mse);
  c.require(std::abs(psnr(a, b) - oracle_db) <= 1e-9, "psnr vs naive oracle");

  Plane s = make_synthetic_plane(7002, 64, 64);
  c.require(std::abs(ssim(s, s) - 1.0) <= 1e-12, "ssim self-identity");

  // W1 vs exhaustive assignment on 8 pixels
  for (uint64_t i = 0; i < 5; ++i) {
    Plane p = random_plane(7100 + i, 8, 1);
    Plane q = random_plane(7200 + i, 8, 1);
    std::array<int, 8> perm{0, 1, 2, 3, 4, 5, 6, 7};
    double best = 1e300;
    do {
      double cost = 0;
      for (int k = 0; k < 8; ++k) cost += std::abs(p.data[k] - q.data[perm[k]]);
      best = std::min(best, cost / 8.0);
    } while (std::next_permutation(perm.begin(), perm.end()));
    c.require(std::abs(wasserstein(p, q, 1) - best) <= 1e-12,
              "W1 vs assignment oracle at case " + std::to_string(i));
  }

  Plane shifted = a;
  for (double& v : shifted.data) v += 0.07;
  c.require(std::abs(wasserstein(a, shifted, 1) - 0.07) <= 1e-12, "W1 constant-shift identity");

  double worst_phi = 0;
  for (int i = 0; i < 20; ++i) {
    double x = -4.75 + 0.5 * i;
    worst_phi = std::max(worst_phi,
                         std::abs(normal_cdf(x) - static_cast<double>(testsup::phi_oracle(x))));
  }
  c.require(worst_phi <= 1e-7, "Phi accuracy " + fmt(worst_phi));
  c.note("Phi max err " + fmt(worst_phi));
  return c;
}

Check c8_fidelity_bounds() {
  Check c;

  double d = composite_d(0.182, (1.0 - 0.9452) / 2.0, FidelityWeights{0.85, 0.75});
  c.require(std::abs(d - 0.1753) <= 5e-4, "composite D " + fmt(d));
  c.note("D " + fmt(d));

  // k_sigma calibration on a disjoint 10-image corpus, then the inequality
  // must hold on the full 20-image corpus.
  HolderCert cert;
  FidelityWeights w;
  double k_sigma = 0.0;
  for (uint64_t i = 0; i < 10; ++i) {
    Plane x = make_synthetic_plane(rng::mix64(777000 + i), 256, 256);
    Payload p = random_payload(778000 + i, 32);
    Plane xw = embed(x, p, EmbedConfig::defaults(WatermarkMethod::DwtDct, 779000 + i, 32));
    Mask m = estimate_saliency(xw);
    double lhs = composite_d(wasserstein(x, xw, 1), dssim(x, xw), w);
    double delta_m = masked_latent_gap(x, xw, m);
    double residual = (lhs - std::pow(delta_m, cert.alpha_h) / kAttackSigma) / kAttackSigma;
    k_sigma = std::max(k_sigma, residual);
  }
  k_sigma = std::max(0.0, k_sigma) * 1.1;

  int holds = 0;
  for (uint64_t i = 0; i < 20; ++i) {
    Plane x = make_synthetic_plane(rng::mix64(kCorpusSeed + i), 256, 256);
    Payload p = random_payload(881000 + i, 32);
    Plane xw = embed(x, p, EmbedConfig::defaults(WatermarkMethod::DwtDct, 882000 + i, 32));
    Mask m = estimate_saliency(xw);
    if (tradeoff_check(x, xw, m, kAttackSigma, w, cert, k_sigma).holds) ++holds;
  }
  c.require(holds == 20, "Eq-9 inequality held on " + std::to_string(holds) + "/20");
  c.note("k_sigma " + fmt(k_sigma) + ", holds " + std::to_string(holds) + "/20");
  return c;
}

Check c9_empirical_stability() {
  Check c;
  const double delta = 0.05;
  const double sigma = 0.05;
  const int seeds_per_image = 20;

  auto rel_errors = [&](uint64_t corpus_tag) {
    std::vector<double> errs;
    for (uint64_t i = 0; i < 10; ++i) {
      Plane x = make_synthetic_plane(rng::mix64(corpus_tag + i), 256, 256);
      Payload p = random_payload(corpus_tag + 100 + i, 32);
      Plane xw = embed(x, p, EmbedConfig::defaults(WatermarkMethod::DwtDct, corpus_tag + 200 + i, 32));
      double x_norm = 0;
      for (double v : x.data) x_norm += v * v;
      x_norm = std::sqrt(x_norm);
      for (int s = 0; s < seeds_per_image; ++s) {
        AttackConfig cfg = testsup::bench_attack_config(corpus_tag + 300 + i * 97 + s);
        cfg.sigma = sigma;
        Plane xhat = sadre_attack(xw, cfg).image;
        errs.push_back(testsup::l2(xhat, x) / x_norm);
      }
    }
    return errs;
  };

  std::vector<double> calib = rel_errors(5550000);
  std::sort(calib.begin(), calib.end());
  double eps_emp = 1.1 * percentile_sorted(calib, 95.0);

  std::vector<double> held_out = rel_errors(6660000);
  int within = 0;
  for (double e : held_out)
    if (e <= eps_emp) ++within;
  double frac = static_cast<double>(within) / held_out.size();
  c.require(frac >= 1.0 - delta,
            "stability fraction " + fmt(frac) + " < " + fmt(1.0 - delta));
  c.note("eps_emp " + fmt(eps_emp) + ", held-out fraction " + fmt(frac) + " (n=" +
         std::to_string(held_out.size()) + ")");
  return c;
}

Check c10_determinism(const std::string& corpus_dir, const testsup::TempDir& tmp) {
  Check c;
  std::string text = bench_config_text(corpus_dir, tmp.file("det"));
  BenchConfig cfg = parse_bench_config(text);
  cfg.threads = 1;
  std::string csv1 = render_csv(run_bench(cfg).rows);
  std::string csv2 = render_csv(run_bench(cfg).rows);
  cfg.threads = 2;
  std::string csv3 = render_csv(run_bench(cfg).rows);
  c.require(csv1 == csv2, "re-run differs");
  c.require(csv1 == csv3, "thread count changed the bytes");
  c.note("csv bytes identical across runs and 1 vs 2 threads");
  return c;
}

}  // namespace

int main() {
  testsup::TempDir tmp("acceptance");
  std::string corpus_dir = tmp.file("corpus");
  write_synthetic_corpus(corpus_dir, 20, 256, kCorpusSeed);

  BenchFixture bench;
  {
    BenchConfig cfg = parse_bench_config(bench_config_text(corpus_dir, tmp.file("report")));
    cfg.threads = 2;
    auto t0 = std::chrono::steady_clock::now();
    bench.result = run_bench(cfg);
    bench.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit_report(bench.result, cfg.formats, cfg.output);
  }

  struct Criterion {
    const char* name;
    std::function<Check()> run;
  };
  std::vector<Criterion> criteria = {
      {"C1 transform exactness (1e-10 round trips, 1e-8 svd, <5s)", [] { return c1_transform_exactness(); }},
      {"C2 latent isometry and masked seminorm bound", [] { return c2_isometry(); }},
      {"C3 diffusion inversion (1e-12 step, 1e-8 chain, 3% variance)", [] { return c3_diffusion_inversion(); }},
      {"C4 sampler statistics at 10^6 samples", [] { return c4_sampler_statistics(); }},
      {"C5 round-trip watermarking (BRA 1.00, PSNR >= 38 dB)", [&] { return c5_roundtrip_watermarking(bench); }},
      {"C6 directional benchmark analogue (BRA/PSNR/SSIM ordering)", [&] { return c6_directional_analogue(bench); }},
      {"C7 metric oracles (psnr/ssim/W1/Phi)", [] { return c7_metric_oracles(); }},
      {"C8 composite D and calibrated trade-off inequality", [] { return c8_fidelity_bounds(); }},
      {"C9 empirical reconstruction stability (95% at sigma 0.05)", [] { return c9_empirical_stability(); }},
      {"C10 benchmark determinism across runs and threads", [&] { return c10_determinism(corpus_dir, tmp); }},
  };

  int failures = 0;
  for (const auto& crit : criteria) {
    Check c = crit.run();
    std::printf("[%s] %s%s%s\n", c.ok ? "PASS" : "FAIL", crit.name,
                c.detail.empty() ? "" : " — ", c.detail.c_str());
    std::fflush(stdout);
    if (!c.ok) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures;
}
