#include <doctest.h>

#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "sadre/attacks.hpp"
#include "sadre/bench.hpp"
#include "sadre/corpus.hpp"
#include "sadre/metrics.hpp"
#include "sadre/pixelio.hpp"
#include "test_support.hpp"

using namespace sadre;
using testsup::TempDir;

namespace {

std::string bench_config_json(const std::string& corpus_dir, const std::string& output,
                              int threads) {
  return std::string("{") +
         "\"corpus_dir\": \"" + corpus_dir + "\"," +
         "\"image_size\": 128," +
         "\"methods\": [\"dwtdct\", \"dwtdctsvd\"]," +
         "\"attacks\": [{\"type\": \"none\"}, {\"type\": \"jpeg\", \"quality\": 50}]," +
         "\"seed\": 99," +
         "\"payload_len\": 16," +
         "\"output\": \"" + output + "\"," +
         "\"formats\": [\"csv\", \"json\", \"md\"]," +
         "\"threads\": " + std::to_string(threads) + "}";
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("jpeg quality scaling") {
  // q = 50 -> scale 100 -> the standard table unchanged
  auto t50 = jpeg_scaled_table(50);
  for (int i = 0; i < 64; ++i) CHECK(t50[i] == static_cast<double>(jpeg_luminance_table()[i]));
  // q = 100 -> all entries clamp to 1
  auto t100 = jpeg_scaled_table(100);
  for (int i = 0; i < 64; ++i) CHECK(t100[i] == 1.0);
  CHECK_THROWS_AS((void)jpeg_scaled_table(0), std::invalid_argument);
  CHECK_THROWS_AS((void)jpeg_scaled_table(101), std::invalid_argument);
}

TEST_CASE("jpeg attack is near-identity at q=100") {
  Plane x = testsup::random_plane(1, 64, 64);
  CHECK(psnr(x, jpeg_attack(x, 100)) >= 50.0);
}

TEST_CASE("jpeg quality is monotone in psnr per image") {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    Plane x = make_synthetic_plane(seed, 128, 128);
    double prev = -1.0;
    for (int q : {10, 30, 50, 70, 90}) {
      double v = psnr(x, jpeg_attack(x, q));
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("regen attack is the all-ones ablation of the masked pipeline") {
  Plane xw = make_synthetic_plane(3, 128, 128);
  Schedule sched = make_schedule();
  ShrinkDenoiser den(sched);
  Plane via_regen = regen_attack(xw, 0.1, NoiseFamily::Laplace, 77, sched, den);

  // same composition spelled out with an explicit all-ones mask
  Latent z = encode(pad_to_multiple(xw, 8));
  Mask ones(16, 16, 1.0);
  Latent z_tilde = inject(z, ones, NoiseSpec{NoiseFamily::Laplace, 0.1, 77});
  Plane by_hand = crop(reconstruct(z_tilde, ones, 0.1, sched, den), 128, 128);
  CHECK(via_regen.data == by_hand.data);

  Plane again = regen_attack(xw, 0.1, NoiseFamily::Laplace, 77, sched, den);
  CHECK(via_regen.data == again.data);
}

TEST_CASE("saliency gating reduces collateral distortion vs global regeneration") {
  Schedule sched = make_schedule();
  ShrinkDenoiser den(sched, 3.5);
  double regen_d = 0, sadre_d = 0;
  for (uint64_t i = 0; i < 8; ++i) {
    Plane x = make_synthetic_plane(40 + i, 128, 128);
    Payload p = random_payload(50 + i, 16);
    EmbedConfig ec = EmbedConfig::defaults(WatermarkMethod::DwtDct, 60 + i, 16);
    Plane xw = embed(x, p, ec);
    AttackConfig ac = testsup::bench_attack_config(70 + i);
    regen_d += dssim(xw, regen_attack(xw, ac.sigma, ac.family, 70 + i, sched, den));
    sadre_d += dssim(xw, sadre_attack(xw, ac).image);
  }
  CHECK(regen_d >= sadre_d);
}

TEST_CASE("bench config parsing") {
  CHECK_THROWS_WITH_AS((void)parse_bench_config("{\"corpus_dir\": \"x\", \"methods\": [\"dwtdct\"], "
                                                "\"attacks\": [{\"type\": \"none\"}], \"typo\": 1}"),
                       doctest::Contains("typo"), std::runtime_error);
  CHECK_THROWS_AS((void)parse_bench_config("{}"), std::runtime_error);
  CHECK_THROWS_AS((void)parse_bench_config("not json"), std::runtime_error);
  CHECK_THROWS_AS(
      (void)parse_bench_config("{\"corpus_dir\": \"x\", \"methods\": [], \"attacks\": [{\"type\": \"none\"}]}"),
      std::runtime_error);
  CHECK_THROWS_AS(
      (void)parse_bench_config(
          "{\"corpus_dir\": \"x\", \"methods\": [\"dwtdct\"], \"attacks\": [{\"type\": \"warp\"}]}"),
      std::runtime_error);

  BenchConfig cfg = parse_bench_config(
      "{\"corpus_dir\": \"c\", \"methods\": [\"dwtdctsvd\"], \"attacks\": "
      "[{\"type\": \"sadre\", \"sigma\": 0.08, \"mask_pct_lo\": 20, \"mask_pct_hi\": 45}], "
      "\"strengths\": {\"dwtdctsvd\": 0.25}, \"formats\": [\"csv\", \"md\"]}");
  CHECK(cfg.methods.size() == 1);
  CHECK(cfg.methods[0].strength == 0.25);
  CHECK(cfg.attacks[0].sadre.sigma == 0.08);
  CHECK(cfg.attacks[0].sadre.saliency.pct_lo == 20.0);
  CHECK(cfg.formats.size() == 2);
}

TEST_CASE("bench run: no-attack row recovers every payload, outputs are deterministic") {
  TempDir tmp("bench");
  write_synthetic_corpus(tmp.file("corpus"), 4, 128, 5);

  BenchConfig cfg = parse_bench_config(bench_config_json(tmp.file("corpus"), tmp.file("r1"), 1));
  BenchResult r1 = run_bench(cfg);
  emit_report(r1, cfg.formats, tmp.file("r1"));

  for (const auto& row : r1.rows) {
    CHECK(row.n_images == 4);
    if (row.attack == "none") {
      CHECK(row.bra_mean == doctest::Approx(1.0));
      CHECK(row.bra_std == doctest::Approx(0.0));
    }
  }

  SUBCASE("byte-identical across runs and thread counts") {
    BenchConfig cfg2 = parse_bench_config(bench_config_json(tmp.file("corpus"), tmp.file("r2"), 2));
    BenchResult r2 = run_bench(cfg2);
    emit_report(r2, cfg2.formats, tmp.file("r2"));
    CHECK(slurp(tmp.file("r1") + ".csv") == slurp(tmp.file("r2") + ".csv"));
    CHECK(slurp(tmp.file("r1") + ".per_image.csv") == slurp(tmp.file("r2") + ".per_image.csv"));
  }

  SUBCASE("aggregates equal a naive recomputation from the per-image log") {
    for (const auto& row : r1.rows) {
      double sum = 0, n = 0;
      for (const auto& s : r1.samples)
        if (s.method == row.method && s.attack == row.attack) {
          sum += s.psnr;
          ++n;
        }
      CHECK(n == row.n_images);
      CHECK(row.psnr_mean == doctest::Approx(sum / n).epsilon(1e-12));
      double var = 0;
      for (const auto& s : r1.samples)
        if (s.method == row.method && s.attack == row.attack)
          var += (s.psnr - row.psnr_mean) * (s.psnr - row.psnr_mean);
      CHECK(row.psnr_std == doctest::Approx(std::sqrt(var / n)).epsilon(1e-9));
    }
    // and from the written log file
    std::string log = slurp(tmp.file("r1") + ".per_image.csv");
    int lines = 0;
    for (char c : log)
      if (c == '\n') ++lines;
    CHECK(lines == 1 + 4 * 2 * 2);  // header + images x methods x attacks
  }

  SUBCASE("csv/json/md agree at print precision") {
    std::string csv = slurp(tmp.file("r1") + ".csv");
    auto parsed = nlohmann::json::parse(slurp(tmp.file("r1") + ".json"));
    std::string md = slurp(tmp.file("r1") + ".md");

    // first data line of the CSV corresponds to rows[0]
    const BenchRow& row = r1.rows[0];
    CHECK(csv.find(row.method + "," + row.attack + "," + std::to_string(row.n_images) + "," +
                   format_metric(row.psnr_mean)) != std::string::npos);
    CHECK(parsed["rows"].size() == r1.rows.size());
    double json_psnr = parsed["rows"][0]["psnr_mean"].get<double>();
    CHECK(format_metric(json_psnr) == format_metric(row.psnr_mean));
    CHECK(md.find(format_metric(row.ssim_mean)) != std::string::npos);
  }
}

TEST_CASE("emit_report shapes") {
  TempDir tmp("report");
  BenchResult r;
  BenchRow row;
  row.method = "dwtdct";
  row.attack = "none";
  row.n_images = 1;
  row.psnr_mean = std::numeric_limits<double>::infinity();
  r.rows.push_back(row);
  BenchSample s;
  s.image = "a.pgm";
  s.method = "dwtdct";
  s.attack = "none";
  r.samples.push_back(s);

  emit_report(r, {"csv", "md"}, tmp.file("rep"));
  std::string csv = slurp(tmp.file("rep") + ".csv");
  int lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == 2);  // header + one row
  CHECK(csv.find("inf") != std::string::npos);

  std::string md = slurp(tmp.file("rep") + ".md");
  CHECK(md.find("| dwtdct | none |") != std::string::npos);
}

TEST_CASE("bench handles image sizes that are not block multiples") {
  TempDir tmp("odd");
  write_synthetic_corpus(tmp.file("c"), 2, 100, 21);
  BenchConfig cfg = parse_bench_config(
      "{\"corpus_dir\": \"" + tmp.file("c") + "\", \"image_size\": 100, "
      "\"methods\": [\"dwtdct\"], \"attacks\": [{\"type\": \"none\"}, "
      "{\"type\": \"jpeg\", \"quality\": 50}, {\"type\": \"sadre\", \"sigma\": 0.075}, "
      "{\"type\": \"regen\", \"sigma\": 0.075}], \"seed\": 3, \"payload_len\": 16, "
      "\"output\": \"" + tmp.file("r") + "\", \"formats\": [\"csv\"]}");
  BenchResult r = run_bench(cfg);
  CHECK(r.rows.size() == 4);
  for (const auto& row : r.rows) CHECK(row.n_images == 2);
}

TEST_CASE("unreadable corpus entries are skipped and counted") {
  TempDir tmp("skip");
  write_synthetic_corpus(tmp.file("c"), 2, 128, 11);
  {
    std::ofstream f(tmp.file("c") + "/broken.pgm", std::ios::binary);
    f << "P5\n512 512\n255\n";  // header promises pixels that never come
  }
  BenchConfig cfg = parse_bench_config(bench_config_json(tmp.file("c"), tmp.file("r"), 1));
  BenchResult r = run_bench(cfg);
  CHECK(r.skipped_images == 1);
  for (const auto& row : r.rows) CHECK(row.n_images == 2);
}

TEST_CASE("corpus utilities") {
  TempDir tmp("corpus");
  auto paths = write_synthetic_corpus(tmp.file("c"), 3, 64, 9);
  CHECK(paths.size() == 3);
  auto listed = list_corpus_files(tmp.file("c"));
  CHECK(listed == paths);  // sorted

  // same seed -> same bytes; different seed -> different image
  Plane a = make_synthetic_plane(123, 64, 64);
  Plane b = make_synthetic_plane(123, 64, 64);
  Plane c = make_synthetic_plane(124, 64, 64);
  CHECK(a.data == b.data);
  CHECK(a.data != c.data);
  for (double v : a.data) {
    CHECK(v >= 0.05);
    CHECK(v <= 0.95);
  }

  // prepare: crop larger, upscale smaller
  CHECK(prepare_plane(make_synthetic_plane(1, 96, 64), 64).width == 64);
  CHECK(prepare_plane(make_synthetic_plane(2, 32, 48), 64).width == 64);
  CHECK(prepare_plane(make_synthetic_plane(3, 64, 64), 64).height == 64);

  CHECK_THROWS_AS((void)list_corpus_files(tmp.file("missing")), std::runtime_error);
}
