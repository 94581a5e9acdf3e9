#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sadre/diffusion.hpp"
#include "sadre/watermark.hpp"

namespace sadre {

// One attack column of the benchmark grid.
struct AttackSpec {
  enum class Kind { None, Jpeg, Sadre, Regen };

  Kind kind = Kind::None;
  int quality = 50;          // jpeg
  AttackConfig sadre;        // sadre
  double sigma = 0.10;       // regen
  NoiseFamily family = NoiseFamily::Laplace;  // regen

  std::string label() const;
};

struct MethodSpec {
  WatermarkMethod method = WatermarkMethod::DwtDct;
  double strength = 0.0;  // 0 -> method default
};

struct BenchConfig {
  std::string corpus_dir;
  int image_size = 256;
  std::vector<MethodSpec> methods;
  std::vector<AttackSpec> attacks;
  uint64_t seed = 0;
  int payload_len = 32;
  std::string output;                    // report base path
  std::vector<std::string> formats;      // subset of {csv, json, md}
  int threads = 1;
};

// Parse the JSON config text; unknown keys anywhere are rejected.
BenchConfig parse_bench_config(const std::string& json_text);
BenchConfig load_bench_config(const std::string& path);

struct BenchRow {
  std::string method;
  std::string attack;
  int n_images = 0;
  double psnr_mean = 0, psnr_std = 0;
  double ssim_mean = 0, ssim_std = 0;
  double wp_mean = 0, wp_std = 0;
  double bra_mean = 0, bra_std = 0;
};

// One (image, method, attack) measurement; the per-image log row.
struct BenchSample {
  std::string image;
  std::string method;
  std::string attack;
  double psnr = 0, ssim = 0, wp = 0, bra = 0;
};

struct BenchResult {
  std::vector<BenchRow> rows;        // sorted by (method, attack)
  std::vector<BenchSample> samples;  // sorted by (method, attack, image)
  int skipped_images = 0;
};

// For every (image, method, attack): embed a seeded random payload, apply the
// attack, extract, and measure. Fidelity for attack rows is taken against the
// watermarked image (the input the adversary had); the no-attack row compares
// watermarked against clean. Deterministic given the config, including across
// thread counts.
BenchResult run_bench(const BenchConfig& cfg);

// Write the aggregate report in the requested formats next to `base`
// (base.csv / base.json / base.md) and the per-image log at
// base.per_image.csv. Floats print with 4 decimals; "inf" sentinel allowed.
void emit_report(const BenchResult& result, const std::vector<std::string>& formats,
                 const std::string& base);

std::string render_csv(const std::vector<BenchRow>& rows);
std::string render_json(const std::vector<BenchRow>& rows, int skipped);
std::string render_markdown(const std::vector<BenchRow>& rows);
std::string render_per_image_csv(const std::vector<BenchSample>& samples);

// 4-decimal fixed format with "inf"/"nan" sentinels.
std::string format_metric(double v);

}  // namespace sadre
