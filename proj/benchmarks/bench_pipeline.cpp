#include <benchmark/benchmark.h>

#include "sadre/attacks.hpp"
#include "sadre/corpus.hpp"
#include "sadre/diffusion.hpp"
#include "sadre/watermark.hpp"

using namespace sadre;

static void BM_Embed_DwtDct_256(benchmark::State& state) {
  Plane x = make_synthetic_plane(1, 256, 256);
  Payload p = random_payload(2, 32);
  EmbedConfig cfg = EmbedConfig::defaults(WatermarkMethod::DwtDct, 3, 32);
  for (auto _ : state) benchmark::DoNotOptimize(embed(x, p, cfg));
}
BENCHMARK(BM_Embed_DwtDct_256);

static void BM_Embed_DwtDctSvd_256(benchmark::State& state) {
  Plane x = make_synthetic_plane(1, 256, 256);
  Payload p = random_payload(2, 32);
  EmbedConfig cfg = EmbedConfig::defaults(WatermarkMethod::DwtDctSvd, 3, 32);
  for (auto _ : state) benchmark::DoNotOptimize(embed(x, p, cfg));
}
BENCHMARK(BM_Embed_DwtDctSvd_256);

static void BM_Extract_DwtDct_256(benchmark::State& state) {
  Plane x = make_synthetic_plane(1, 256, 256);
  EmbedConfig cfg = EmbedConfig::defaults(WatermarkMethod::DwtDct, 3, 32);
  Plane xw = embed(x, random_payload(2, 32), cfg);
  for (auto _ : state) benchmark::DoNotOptimize(extract(xw, cfg));
}
BENCHMARK(BM_Extract_DwtDct_256);

static void BM_SadreAttack_256(benchmark::State& state) {
  Plane x = make_synthetic_plane(1, 256, 256);
  EmbedConfig cfg = EmbedConfig::defaults(WatermarkMethod::DwtDct, 3, 32);
  Plane xw = embed(x, random_payload(2, 32), cfg);
  AttackConfig ac;
  ac.seed = 4;
  ac.sigma = 0.075;
  ac.lambda_s = 3.5;
  ac.saliency.pct_lo = 25.0;
  ac.saliency.pct_hi = 50.0;
  for (auto _ : state) benchmark::DoNotOptimize(sadre_attack(xw, ac));
}
BENCHMARK(BM_SadreAttack_256);

static void BM_JpegAttack_256_q50(benchmark::State& state) {
  Plane x = make_synthetic_plane(1, 256, 256);
  for (auto _ : state) benchmark::DoNotOptimize(jpeg_attack(x, 50));
}
BENCHMARK(BM_JpegAttack_256_q50);

BENCHMARK_MAIN();
