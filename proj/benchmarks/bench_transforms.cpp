#include <benchmark/benchmark.h>

#include "sadre/corpus.hpp"
#include "sadre/metrics.hpp"
#include "sadre/rng.hpp"
#include "sadre/transforms.hpp"

using namespace sadre;

namespace {

Block8 make_block() {
  Block8 b{};
  for (int i = 0; i < 64; ++i) b[i] = rng::u01(1, 2, i);
  return b;
}

}  // namespace

static void BM_Dct2(benchmark::State& state) {
  Block8 b = make_block();
  for (auto _ : state) benchmark::DoNotOptimize(dct2(b));
}
BENCHMARK(BM_Dct2);

static void BM_HaarDwt2_256(benchmark::State& state) {
  Plane p = make_synthetic_plane(1, 256, 256);
  for (auto _ : state) benchmark::DoNotOptimize(haar_dwt2(p, 3));
}
BENCHMARK(BM_HaarDwt2_256);

static void BM_SvdSmall_8x8(benchmark::State& state) {
  Mat m(8, 8);
  for (size_t i = 0; i < m.a.size(); ++i) m.a[i] = 2.0 * rng::u01(3, 4, i) - 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(svd_small(m));
}
BENCHMARK(BM_SvdSmall_8x8);

static void BM_Ssim_256(benchmark::State& state) {
  Plane a = make_synthetic_plane(5, 256, 256);
  Plane b = make_synthetic_plane(6, 256, 256);
  for (auto _ : state) benchmark::DoNotOptimize(ssim(a, b));
}
BENCHMARK(BM_Ssim_256);

static void BM_Wasserstein_256(benchmark::State& state) {
  Plane a = make_synthetic_plane(7, 256, 256);
  Plane b = make_synthetic_plane(8, 256, 256);
  for (auto _ : state) benchmark::DoNotOptimize(wasserstein(a, b, 1));
}
BENCHMARK(BM_Wasserstein_256);
