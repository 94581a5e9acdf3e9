#include <doctest.h>

#include <algorithm>
#include <limits>

#include "sadre/corpus.hpp"
#include "sadre/metrics.hpp"
#include "sadre/pixelio.hpp"
#include "sadre/watermark.hpp"
#include "test_support.hpp"

using namespace sadre;

namespace {

Plane test_image(uint64_t seed, int side = 256) { return make_synthetic_plane(seed, side, side); }

}  // namespace

TEST_CASE("hex payload codec") {
  Payload p = random_payload(3, 32);
  std::string hex = payload_to_hex(p);
  CHECK(hex.size() == 8);
  Payload back = payload_from_hex(hex, 32);
  CHECK(back.bits == p.bits);

  Payload odd = random_payload(4, 10);  // partial nibble
  CHECK(payload_from_hex(payload_to_hex(odd), 10).bits == odd.bits);

  CHECK_THROWS_AS((void)payload_from_hex("xyz"), std::invalid_argument);
}

TEST_CASE("bra counts agreeing positions") {
  Payload a = random_payload(5, 32);
  Payload b = a;
  CHECK(bra(a, b) == 1.0);
  for (auto& bit : b.bits) bit ^= 1;
  CHECK(bra(a, b) == 0.0);
  b = a;
  for (int i = 0; i < 8; ++i) b.bits[i] ^= 1;
  CHECK(bra(a, b) == doctest::Approx(0.75));
  CHECK_THROWS_AS((void)bra(a, random_payload(6, 16)), std::invalid_argument);
}

TEST_CASE("embedding keeps PSNR above 38 dB at defaults") {
  Plane x = test_image(100);
  Payload p = random_payload(7, 32);
  for (auto method : {WatermarkMethod::DwtDct, WatermarkMethod::DwtDctSvd}) {
    Plane xw = embed(x, p, EmbedConfig::defaults(method, 11, 32));
    CHECK(psnr(x, xw) >= 38.0);
  }
}

TEST_CASE("zero-strength DwtDct embedding is invisible after quantization") {
  Plane x = test_image(101);
  Payload p = random_payload(8, 32);
  EmbedConfig cfg = EmbedConfig::defaults(WatermarkMethod::DwtDct, 12, 32);
  cfg.strength = 0.0;
  Plane xw = embed(x, p, cfg);
  for (size_t i = 0; i < x.size(); ++i)
    CHECK(quantize_byte(xw.data[i]) == quantize_byte(x.data[i]));
}

TEST_CASE("different seeds give different marked planes") {
  Plane x = test_image(102);
  Payload p = random_payload(9, 32);
  Plane a = embed(x, p, EmbedConfig::defaults(WatermarkMethod::DwtDct, 1, 32));
  Plane b = embed(x, p, EmbedConfig::defaults(WatermarkMethod::DwtDct, 2, 32));
  CHECK(testsup::max_abs_diff(a, b) > 0.0);
}

TEST_CASE("round trip recovers the payload exactly on 20 images") {
  for (auto method : {WatermarkMethod::DwtDct, WatermarkMethod::DwtDctSvd}) {
    double total = 0;
    for (uint64_t i = 0; i < 20; ++i) {
      Plane x = test_image(200 + i);
      Payload p = random_payload(300 + i, 32);
      EmbedConfig cfg = EmbedConfig::defaults(method, 400 + i, 32);
      total += bra(extract(embed(x, p, cfg), cfg), p);
    }
    CHECK(total / 20.0 == doctest::Approx(1.0));
  }
}

TEST_CASE("round trip holds at 128x128 and 64-bit payloads") {
  for (auto method : {WatermarkMethod::DwtDct, WatermarkMethod::DwtDctSvd}) {
    Plane x = test_image(210, 128);
    Payload p = random_payload(211, 64);
    EmbedConfig cfg = EmbedConfig::defaults(method, 212, 64);
    CHECK(bra(extract(embed(x, p, cfg), cfg), p) == 1.0);
  }
}

TEST_CASE("extraction from clean images is chance level") {
  double total = 0;
  int n = 50;
  for (uint64_t i = 0; i < static_cast<uint64_t>(n); ++i) {
    Plane x = test_image(500 + i, 128);
    Payload p = random_payload(600 + i, 32);
    EmbedConfig cfg = EmbedConfig::defaults(WatermarkMethod::DwtDct, 700 + i, 32);
    total += bra(extract(x, cfg), p);
  }
  CHECK(total / n == doctest::Approx(0.5).epsilon(0.3));  // 0.5 +- 0.15
}

TEST_CASE("round trip survives one quantization step of uniform noise") {
  for (auto method : {WatermarkMethod::DwtDct, WatermarkMethod::DwtDctSvd}) {
    Plane x = test_image(220);
    Payload p = random_payload(221, 32);
    EmbedConfig cfg = EmbedConfig::defaults(method, 222, 32);
    Plane xw = embed(x, p, cfg);
    for (size_t i = 0; i < xw.size(); ++i) {
      double u = rng::u01(223, 0xabc, i) * 2.0 - 1.0;
      xw.data[i] = std::clamp(xw.data[i] + u / 255.0, 0.0, 1.0);
    }
    CHECK(bra(extract(xw, cfg), p) == 1.0);
  }
}

TEST_CASE("embedding distortion is monotone in strength") {
  Plane x = test_image(230);
  Payload p = random_payload(231, 32);
  double prev = std::numeric_limits<double>::infinity();
  for (double k : {0.01, 0.02, 0.04, 0.08, 0.16}) {
    EmbedConfig cfg = EmbedConfig::defaults(WatermarkMethod::DwtDct, 232, 32);
    cfg.strength = k;
    double v = psnr(x, embed(x, p, cfg));
    CHECK(v <= prev + 1e-9);
    prev = v;
  }
}

TEST_CASE("images below capacity are rejected with the minimum size") {
  Payload p = random_payload(240, 32);
  EmbedConfig cfg = EmbedConfig::defaults(WatermarkMethod::DwtDct, 241, 32);
  Plane tiny(48, 48, 0.5);
  CHECK_THROWS_AS((void)embed(tiny, p, cfg), std::invalid_argument);

  Plane small64(64, 64, 0.5);  // 16 blocks < 32 bits
  CHECK_THROWS_WITH_AS((void)embed(small64, p, cfg),
                       doctest::Contains(std::to_string(min_side_for_payload(32)).c_str()),
                       std::invalid_argument);
}
