#include "sadre/watermark.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sadre/pixelio.hpp"
#include "sadre/rng.hpp"
#include "sadre/transforms.hpp"

namespace sadre {

namespace {

constexpr int kMaxRedundancy = 4;    // blocks per payload bit, at most
constexpr int kMinSide = 64;

struct BlockGrid {
  Plane hl;            // HL subband of a 1-level Haar decomposition
  Subbands bands;      // full decomposition (for synthesis)
  int bw = 0, bh = 0;  // block grid dimensions
  int pad_w = 0, pad_h = 0;
  int orig_w = 0, orig_h = 0;
};

BlockGrid analyze(const Plane& x) {
  BlockGrid g;
  g.orig_w = x.width;
  g.orig_h = x.height;
  Plane padded = pad_to_multiple(x, 2);
  g.pad_w = padded.width;
  g.pad_h = padded.height;
  g.bands = haar_dwt2(padded, 1);
  g.hl = g.bands.detail[0].hl;
  g.bw = g.hl.width / 8;
  g.bh = g.hl.height / 8;
  return g;
}

Block8 read_block(const Plane& p, int bx, int by) {
  Block8 b{};
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) b[y * 8 + x] = p.at(bx * 8 + x, by * 8 + y);
  return b;
}

void write_block(Plane& p, int bx, int by, const Block8& b) {
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) p.at(bx * 8 + x, by * 8 + y) = b[y * 8 + x];
}

// Per-block PN sequence over the 12 mid-band positions, derived from
// (seed, block index) so parallel and serial embedding agree.
std::array<int, 12> block_pn(uint64_t seed, int block_index) {
  std::array<int, 12> pn{};
  uint64_t stream = rng::stream_id("dwtdct_pn", static_cast<uint64_t>(block_index));
  for (int i = 0; i < 12; ++i)
    pn[i] = (rng::word(seed, stream, static_cast<uint64_t>(i)) & 1) ? 1 : -1;
  return pn;
}

// Seeded Fisher-Yates permutation of block indices, then the first
// redundancy * payload_len entries are assigned round-robin to bits:
// shuffled[i] carries bit (i % payload_len).
std::vector<int> block_assignment(uint64_t seed, int n_blocks, int payload_len,
                                  int* redundancy_out) {
  std::vector<int> order(n_blocks);
  for (int i = 0; i < n_blocks; ++i) order[i] = i;
  rng::Sequence seq{seed, rng::stream_id("block_shuffle"), 0};
  for (int i = n_blocks - 1; i > 0; --i) {
    int j = static_cast<int>(seq.next_word() % static_cast<uint64_t>(i + 1));
    std::swap(order[i], order[j]);
  }
  int redundancy = std::min(kMaxRedundancy, n_blocks / payload_len);
  *redundancy_out = redundancy;
  order.resize(static_cast<size_t>(redundancy) * payload_len);
  return order;
}

void require_capacity(const Plane& x, const EmbedConfig& cfg) {
  if (cfg.payload_len < 1) throw std::invalid_argument("payload length must be >= 1");
  if (x.width < kMinSide || x.height < kMinSide)
    throw std::invalid_argument("plane too small for watermarking: minimum side is 64");
  BlockGrid probe;
  int bw = ((x.width + 1) / 2) / 8;
  int bh = ((x.height + 1) / 2) / 8;
  if (bw * bh < cfg.payload_len)
    throw std::invalid_argument(
        "image too small for payload: need at least " +
        std::to_string(min_side_for_payload(cfg.payload_len)) + "x" +
        std::to_string(min_side_for_payload(cfg.payload_len)) + " pixels");
  (void)probe;
}

// QIM lattice: bit 0 -> nearest even multiple of dq, bit 1 -> nearest odd.
// Non-negative by construction. When the snapped value falls below the second
// singular value, extraction will read that one instead, so the snap may stay
// below it only if it already decodes to the right parity; otherwise climb to
// the first correct-parity point above.
double snap_sigma1(double s1, double s2, int bit, double dq) {
  double m = s1 / dq;
  double target;
  if (bit == 0) {
    target = 2.0 * std::round(m / 2.0);
  } else {
    target = 2.0 * std::round((m - 1.0) / 2.0) + 1.0;
  }
  double snapped = target * dq;
  while (snapped < 0.0) snapped += 2.0 * dq;
  if (snapped < s2 && std::lround(s2 / dq) % 2 != bit) {
    while (snapped < s2) snapped += 2.0 * dq;
  }
  return snapped;
}

}  // namespace

Payload random_payload(uint64_t seed, int len) {
  if (len < 1) throw std::invalid_argument("payload length must be >= 1");
  Payload p;
  p.bits.resize(len);
  uint64_t stream = rng::stream_id("payload");
  for (int i = 0; i < len; ++i)
    p.bits[i] = static_cast<uint8_t>(rng::word(seed, stream, static_cast<uint64_t>(i)) & 1);
  return p;
}

std::string payload_to_hex(const Payload& p) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (size_t i = 0; i < p.bits.size(); i += 4) {
    int nibble = 0;
    for (size_t j = 0; j < 4; ++j) {
      nibble <<= 1;
      if (i + j < p.bits.size() && p.bits[i + j]) nibble |= 1;
    }
    out.push_back(digits[nibble]);
  }
  return out;
}

Payload payload_from_hex(const std::string& hex, int len) {
  Payload p;
  for (char c : hex) {
    int nibble;
    if (c >= '0' && c <= '9') nibble = c - '0';
    else if (c >= 'a' && c <= 'f') nibble = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') nibble = c - 'A' + 10;
    else throw std::invalid_argument("invalid hex digit in payload");
    for (int j = 3; j >= 0; --j) p.bits.push_back(static_cast<uint8_t>((nibble >> j) & 1));
  }
  if (len >= 0) {
    if (static_cast<size_t>(len) > p.bits.size())
      throw std::invalid_argument("hex payload shorter than requested length");
    p.bits.resize(len);
  }
  return p;
}

WatermarkMethod method_from_name(const std::string& name) {
  if (name == "dwtdct") return WatermarkMethod::DwtDct;
  if (name == "dwtdctsvd") return WatermarkMethod::DwtDctSvd;
  throw std::invalid_argument("unknown watermark method: " + name +
                              " (expected dwtdct or dwtdctsvd)");
}

std::string method_name(WatermarkMethod m) {
  return m == WatermarkMethod::DwtDct ? "dwtdct" : "dwtdctsvd";
}

double default_strength(WatermarkMethod m) {
  return m == WatermarkMethod::DwtDct ? 0.04 : 0.12;
}

EmbedConfig EmbedConfig::defaults(WatermarkMethod m, uint64_t seed, int payload_len) {
  EmbedConfig cfg;
  cfg.method = m;
  cfg.strength = default_strength(m);
  cfg.seed = seed;
  cfg.payload_len = payload_len;
  return cfg;
}

int min_side_for_payload(int payload_len) {
  // need bw * bh >= payload_len with bw = side/16 blocks
  int side = 64;
  while ((side / 16) * (side / 16) < payload_len) side += 16;
  return side;
}

Plane embed(const Plane& x, const Payload& payload, const EmbedConfig& cfg) {
  if (static_cast<int>(payload.bits.size()) != cfg.payload_len)
    throw std::invalid_argument("payload length does not match config");
  if (cfg.strength < 0.0) throw std::invalid_argument("strength must be >= 0");
  if (cfg.method == WatermarkMethod::DwtDctSvd && cfg.strength <= 0.0)
    throw std::invalid_argument("DwtDctSvd requires strength > 0");
  require_capacity(x, cfg);

  BlockGrid g = analyze(x);
  int redundancy = 0;
  std::vector<int> assigned = block_assignment(cfg.seed, g.bw * g.bh, cfg.payload_len, &redundancy);

  for (size_t i = 0; i < assigned.size(); ++i) {
    int block = assigned[i];
    int bit = payload.bits[i % cfg.payload_len];
    int bx = block % g.bw, by = block / g.bw;
    Block8 coeffs = dct2(read_block(g.hl, bx, by));

    if (cfg.method == WatermarkMethod::DwtDct) {
      auto pn = block_pn(cfg.seed, block);
      double s = bit ? 1.0 : -1.0;
      const auto& mid = midband_positions();
      for (int k = 0; k < 12; ++k) coeffs[mid[k]] += cfg.strength * s * pn[k];
    } else {
      Mat m(8, 8);
      std::copy(coeffs.begin(), coeffs.end(), m.a.begin());
      Svd svd = svd_small(m);
      double s2 = svd.s.size() > 1 ? svd.s[1] : 0.0;
      svd.s[0] = snap_sigma1(svd.s[0], s2, bit, cfg.strength);
      Mat sm(8, 8);
      for (int k = 0; k < 8; ++k) sm.at(k, k) = svd.s[k];
      Mat rebuilt = matmul(matmul(svd.u, sm), svd.vt);
      std::copy(rebuilt.a.begin(), rebuilt.a.end(), coeffs.begin());
    }
    write_block(g.hl, bx, by, idct2(coeffs));
  }

  g.bands.detail[0].hl = g.hl;
  Plane out = haar_idwt2(g.bands);
  out = crop(out, g.orig_w, g.orig_h);
  return clamp01(std::move(out));
}

Payload extract(const Plane& xw, const EmbedConfig& cfg) {
  require_capacity(xw, cfg);
  BlockGrid g = analyze(xw);
  int redundancy = 0;
  std::vector<int> assigned = block_assignment(cfg.seed, g.bw * g.bh, cfg.payload_len, &redundancy);

  // votes[bit] accumulates +1 for a decoded 1, -1 for a decoded 0.
  std::vector<int> votes(cfg.payload_len, 0);
  for (size_t i = 0; i < assigned.size(); ++i) {
    int block = assigned[i];
    int bit_index = static_cast<int>(i % cfg.payload_len);
    int bx = block % g.bw, by = block / g.bw;
    Block8 coeffs = dct2(read_block(g.hl, bx, by));

    if (cfg.method == WatermarkMethod::DwtDct) {
      auto pn = block_pn(cfg.seed, block);
      const auto& mid = midband_positions();
      double corr = 0;
      for (int k = 0; k < 12; ++k) corr += coeffs[mid[k]] * pn[k];
      if (corr > 0) votes[bit_index] += 1;
      else if (corr < 0) votes[bit_index] -= 1;
    } else {
      Mat m(8, 8);
      std::copy(coeffs.begin(), coeffs.end(), m.a.begin());
      Svd svd = svd_small(m);
      long q = std::lround(svd.s[0] / cfg.strength);
      votes[bit_index] += (q % 2 != 0) ? 1 : -1;
    }
  }

  Payload out;
  out.bits.resize(cfg.payload_len);
  for (int i = 0; i < cfg.payload_len; ++i) out.bits[i] = votes[i] > 0 ? 1 : 0;  // ties -> 0
  return out;
}

double bra(const Payload& recovered, const Payload& original) {
  if (recovered.bits.size() != original.bits.size())
    throw std::invalid_argument("bra: payload length mismatch");
  if (recovered.bits.empty()) throw std::invalid_argument("bra: empty payloads");
  size_t agree = 0;
  for (size_t i = 0; i < recovered.bits.size(); ++i)
    if (recovered.bits[i] == original.bits[i]) ++agree;
  return static_cast<double>(agree) / static_cast<double>(recovered.bits.size());
}

}  // namespace sadre
