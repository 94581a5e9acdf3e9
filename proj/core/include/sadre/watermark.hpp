#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sadre/plane.hpp"

namespace sadre {

// Fixed-length bit vector carried by the watermark.
struct Payload {
  std::vector<uint8_t> bits;  // each 0 or 1
};

Payload random_payload(uint64_t seed, int len);

// Lowercase hex, 4 bits per char, bit 0 in the most significant position of
// the first char; a trailing partial nibble is zero-padded on the right.
std::string payload_to_hex(const Payload& p);

// Parse hex back to bits; len < 0 takes all 4*chars bits.
Payload payload_from_hex(const std::string& hex, int len = -1);

enum class WatermarkMethod { DwtDct, DwtDctSvd };

WatermarkMethod method_from_name(const std::string& name);
std::string method_name(WatermarkMethod m);

// strength is the PN amplitude k for DwtDct and the quantization step dq for
// DwtDctSvd, both in [0,1] intensity units.
struct EmbedConfig {
  WatermarkMethod method = WatermarkMethod::DwtDct;
  double strength = 0.0;
  uint64_t seed = 0;
  int payload_len = 32;

  static EmbedConfig defaults(WatermarkMethod m, uint64_t seed, int payload_len = 32);
};

double default_strength(WatermarkMethod m);

// Both methods work on 8x8 DCT blocks of the 1-level Haar HL subband:
//   DwtDct    — adds strength * (+-1 PN) at the 12 mid-band zig-zag positions;
//               extraction correlates against the same PN and takes the sign.
//   DwtDctSvd — QIM on the leading singular value of the coefficient block:
//               bit 0 snaps s1 to an even multiple of strength, bit 1 to odd.
// Blocks are assigned to payload bits round-robin after a seeded shuffle,
// at most 4 blocks per bit; extraction majority-votes, ties toward bit 0.
Plane embed(const Plane& x, const Payload& payload, const EmbedConfig& cfg);

// Blind extraction: needs only the config used at embed time.
Payload extract(const Plane& xw, const EmbedConfig& cfg);

// Bit Recovery Accuracy: fraction of agreeing positions. Lengths must match.
double bra(const Payload& recovered, const Payload& original);

// Smallest square side that fits payload_len blocks.
int min_side_for_payload(int payload_len);

}  // namespace sadre
