#pragma once

#include <cstdint>

namespace sadre::rng {

// SplitMix64 finalizer; full 64-bit avalanche.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Counter-based stream: word(seed, stream, i) is a pure function of its
// arguments, so any evaluation order (serial, per-block, threaded) yields
// identical output.
inline uint64_t word(uint64_t seed, uint64_t stream, uint64_t i) {
  return mix64(mix64(mix64(seed) ^ stream) ^ i);
}

// FNV-1a over a tag string, for naming independent streams.
inline uint64_t stream_id(const char* tag, uint64_t a = 0, uint64_t b = 0) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (const char* p = tag; *p; ++p) {
    h ^= static_cast<unsigned char>(*p);
    h *= 0x100000001b3ull;
  }
  h = mix64(h ^ a);
  return mix64(h ^ b);
}

// Uniform on the open interval (0,1); never returns 0 or 1, so inverse-CDF
// transforms stay finite.
inline double u01(uint64_t seed, uint64_t stream, uint64_t i) {
  return (static_cast<double>(word(seed, stream, i) >> 11) + 0.5) * 0x1.0p-53;
}

// Sequential view of one (seed, stream) pair, for samplers that consume a
// variable number of uniforms per draw.
struct Sequence {
  uint64_t seed = 0;
  uint64_t stream = 0;
  uint64_t counter = 0;

  double next_u01() { return u01(seed, stream, counter++); }
  uint64_t next_word() { return word(seed, stream, counter++); }
};

}  // namespace sadre::rng
