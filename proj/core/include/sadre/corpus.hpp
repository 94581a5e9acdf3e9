#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sadre/plane.hpp"

namespace sadre {

// Deterministic synthetic test image: smooth bilinear base with soft blobs,
// mild mid-scale texture and a little fine grain, kept inside [0.05, 0.95]
// so embedding never clips. Seed fully determines the pixels.
Plane make_synthetic_plane(uint64_t seed, int w, int h);

// Sorted list of .pgm/.ppm/.png files directly inside dir.
std::vector<std::string> list_corpus_files(const std::string& dir);

// Normalize an arbitrary plane to size x size: center-crop when larger,
// bilinear upscale when smaller (on either axis).
Plane prepare_plane(const Plane& p, int size);

// Write `count` synthetic images (synth_000.pgm, ...) into dir; returns the
// file paths. Creates dir if needed.
std::vector<std::string> write_synthetic_corpus(const std::string& dir, int count,
                                                int size, uint64_t seed);

}  // namespace sadre
