#include "sadre/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

#include "sadre/pixelio.hpp"
#include "sadre/rng.hpp"

namespace sadre {

namespace {

// Bilinear field from a (gw+1) x (gh+1) grid of seeded control values.
Plane control_field(uint64_t seed, uint64_t stream, int w, int h, int gw, int gh,
                    double lo, double hi) {
  Plane out(w, h);
  auto control = [&](int cx, int cy) {
    double u = rng::u01(seed, stream, static_cast<uint64_t>(cy) * (gw + 1) + cx);
    return lo + (hi - lo) * u;
  };
  for (int y = 0; y < h; ++y) {
    double fy = static_cast<double>(y) * gh / h;
    int cy = static_cast<int>(fy);
    double ty = fy - cy;
    for (int x = 0; x < w; ++x) {
      double fx = static_cast<double>(x) * gw / w;
      int cx = static_cast<int>(fx);
      double tx = fx - cx;
      out.at(x, y) = (1 - ty) * ((1 - tx) * control(cx, cy) + tx * control(cx + 1, cy)) +
                     ty * ((1 - tx) * control(cx, cy + 1) + tx * control(cx + 1, cy + 1));
    }
  }
  return out;
}

}  // namespace

Plane make_synthetic_plane(uint64_t seed, int w, int h) {
  if (w < 16 || h < 16) throw std::invalid_argument("make_synthetic_plane: too small");

  // Smooth base.
  Plane img = control_field(seed, rng::stream_id("base"), w, h, 8, 8, 0.25, 0.75);

  // A few soft radial blobs.
  rng::Sequence blob{seed, rng::stream_id("blobs"), 0};
  int n_blobs = 3 + static_cast<int>(blob.next_word() % 3);
  for (int i = 0; i < n_blobs; ++i) {
    double cx = blob.next_u01() * w;
    double cy = blob.next_u01() * h;
    double radius = (0.06 + 0.12 * blob.next_u01()) * std::min(w, h);
    double amp = (blob.next_u01() - 0.5) * 0.4;
    double r2 = radius * radius;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        double dx = x - cx, dy = y - cy;
        img.at(x, y) += amp * std::exp(-(dx * dx + dy * dy) / (2.0 * r2));
      }
  }

  // Mid-scale undulation (features around 10-30 px).
  Plane mid = control_field(seed, rng::stream_id("mid"), w, h, w / 12, h / 12, -0.03, 0.03);
  for (size_t i = 0; i < img.size(); ++i) img.data[i] += mid.data[i];

  // Fine grain.
  uint64_t grain = rng::stream_id("grain");
  for (size_t i = 0; i < img.size(); ++i)
    img.data[i] += (rng::u01(seed, grain, i) - 0.5) * 0.008;

  // Keep headroom so embedding never clips.
  for (double& v : img.data) v = std::clamp(v, 0.05, 0.95);
  return img;
}

std::vector<std::string> list_corpus_files(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw std::runtime_error("corpus directory not found: " + dir);
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".pgm" || ext == ".ppm" || ext == ".png")
      files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  return files;
}

Plane prepare_plane(const Plane& p, int size) {
  Plane out = p;
  if (out.width < size || out.height < size) {
    // Upscale the short side(s), preserving as much as possible.
    int w = std::max(out.width, size);
    int h = std::max(out.height, size);
    out = resize_bilinear(out, w, h);
  }
  if (out.width > size || out.height > size) out = center_crop(out, size, size);
  return out;
}

std::vector<std::string> write_synthetic_corpus(const std::string& dir, int count,
                                                int size, uint64_t seed) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<std::string> paths;
  for (int i = 0; i < count; ++i) {
    Plane p = make_synthetic_plane(rng::mix64(seed + static_cast<uint64_t>(i)), size, size);
    char name[32];
    std::snprintf(name, sizeof(name), "synth_%03d.pgm", i);
    std::string path = (fs::path(dir) / name).string();
    save_image(p, path);
    paths.push_back(path);
  }
  return paths;
}

}  // namespace sadre
