#include "sadre/pixelio.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <stdexcept>

namespace sadre {

Plane clamp01(Plane p) {
  for (double& v : p.data) v = std::clamp(v, 0.0, 1.0);
  return p;
}

Plane crop(const Plane& p, int w, int h) {
  if (w > p.width || h > p.height || w < 1 || h < 1)
    throw std::invalid_argument("crop: target exceeds source geometry");
  Plane out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out.at(x, y) = p.at(x, y);
  return out;
}

namespace {

// Periodic reflection with edge repeat: ... 2 1 0 | 0 1 2 ... n-1 | n-1 ... 1 0 | 0 1 ...
int reflect_index(int i, int n) {
  if (n == 1) return 0;
  int period = 2 * n;
  int m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

}  // namespace

Plane pad_to_multiple(const Plane& p, int m) {
  if (m < 1) throw std::invalid_argument("pad_to_multiple: m must be >= 1");
  if (p.width < 1 || p.height < 1)
    throw std::invalid_argument("pad_to_multiple: empty plane");
  int w = (p.width + m - 1) / m * m;
  int h = (p.height + m - 1) / m * m;
  if (w == p.width && h == p.height) return p;
  Plane out(w, h);
  for (int y = 0; y < h; ++y) {
    int sy = reflect_index(y, p.height);
    for (int x = 0; x < w; ++x) out.at(x, y) = p.at(reflect_index(x, p.width), sy);
  }
  return out;
}

Plane resize_bilinear(const Plane& p, int w, int h) {
  if (w < 1 || h < 1) throw std::invalid_argument("resize_bilinear: bad target");
  if (w == p.width && h == p.height) return p;
  Plane out(w, h);
  double sx = static_cast<double>(p.width) / w;
  double sy = static_cast<double>(p.height) / h;
  for (int y = 0; y < h; ++y) {
    double fy = (y + 0.5) * sy - 0.5;
    int y0 = static_cast<int>(std::floor(fy));
    double wy = fy - y0;
    int ya = std::clamp(y0, 0, p.height - 1);
    int yb = std::clamp(y0 + 1, 0, p.height - 1);
    for (int x = 0; x < w; ++x) {
      double fx = (x + 0.5) * sx - 0.5;
      int x0 = static_cast<int>(std::floor(fx));
      double wx = fx - x0;
      int xa = std::clamp(x0, 0, p.width - 1);
      int xb = std::clamp(x0 + 1, 0, p.width - 1);
      out.at(x, y) = (1 - wy) * ((1 - wx) * p.at(xa, ya) + wx * p.at(xb, ya)) +
                     wy * ((1 - wx) * p.at(xa, yb) + wx * p.at(xb, yb));
    }
  }
  return out;
}

Plane center_crop(const Plane& p, int w, int h) {
  if (w > p.width || h > p.height)
    throw std::invalid_argument("center_crop: target exceeds source geometry");
  int ox = (p.width - w) / 2;
  int oy = (p.height - h) / 2;
  Plane out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out.at(x, y) = p.at(x + ox, y + oy);
  return out;
}

Plane to_luma(const ImageRGB& img) {
  Plane y(img.width(), img.height());
  for (size_t i = 0; i < y.size(); ++i) {
    double v = 0.299 * img.r.data[i] + 0.587 * img.g.data[i] + 0.114 * img.b.data[i];
    y.data[i] = std::clamp(v, 0.0, 1.0);
  }
  return y;
}

ImageRGB replace_luma(const ImageRGB& img, const Plane& new_y) {
  if (!img.r.same_geometry(new_y))
    throw std::invalid_argument("replace_luma: geometry mismatch");
  Plane old_y = to_luma(img);
  ImageRGB out = img;
  for (size_t i = 0; i < new_y.size(); ++i) {
    double d = new_y.data[i] - old_y.data[i];
    out.r.data[i] = std::clamp(img.r.data[i] + d, 0.0, 1.0);
    out.g.data[i] = std::clamp(img.g.data[i] + d, 0.0, 1.0);
    out.b.data[i] = std::clamp(img.b.data[i] + d, 0.0, 1.0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Netpbm (P5 / P6, maxval 255) — the bit-exact reference formats.

namespace {

bool has_suffix(const std::string& s, const std::string& suf) {
  if (s.size() < suf.size()) return false;
  std::string tail = s.substr(s.size() - suf.size());
  std::transform(tail.begin(), tail.end(), tail.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return tail == suf;
}

int read_pnm_token(std::istream& in, const std::string& path) {
  // Skips whitespace and '#' comments, then reads one unsigned integer.
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (!std::isspace(c)) {
      break;
    }
    c = in.get();
  }
  if (c == EOF || !std::isdigit(c))
    throw std::runtime_error("truncated or malformed PNM header: " + path);
  long v = 0;
  while (c != EOF && std::isdigit(c)) {
    v = v * 10 + (c - '0');
    if (v > 1 << 30) throw std::runtime_error("PNM header value out of range: " + path);
    c = in.get();
  }
  if (c != EOF) in.unget();
  return static_cast<int>(v);
}

ImageRGB load_pnm(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open file: " + path);
  char magic[2] = {0, 0};
  f.read(magic, 2);
  if (!f || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6'))
    throw std::runtime_error("unsupported PNM magic (expected P5 or P6): " + path);
  bool color = magic[1] == '6';
  int w = read_pnm_token(f, path);
  int h = read_pnm_token(f, path);
  int maxval = read_pnm_token(f, path);
  if (w < 1 || h < 1) throw std::runtime_error("bad PNM dimensions: " + path);
  if (maxval != 255)
    throw std::runtime_error("unsupported PNM bit depth (maxval must be 255): " + path);
  f.get();  // single whitespace after maxval
  size_t n = static_cast<size_t>(w) * h * (color ? 3 : 1);
  std::vector<unsigned char> raw(n);
  f.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n));
  if (!f) throw std::runtime_error("truncated PNM pixel data: " + path);

  ImageRGB img{Plane(w, h), Plane(w, h), Plane(w, h)};
  for (size_t i = 0; i < static_cast<size_t>(w) * h; ++i) {
    if (color) {
      img.r.data[i] = raw[3 * i + 0] / 255.0;
      img.g.data[i] = raw[3 * i + 1] / 255.0;
      img.b.data[i] = raw[3 * i + 2] / 255.0;
    } else {
      double v = raw[i] / 255.0;
      img.r.data[i] = img.g.data[i] = img.b.data[i] = v;
    }
  }
  return img;
}

void save_pgm(const Plane& p, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write file: " + path);
  f << "P5\n" << p.width << " " << p.height << "\n255\n";
  std::vector<unsigned char> raw(p.size());
  for (size_t i = 0; i < p.size(); ++i) raw[i] = quantize_byte(p.data[i]);
  f.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!f) throw std::runtime_error("write failure: " + path);
}

void save_ppm(const ImageRGB& img, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write file: " + path);
  f << "P6\n" << img.width() << " " << img.height() << "\n255\n";
  std::vector<unsigned char> raw(img.r.size() * 3);
  for (size_t i = 0; i < img.r.size(); ++i) {
    raw[3 * i + 0] = quantize_byte(img.r.data[i]);
    raw[3 * i + 1] = quantize_byte(img.g.data[i]);
    raw[3 * i + 2] = quantize_byte(img.b.data[i]);
  }
  f.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!f) throw std::runtime_error("write failure: " + path);
}

// ---------------------------------------------------------------------------
// PNG via libpng, 8-bit only.

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};

ImageRGB load_png(const std::string& path) {
  std::unique_ptr<std::FILE, FileCloser> fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw std::runtime_error("cannot open file: " + path);

  unsigned char sig[8];
  if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
    throw std::runtime_error("not a PNG file: " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("libpng init failure");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::runtime_error("libpng init failure");
  }
  std::vector<png_bytep> row_ptrs;
  std::vector<unsigned char> raw;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("PNG decode error: " + path);
  }
  png_init_io(png, fp.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  png_uint_32 w = png_get_image_width(png, info);
  png_uint_32 h = png_get_image_height(png, info);
  int depth = png_get_bit_depth(png, info);
  int color_type = png_get_color_type(png, info);
  if (depth == 16) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("unsupported PNG bit depth (16-bit): " + path);
  }
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(png);
  png_set_strip_alpha(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  size_t rowbytes = png_get_rowbytes(png, info);
  if (rowbytes != static_cast<size_t>(w) * 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("unexpected PNG layout after expansion: " + path);
  }
  raw.resize(static_cast<size_t>(w) * h * 3);
  row_ptrs.resize(h);
  for (png_uint_32 y = 0; y < h; ++y) row_ptrs[y] = raw.data() + static_cast<size_t>(y) * rowbytes;
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  ImageRGB img{Plane(static_cast<int>(w), static_cast<int>(h)),
               Plane(static_cast<int>(w), static_cast<int>(h)),
               Plane(static_cast<int>(w), static_cast<int>(h))};
  for (size_t i = 0; i < static_cast<size_t>(w) * h; ++i) {
    img.r.data[i] = raw[3 * i + 0] / 255.0;
    img.g.data[i] = raw[3 * i + 1] / 255.0;
    img.b.data[i] = raw[3 * i + 2] / 255.0;
  }
  return img;
}

void save_png_impl(const unsigned char* raw, int w, int h, int channels,
                   const std::string& path) {
  std::unique_ptr<std::FILE, FileCloser> fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw std::runtime_error("cannot write file: " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("libpng init failure");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("libpng init failure");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("PNG encode error: " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, w, h, 8,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < h; ++y)
    png_write_row(png, const_cast<png_bytep>(raw + static_cast<size_t>(y) * w * channels));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

bool looks_like_png(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  unsigned char sig[8] = {0};
  f.read(reinterpret_cast<char*>(sig), 8);
  return f && png_sig_cmp(sig, 0, 8) == 0;
}

}  // namespace

ImageRGB load_image(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw std::runtime_error("cannot open file: " + path);
  char magic[2] = {0, 0};
  probe.read(magic, 2);
  probe.close();
  if (magic[0] == 'P' && (magic[1] == '5' || magic[1] == '6')) return load_pnm(path);
  if (looks_like_png(path)) return load_png(path);
  throw std::runtime_error("unsupported image format (expected PGM P5, PPM P6 or PNG): " + path);
}

void save_image(const Plane& p, const std::string& path) {
  if (has_suffix(path, ".pgm")) {
    save_pgm(p, path);
  } else if (has_suffix(path, ".png")) {
    std::vector<unsigned char> raw(p.size());
    for (size_t i = 0; i < p.size(); ++i) raw[i] = quantize_byte(p.data[i]);
    save_png_impl(raw.data(), p.width, p.height, 1, path);
  } else {
    throw std::runtime_error("unsupported output extension for a plane (use .pgm or .png): " + path);
  }
}

void save_image(const ImageRGB& img, const std::string& path) {
  if (has_suffix(path, ".ppm")) {
    save_ppm(img, path);
  } else if (has_suffix(path, ".png")) {
    std::vector<unsigned char> raw(img.r.size() * 3);
    for (size_t i = 0; i < img.r.size(); ++i) {
      raw[3 * i + 0] = quantize_byte(img.r.data[i]);
      raw[3 * i + 1] = quantize_byte(img.g.data[i]);
      raw[3 * i + 2] = quantize_byte(img.b.data[i]);
    }
    save_png_impl(raw.data(), img.width(), img.height(), 3, path);
  } else if (has_suffix(path, ".pgm")) {
    throw std::runtime_error("PGM holds a single channel; save the luma plane instead: " + path);
  } else {
    throw std::runtime_error("unsupported output extension (use .ppm or .png): " + path);
  }
}

}  // namespace sadre
