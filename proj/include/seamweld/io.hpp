#pragma once

#include <png.h>

#include <cstdio>
#include <cstring>
#include <memory>
#include <string>

#include "seamweld/image.hpp"

namespace seamweld {

namespace detail {

inline bool has_suffix(const std::string& s, const char* suf) {
  size_t n = std::strlen(suf);
  if (s.size() < n) return false;
  std::string tail = s.substr(s.size() - n);
  for (char& c : tail) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return tail == suf;
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// --- PNG ---------------------------------------------------------------

struct PngReadGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReadGuard() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
  }
};

struct PngWriteGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriteGuard() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
  }
};

// Reads any PNG as 16-bit RGBA rows; alpha (if the file has one) is reported.
inline ImageBuffer load_png(const std::string& path, BitMask* alpha_mask) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw IoError("cannot open file for reading: " + path);

  unsigned char sig[8];
  if (std::fread(sig, 1, 8, f.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
    throw FormatError("not a PNG file: " + path);

  PngReadGuard g;
  g.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!g.png) throw Error("libpng init failed");
  g.info = png_create_info_struct(g.png);
  if (!g.info) throw Error("libpng init failed");
  if (setjmp(png_jmpbuf(g.png))) throw FormatError("corrupt PNG file: " + path);

  png_init_io(g.png, f.get());
  png_set_sig_bytes(g.png, 8);
  png_read_info(g.png, g.info);

  png_uint_32 w = png_get_image_width(g.png, g.info);
  png_uint_32 h = png_get_image_height(g.png, g.info);
  if (w == 0 || h == 0) throw FormatError("zero-dimension image: " + path);
  int color = png_get_color_type(g.png, g.info);
  bool had_alpha = (color & PNG_COLOR_MASK_ALPHA) != 0 ||
                   png_get_valid(g.png, g.info, PNG_INFO_tRNS) != 0;

  // Normalize everything to 16-bit RGBA.
  png_set_expand(g.png);
  if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(g.png);
  if (png_get_bit_depth(g.png, g.info) < 16) png_set_expand_16(g.png);
  png_set_add_alpha(g.png, 0xFFFF, PNG_FILLER_AFTER);
  png_read_update_info(g.png, g.info);

  std::vector<uint16_t> row(static_cast<size_t>(w) * 4);
  ImageBuffer img(static_cast<int>(w), static_cast<int>(h));
  BitMask mask(static_cast<int>(w), static_cast<int>(h), true);
  for (png_uint_32 y = 0; y < h; ++y) {
    png_read_row(g.png, reinterpret_cast<png_bytep>(row.data()), nullptr);
    for (png_uint_32 x = 0; x < w; ++x) {
      // libpng emits 16-bit samples in network byte order.
      auto sample = [&](int c) {
        auto* b = reinterpret_cast<unsigned char*>(&row[x * 4 + c]);
        return static_cast<uint16_t>((b[0] << 8) | b[1]);
      };
      img.at(static_cast<int>(x), static_cast<int>(y), 0) = sample(0) / 65535.0f;
      img.at(static_cast<int>(x), static_cast<int>(y), 1) = sample(1) / 65535.0f;
      img.at(static_cast<int>(x), static_cast<int>(y), 2) = sample(2) / 65535.0f;
      if (had_alpha) mask.set(static_cast<int>(x), static_cast<int>(y), sample(3) != 0);
    }
  }
  png_read_end(g.png, nullptr);
  if (alpha_mask && had_alpha) *alpha_mask = std::move(mask);
  return img;
}

inline void save_png(const ImageBuffer& img, const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw IoError("cannot open file for writing: " + path);

  PngWriteGuard g;
  g.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!g.png) throw Error("libpng init failed");
  g.info = png_create_info_struct(g.png);
  if (!g.info) throw Error("libpng init failed");
  if (setjmp(png_jmpbuf(g.png))) throw IoError("PNG write failed: " + path);

  png_init_io(g.png, f.get());
  png_set_IHDR(g.png, g.info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(g.png, g.info);

  std::vector<uint8_t> row(static_cast<size_t>(img.width) * 3);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < 3; ++c) row[x * 3 + c] = quantize8(img.at(x, y, c));
    png_write_row(g.png, row.data());
  }
  png_write_end(g.png, nullptr);
}

inline void save_png_gray(const Plane& p, const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw IoError("cannot open file for writing: " + path);

  PngWriteGuard g;
  g.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!g.png) throw Error("libpng init failed");
  g.info = png_create_info_struct(g.png);
  if (!g.info) throw Error("libpng init failed");
  if (setjmp(png_jmpbuf(g.png))) throw IoError("PNG write failed: " + path);

  png_init_io(g.png, f.get());
  png_set_IHDR(g.png, g.info, p.width, p.height, 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(g.png, g.info);

  std::vector<uint8_t> row(static_cast<size_t>(p.width));
  for (int y = 0; y < p.height; ++y) {
    for (int x = 0; x < p.width; ++x) row[x] = quantize8(p.at(x, y));
    png_write_row(g.png, row.data());
  }
  png_write_end(g.png, nullptr);
}

// --- PPM (P6, 8-bit) ----------------------------------------------------

inline int ppm_token(std::FILE* f) {
  // Skips whitespace and '#' comments, returns a nonnegative integer.
  int c = std::fgetc(f);
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = std::fgetc(f);
    } else if (std::isspace(c)) {
      c = std::fgetc(f);
    } else {
      break;
    }
  }
  if (c == EOF || !std::isdigit(c)) return -1;
  int v = 0;
  while (c != EOF && std::isdigit(c)) {
    v = v * 10 + (c - '0');
    c = std::fgetc(f);
  }
  return v;
}

inline ImageBuffer load_ppm(const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw IoError("cannot open file for reading: " + path);
  char magic[2];
  if (std::fread(magic, 1, 2, f.get()) != 2 || magic[0] != 'P' || magic[1] != '6')
    throw FormatError("not a binary PPM (P6) file: " + path);
  int w = ppm_token(f.get());
  int h = ppm_token(f.get());
  int maxval = ppm_token(f.get());
  if (w < 0 || h < 0 || maxval < 0) throw FormatError("malformed PPM header: " + path);
  if (w == 0 || h == 0) throw FormatError("zero-dimension image: " + path);
  if (maxval != 255) throw FormatError("unsupported PPM maxval (expected 255): " + path);

  ImageBuffer img(w, h);
  std::vector<uint8_t> row(static_cast<size_t>(w) * 3);
  for (int y = 0; y < h; ++y) {
    if (std::fread(row.data(), 1, row.size(), f.get()) != row.size())
      throw FormatError("truncated PPM data: " + path);
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = row[x * 3 + c] / 255.0f;
  }
  return img;
}

inline void save_ppm(const ImageBuffer& img, const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw IoError("cannot open file for writing: " + path);
  std::fprintf(f.get(), "P6\n%d %d\n255\n", img.width, img.height);
  std::vector<uint8_t> row(static_cast<size_t>(img.width) * 3);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < 3; ++c) row[x * 3 + c] = quantize8(img.at(x, y, c));
    if (std::fwrite(row.data(), 1, row.size(), f.get()) != row.size())
      throw IoError("PPM write failed: " + path);
  }
}

}  // namespace detail

// Loads an 8/16-bit RGB image (PNG or binary PPM), scaled to [0,1].
// A PNG alpha channel, when present, is imported into *alpha_mask (nonzero
// alpha = valid pixel); the mask is left untouched otherwise.
inline ImageBuffer load_image(const std::string& path, BitMask* alpha_mask = nullptr) {
  std::FILE* probe = std::fopen(path.c_str(), "rb");
  if (!probe) throw IoError("cannot open file for reading: " + path);
  unsigned char head[2] = {0, 0};
  size_t got = std::fread(head, 1, 2, probe);
  std::fclose(probe);
  if (got == 2 && head[0] == 0x89 && head[1] == 'P') return detail::load_png(path, alpha_mask);
  if (got == 2 && head[0] == 'P' && head[1] == '6') return detail::load_ppm(path);
  throw FormatError("unsupported image format: " + path);
}

// Lossless 8-bit output; format chosen by extension (.png or .ppm).
inline void save_image(const ImageBuffer& img, const std::string& path) {
  if (detail::has_suffix(path, ".ppm"))
    detail::save_ppm(img, path);
  else
    detail::save_png(img, path);
}

// Grayscale PNG dump of a [0,1] plane.
inline void save_plane(const Plane& p, const std::string& path) { detail::save_png_gray(p, path); }

// Mask file: grayscale (or color) image, nonzero = inside.
inline BitMask load_mask(const std::string& path) {
  ImageBuffer img = load_image(path);
  BitMask m(img.width, img.height);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      m.set(x, y, img.at(x, y, 0) > 0.0f || img.at(x, y, 1) > 0.0f || img.at(x, y, 2) > 0.0f);
  return m;
}

}  // namespace seamweld
