#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "seamweld/errors.hpp"

namespace seamweld {

// H x W x 3 raster, values in [0,1], interleaved RGB.
struct ImageBuffer {
  int width = 0;
  int height = 0;
  std::vector<float> data;  // size = width * height * 3

  ImageBuffer() = default;
  ImageBuffer(int w, int h, float fill = 0.0f) : width(w), height(h) {
    if (w < 1 || h < 1) throw InvalidArgumentError("ImageBuffer: zero-dimension image");
    data.assign(static_cast<size_t>(w) * h * 3, fill);
  }

  float& at(int x, int y, int c) { return data[(static_cast<size_t>(y) * width + x) * 3 + c]; }
  float at(int x, int y, int c) const { return data[(static_cast<size_t>(y) * width + x) * 3 + c]; }

  void set_pixel(int x, int y, float r, float g, float b) {
    at(x, y, 0) = r;
    at(x, y, 1) = g;
    at(x, y, 2) = b;
  }

  bool finite_in_range() const {
    for (float v : data) {
      if (!std::isfinite(v) || v < 0.0f || v > 1.0f) return false;
    }
    return true;
  }
};

// Boolean footprint companion to an ImageBuffer (true = pixel valid).
struct BitMask {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> bits;

  BitMask() = default;
  BitMask(int w, int h, bool fill = false) : width(w), height(h) {
    if (w < 1 || h < 1) throw InvalidArgumentError("BitMask: zero-dimension mask");
    bits.assign(static_cast<size_t>(w) * h, fill ? 1 : 0);
  }

  bool at(int x, int y) const { return bits[static_cast<size_t>(y) * width + x] != 0; }
  void set(int x, int y, bool v) { bits[static_cast<size_t>(y) * width + x] = v ? 1 : 0; }

  size_t count() const {
    size_t n = 0;
    for (uint8_t b : bits) n += b;
    return n;
  }
};

// Single-channel raster (gray, saliency, difference dumps).
struct Plane {
  int width = 0;
  int height = 0;
  std::vector<float> v;

  Plane() = default;
  Plane(int w, int h, float fill = 0.0f) : width(w), height(h) {
    v.assign(static_cast<size_t>(w) * h, fill);
  }

  float& at(int x, int y) { return v[static_cast<size_t>(y) * width + x]; }
  float at(int x, int y) const { return v[static_cast<size_t>(y) * width + x]; }
};

// Quantization convention: round half away from zero.
inline uint8_t quantize8(float x) {
  long q = std::lround(255.0f * x);
  return static_cast<uint8_t>(std::clamp(q, 0L, 255L));
}

// Rec.601 luma.
inline Plane to_gray(const ImageBuffer& img) {
  Plane out(img.width, img.height);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      out.at(x, y) = 0.299f * img.at(x, y, 0) + 0.587f * img.at(x, y, 1) + 0.114f * img.at(x, y, 2);
  return out;
}

}  // namespace seamweld
