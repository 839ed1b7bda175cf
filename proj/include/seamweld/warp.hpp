#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "seamweld/image.hpp"

namespace seamweld {

// 3x3 homography acting on homogeneous pixel coordinates (x, y, 1).
struct Homography {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static Homography identity() { return Homography{}; }

  static Homography translation(double tx, double ty) {
    Homography h;
    h.m = {1, 0, tx, 0, 1, ty, 0, 0, 1};
    return h;
  }

  // Plain text: nine whitespace-separated decimals, row-major.
  static Homography from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open homography file: " + path);
    Homography h;
    for (double& v : h.m) {
      if (!(in >> v)) throw FormatError("homography file needs nine decimals: " + path);
    }
    return h;
  }

  double det() const {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
  }

  bool invertible() const {
    Homography n = *this;
    if (m[8] != 0.0) {
      for (double& v : n.m) v /= m[8];
    }
    return std::abs(n.det()) > 1e-12;
  }

  Homography inverse() const {
    double d = det();
    if (!invertible()) throw InvalidArgumentError("degenerate homography");
    const auto& a = m;
    Homography r;
    r.m = {(a[4] * a[8] - a[5] * a[7]) / d, (a[2] * a[7] - a[1] * a[8]) / d,
           (a[1] * a[5] - a[2] * a[4]) / d, (a[5] * a[6] - a[3] * a[8]) / d,
           (a[0] * a[8] - a[2] * a[6]) / d, (a[2] * a[3] - a[0] * a[5]) / d,
           (a[3] * a[7] - a[4] * a[6]) / d, (a[1] * a[6] - a[0] * a[7]) / d,
           (a[0] * a[4] - a[1] * a[3]) / d};
    return r;
  }

  // Maps (x, y) through the homography; returns false on w ~ 0.
  bool apply(double x, double y, double& ox, double& oy) const {
    double w = m[6] * x + m[7] * y + m[8];
    if (std::abs(w) < 1e-12) return false;
    ox = (m[0] * x + m[1] * y + m[2]) / w;
    oy = (m[3] * x + m[4] * y + m[5]) / w;
    return true;
  }
};

// Both images placed on one shared canvas with their footprints.
struct AlignedPair {
  int canvas_w = 0;
  int canvas_h = 0;
  ImageBuffer img0, img1;
  BitMask mask0, mask1;
};

struct WarpResult {
  ImageBuffer image;
  BitMask mask;
  int origin_x = 0;  // canvas (0,0) in reference-frame coordinates
  int origin_y = 0;
};

// Inverse-mapped bilinear warp of src by h into the reference frame whose
// extent is ref_w x ref_h. Canvas = bounding box of the reference extent
// union the warped source corners. A pixel is valid only when every bilinear
// tap with nonzero weight lands inside the source.
inline WarpResult warp_image(const ImageBuffer& src, const Homography& h, int ref_w, int ref_h) {
  if (!h.invertible()) throw InvalidArgumentError("degenerate homography");

  double min_x = 0.0, min_y = 0.0;
  double max_x = ref_w - 1.0, max_y = ref_h - 1.0;
  const double cx[4] = {0.0, double(src.width - 1), 0.0, double(src.width - 1)};
  const double cy[4] = {0.0, 0.0, double(src.height - 1), double(src.height - 1)};
  for (int i = 0; i < 4; ++i) {
    double wx, wy;
    if (!h.apply(cx[i], cy[i], wx, wy)) throw InvalidArgumentError("degenerate homography");
    min_x = std::min(min_x, wx);
    min_y = std::min(min_y, wy);
    max_x = std::max(max_x, wx);
    max_y = std::max(max_y, wy);
  }

  int ox = static_cast<int>(std::floor(min_x));
  int oy = static_cast<int>(std::floor(min_y));
  int cw = static_cast<int>(std::ceil(max_x)) - ox + 1;
  int ch = static_cast<int>(std::ceil(max_y)) - oy + 1;

  Homography hinv = h.inverse();
  WarpResult out;
  out.image = ImageBuffer(cw, ch);
  out.mask = BitMask(cw, ch);
  out.origin_x = ox;
  out.origin_y = oy;

  size_t valid = 0;
  for (int y = 0; y < ch; ++y) {
    for (int x = 0; x < cw; ++x) {
      double sx, sy;
      if (!hinv.apply(x + ox, y + oy, sx, sy)) continue;
      int x0 = static_cast<int>(std::floor(sx));
      int y0 = static_cast<int>(std::floor(sy));
      double fx = sx - x0, fy = sy - y0;
      // Exact-integer coordinates need only the single tap they hit.
      int x1 = (fx == 0.0) ? x0 : x0 + 1;
      int y1 = (fy == 0.0) ? y0 : y0 + 1;
      if (x0 < 0 || y0 < 0 || x1 >= src.width || y1 >= src.height) continue;
      for (int c = 0; c < 3; ++c) {
        double v00 = src.at(x0, y0, c), v10 = src.at(x1, y0, c);
        double v01 = src.at(x0, y1, c), v11 = src.at(x1, y1, c);
        double v = (1 - fy) * ((1 - fx) * v00 + fx * v10) + fy * ((1 - fx) * v01 + fx * v11);
        out.image.at(x, y, c) = static_cast<float>(std::clamp(v, 0.0, 1.0));
      }
      out.mask.set(x, y, true);
      ++valid;
    }
  }
  if (valid < 1) throw InvalidArgumentError("warped area collapses to < 1 pixel");
  return out;
}

// Places the two inputs on one canvas. Either h is given (img1 is warped into
// img0's frame) or both masks are given (images already share a canvas).
inline AlignedPair make_aligned_pair(const ImageBuffer& img0, const ImageBuffer& img1,
                                     const std::optional<Homography>& h,
                                     const std::optional<BitMask>& mask0,
                                     const std::optional<BitMask>& mask1) {
  AlignedPair pair;
  if (h.has_value()) {
    WarpResult w = warp_image(img1, *h, img0.width, img0.height);
    pair.canvas_w = w.image.width;
    pair.canvas_h = w.image.height;
    pair.img1 = std::move(w.image);
    pair.mask1 = std::move(w.mask);
    pair.img0 = ImageBuffer(pair.canvas_w, pair.canvas_h);
    pair.mask0 = BitMask(pair.canvas_w, pair.canvas_h);
    for (int y = 0; y < img0.height; ++y) {
      for (int x = 0; x < img0.width; ++x) {
        int dx = x - w.origin_x, dy = y - w.origin_y;
        for (int c = 0; c < 3; ++c) pair.img0.at(dx, dy, c) = img0.at(x, y, c);
        pair.mask0.set(dx, dy, true);
      }
    }
  } else if (mask0.has_value() && mask1.has_value()) {
    if (img0.width != img1.width || img0.height != img1.height ||
        mask0->width != img0.width || mask0->height != img0.height ||
        mask1->width != img0.width || mask1->height != img0.height)
      throw InvalidArgumentError("mask-aligned inputs must share canvas dimensions");
    pair.canvas_w = img0.width;
    pair.canvas_h = img0.height;
    pair.img0 = img0;
    pair.img1 = img1;
    pair.mask0 = *mask0;
    pair.mask1 = *mask1;
  } else {
    throw InvalidArgumentError("need a homography or two masks to align images");
  }

  bool any = false;
  for (size_t i = 0; i < pair.mask0.bits.size() && !any; ++i)
    any = pair.mask0.bits[i] && pair.mask1.bits[i];
  if (!any) throw NoOverlapError("no overlap between image footprints");
  return pair;
}

// Footprint intersection P = mask0 AND mask1.
inline BitMask overlap_mask(const AlignedPair& pair) {
  BitMask m(pair.canvas_w, pair.canvas_h);
  for (size_t i = 0; i < m.bits.size(); ++i)
    m.bits[i] = pair.mask0.bits[i] && pair.mask1.bits[i];
  return m;
}

// Area-average downscale so that max(w, h) <= max_dim; masks shrink to pixels
// fully covered by valid source pixels.
inline AlignedPair downscale_pair(const AlignedPair& pair, int max_dim) {
  int longest = std::max(pair.canvas_w, pair.canvas_h);
  if (max_dim <= 0 || longest <= max_dim) return pair;
  int factor = (longest + max_dim - 1) / max_dim;
  int nw = std::max(1, pair.canvas_w / factor);
  int nh = std::max(1, pair.canvas_h / factor);

  AlignedPair out;
  out.canvas_w = nw;
  out.canvas_h = nh;
  auto reduce = [&](const ImageBuffer& img, const BitMask& mask, ImageBuffer& rimg, BitMask& rmask) {
    rimg = ImageBuffer(nw, nh);
    rmask = BitMask(nw, nh);
    for (int y = 0; y < nh; ++y) {
      for (int x = 0; x < nw; ++x) {
        double acc[3] = {0, 0, 0};
        int n = 0;
        bool all = true;
        for (int dy = 0; dy < factor; ++dy) {
          for (int dx = 0; dx < factor; ++dx) {
            int sx = x * factor + dx, sy = y * factor + dy;
            if (sx >= pair.canvas_w || sy >= pair.canvas_h) continue;
            if (!mask.at(sx, sy)) {
              all = false;
              continue;
            }
            for (int c = 0; c < 3; ++c) acc[c] += img.at(sx, sy, c);
            ++n;
          }
        }
        if (all && n > 0) {
          rmask.set(x, y, true);
          for (int c = 0; c < 3; ++c) rimg.at(x, y, c) = static_cast<float>(acc[c] / n);
        }
      }
    }
  };
  reduce(pair.img0, pair.mask0, out.img0, out.mask0);
  reduce(pair.img1, pair.mask1, out.img1, out.mask1);

  bool any = false;
  for (size_t i = 0; i < out.mask0.bits.size() && !any; ++i)
    any = out.mask0.bits[i] && out.mask1.bits[i];
  if (!any) throw NoOverlapError("no overlap after downscale");
  return out;
}

}  // namespace seamweld
