#pragma once

#include <limits>

#include "seamweld/region.hpp"

namespace seamweld {

// Per-pixel saliency in [0,1] over a full canvas raster.
struct SaliencyMap {
  Plane values;
};

namespace detail {

// One minimum-barrier-distance channel: seeds at the mask border, sweeps
// relax d(p) = min over paths of (max - min) along the path.
struct MbdChannel {
  std::vector<double> dist, hi, lo;
};

inline void mbd_relax(MbdChannel& ch, const Plane& img, const BitMask& mask, int x, int y, int nx,
                      int ny) {
  size_t p = static_cast<size_t>(y) * img.width + x;
  size_t q = static_cast<size_t>(ny) * img.width + nx;
  if (!mask.at(nx, ny) || ch.dist[q] == std::numeric_limits<double>::infinity()) return;
  double v = img.at(x, y);
  double hi = std::max(ch.hi[q], v);
  double lo = std::min(ch.lo[q], v);
  if (hi - lo < ch.dist[p]) {
    ch.dist[p] = hi - lo;
    ch.hi[p] = hi;
    ch.lo[p] = lo;
  }
}

}  // namespace detail

// Raster-scan minimum-barrier-distance saliency. Seeds are the border pixels
// of the mask footprint; `passes` alternating raster/anti-raster sweeps
// (2 causal / 2 anti-causal neighbors) relax the per-channel barrier
// distance. Saliency = sum of channel distances, min-max normalized over the
// mask.
// Raw per-pixel barrier distance (sum over the three channels), before any
// normalization. Exposed separately so the approximation can be checked
// against an exact oracle.
inline Plane mbd_distance(const ImageBuffer& img, const BitMask& mask, int passes = 3) {
  if (passes < 1) throw InvalidArgumentError("mbd_saliency: passes must be >= 1");
  if (mask.count() == 0) throw InvalidArgumentError("mbd_saliency: empty mask");
  const int w = img.width, h = img.height;
  const double inf = std::numeric_limits<double>::infinity();

  // Seed set: mask pixels adjacent to outside-mask area or the canvas edge.
  std::vector<uint8_t> seed(static_cast<size_t>(w) * h, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.at(x, y)) continue;
      bool border = x == 0 || y == 0 || x == w - 1 || y == h - 1;
      if (!border) {
        border = !mask.at(x - 1, y) || !mask.at(x + 1, y) || !mask.at(x, y - 1) ||
                 !mask.at(x, y + 1);
      }
      seed[static_cast<size_t>(y) * w + x] = border;
    }
  }

  Plane total(w, h, 0.0f);
  for (int c = 0; c < 3; ++c) {
    Plane chan(w, h);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) chan.at(x, y) = img.at(x, y, c);

    detail::MbdChannel ch;
    ch.dist.assign(static_cast<size_t>(w) * h, inf);
    ch.hi.assign(static_cast<size_t>(w) * h, -inf);
    ch.lo.assign(static_cast<size_t>(w) * h, inf);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        size_t i = static_cast<size_t>(y) * w + x;
        if (seed[i]) {
          ch.dist[i] = 0.0;
          ch.hi[i] = ch.lo[i] = chan.at(x, y);
        }
      }
    }

    for (int pass = 0; pass < passes; ++pass) {
      if (pass % 2 == 0) {
        for (int y = 0; y < h; ++y) {
          for (int x = 0; x < w; ++x) {
            if (!mask.at(x, y)) continue;
            if (x > 0) detail::mbd_relax(ch, chan, mask, x, y, x - 1, y);
            if (y > 0) detail::mbd_relax(ch, chan, mask, x, y, x, y - 1);
          }
        }
      } else {
        for (int y = h - 1; y >= 0; --y) {
          for (int x = w - 1; x >= 0; --x) {
            if (!mask.at(x, y)) continue;
            if (x < w - 1) detail::mbd_relax(ch, chan, mask, x, y, x + 1, y);
            if (y < h - 1) detail::mbd_relax(ch, chan, mask, x, y, x, y + 1);
          }
        }
      }
    }

    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        size_t i = static_cast<size_t>(y) * w + x;
        if (mask.at(x, y) && ch.dist[i] != inf) total.at(x, y) += static_cast<float>(ch.dist[i]);
      }
    }
  }
  return total;
}

inline SaliencyMap mbd_saliency(const ImageBuffer& img, const BitMask& mask, int passes = 3) {
  Plane total = mbd_distance(img, mask, passes);
  const int w = img.width, h = img.height;

  // Min-max normalize over the mask; zero range maps to all-zero.
  float lo = std::numeric_limits<float>::infinity();
  float hi = -std::numeric_limits<float>::infinity();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.at(x, y)) continue;
      lo = std::min(lo, total.at(x, y));
      hi = std::max(hi, total.at(x, y));
    }
  }
  SaliencyMap out;
  out.values = Plane(w, h, 0.0f);
  if (hi > lo) {
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        if (mask.at(x, y)) out.values.at(x, y) = (total.at(x, y) - lo) / (hi - lo);
  }
  return out;
}

// omega(p) = mean of the two images' saliency at p, min-max renormalized over
// P; a constant mean maps to all-zero.
inline SaliencyMap average_saliency(const AlignedPair& pair, const OverlapRegion& region,
                                    int passes = 3) {
  SaliencyMap s0 = mbd_saliency(pair.img0, pair.mask0, passes);
  SaliencyMap s1 = mbd_saliency(pair.img1, pair.mask1, passes);

  SaliencyMap out;
  out.values = Plane(region.canvas_w, region.canvas_h, 0.0f);
  float lo = std::numeric_limits<float>::infinity();
  float hi = -std::numeric_limits<float>::infinity();
  for (int i = 0; i < region.count(); ++i) {
    auto [x, y] = region.pixels[i];
    float v = 0.5f * (s0.values.at(x, y) + s1.values.at(x, y));
    out.values.at(x, y) = v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (int i = 0; i < region.count(); ++i) {
    auto [x, y] = region.pixels[i];
    out.values.at(x, y) = (hi > lo) ? (out.values.at(x, y) - lo) / (hi - lo) : 0.0f;
  }
  return out;
}

// W_{p,q}: 0 when either endpoint lies on the canvas border of P, else
// 1 + (omega(p) + omega(q)) / 2, which lands in [1,2] for omega in [0,1].
inline WeightField weight_field(const SaliencyMap& omega, const OverlapRegion& region) {
  WeightField wf;
  wf.w.resize(region.edges.size());
  for (size_t e = 0; e < region.edges.size(); ++e) {
    const auto& edge = region.edges[e];
    if ((region.border[edge.p] & kBorderCanvas) || (region.border[edge.q] & kBorderCanvas)) {
      wf.w[e] = 0.0;
      continue;
    }
    auto [px, py] = region.pixels[edge.p];
    auto [qx, qy] = region.pixels[edge.q];
    wf.w[e] = 1.0 + 0.5 * (double(omega.values.at(px, py)) + double(omega.values.at(qx, qy)));
  }
  return wf;
}

}  // namespace seamweld
