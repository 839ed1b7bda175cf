#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "seamweld/warp.hpp"

namespace seamweld {

// Border classes of a pixel of P. A pixel adjacent to the area covered only
// by image k is pinned to label k by the data term; the canvas flag only
// zeroes saliency weights.
enum BorderFlags : uint8_t {
  kBorderNone = 0,
  kBorderImage0 = 1,  // 4-adjacent to a mask0-only pixel
  kBorderImage1 = 2,  // 4-adjacent to a mask1-only pixel
  kBorderCanvas = 4,  // on the canvas bounding rectangle
};

// Overlap region P: pixel indexing, border classes, 4-connected edges.
struct OverlapRegion {
  int canvas_w = 0;
  int canvas_h = 0;
  BitMask inside;                            // P
  std::vector<int> index_of;                 // canvas pixel -> P index, -1 outside
  std::vector<std::pair<int, int>> pixels;   // P index -> (x, y)
  std::vector<uint8_t> border;               // per P index, BorderFlags
  struct Edge {
    int p, q;  // P indices; q is the right or down neighbor of p
  };
  std::vector<Edge> edges;  // row-major by p, right edge before down edge

  int count() const { return static_cast<int>(pixels.size()); }
};

// Per-edge saliency weights, aligned with OverlapRegion::edges.
struct WeightField {
  std::vector<double> w;
};

inline OverlapRegion classify_borders(const AlignedPair& pair) {
  OverlapRegion r;
  r.canvas_w = pair.canvas_w;
  r.canvas_h = pair.canvas_h;
  r.inside = overlap_mask(pair);
  r.index_of.assign(static_cast<size_t>(r.canvas_w) * r.canvas_h, -1);

  for (int y = 0; y < r.canvas_h; ++y) {
    for (int x = 0; x < r.canvas_w; ++x) {
      if (!r.inside.at(x, y)) continue;
      r.index_of[static_cast<size_t>(y) * r.canvas_w + x] = r.count();
      r.pixels.emplace_back(x, y);
    }
  }
  if (r.pixels.empty()) throw NoOverlapError("empty overlap region");

  r.border.assign(r.pixels.size(), kBorderNone);
  const int dx[4] = {0, 0, -1, 1};
  const int dy[4] = {-1, 1, 0, 0};
  for (int i = 0; i < r.count(); ++i) {
    auto [x, y] = r.pixels[i];
    uint8_t f = kBorderNone;
    if (x == 0 || y == 0 || x == r.canvas_w - 1 || y == r.canvas_h - 1) f |= kBorderCanvas;
    for (int d = 0; d < 4; ++d) {
      int nx = x + dx[d], ny = y + dy[d];
      if (nx < 0 || ny < 0 || nx >= r.canvas_w || ny >= r.canvas_h) continue;
      bool m0 = pair.mask0.at(nx, ny), m1 = pair.mask1.at(nx, ny);
      if (m0 && !m1) f |= kBorderImage0;
      if (m1 && !m0) f |= kBorderImage1;
    }
    if ((f & kBorderImage0) && (f & kBorderImage1))
      throw DegenerateGeometryError("overlap pixel borders both images (sliver overlap)");
    r.border[i] = f;
  }

  for (int i = 0; i < r.count(); ++i) {
    auto [x, y] = r.pixels[i];
    if (x + 1 < r.canvas_w) {
      int j = r.index_of[static_cast<size_t>(y) * r.canvas_w + x + 1];
      if (j >= 0) r.edges.push_back({i, j});
    }
    if (y + 1 < r.canvas_h) {
      int j = r.index_of[static_cast<size_t>(y + 1) * r.canvas_w + x];
      if (j >= 0) r.edges.push_back({i, j});
    }
  }
  return r;
}

}  // namespace seamweld
