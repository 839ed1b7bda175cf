// Shared test fixtures and independent oracles. Everything here stays
// independent of the implementation paths it is used to check.
#pragma once

#include <queue>
#include <random>

#include "seamweld/seamweld.hpp"

namespace testsupport {

using namespace seamweld;

// --- fixture builders ----------------------------------------------------

// A rectangular overlap region built directly (no masks): canvas w x h, the
// whole canvas is P. Border flags supplied by the caller.
inline OverlapRegion make_rect_region(int w, int h) {
  OverlapRegion r;
  r.canvas_w = w;
  r.canvas_h = h;
  r.inside = BitMask(w, h, true);
  r.index_of.resize(static_cast<size_t>(w) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      r.index_of[static_cast<size_t>(y) * w + x] = r.count();
      r.pixels.emplace_back(x, y);
    }
  r.border.assign(r.pixels.size(), kBorderNone);
  for (int i = 0; i < r.count(); ++i) {
    auto [x, y] = r.pixels[i];
    if (x + 1 < w) r.edges.push_back({i, r.index_of[static_cast<size_t>(y) * w + x + 1]});
    if (y + 1 < h) r.edges.push_back({i, r.index_of[static_cast<size_t>(y + 1) * w + x]});
  }
  return r;
}

// Two same-canvas images whose per-pixel Euclidean color difference equals
// `target` (difference carried by the red channel; base gray 0.25).
inline AlignedPair pair_with_diff(int w, int h, const std::vector<double>& target,
                                  const BitMask& mask0, const BitMask& mask1) {
  ImageBuffer a(w, h, 0.25f), b(w, h, 0.25f);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      b.at(x, y, 0) = static_cast<float>(0.25 + target[static_cast<size_t>(y) * w + x]);
  return make_aligned_pair(a, b, std::nullopt, mask0, mask1);
}

// Diff field defined directly on a region.
inline DiffField field_on(const OverlapRegion& region, const std::vector<double>& values,
                          Metric metric = Metric::kEuclidean) {
  DiffField f;
  f.metric = metric;
  f.domain_max = metric == Metric::kEuclidean ? kEuclideanDomainMax : 1.0;
  f.values = values;
  if (static_cast<int>(f.values.size()) != region.count()) throw std::logic_error("bad fixture");
  return f;
}

// --- duplicate energy evaluator (second naive implementation) ------------

inline double naive_energy(const OverlapRegion& region, const EnergyModel& model,
                           const LabelMap& labels) {
  double total = 0.0;
  for (int i = 0; i < region.count(); ++i) {
    total += labels.l[i] == 0 ? model.data[i][0] : model.data[i][1];
  }
  for (size_t e = 0; e < region.edges.size(); ++e) {
    int lp = labels.l[region.edges[e].p];
    int lq = labels.l[region.edges[e].q];
    total += 0.5 * std::abs(lp - lq) * 2.0 * model.smooth[e];
  }
  return total;
}

// --- brute-force Otsu oracle ----------------------------------------------

// Exhaustive between-class-variance scan over every bin split, written
// independently of otsu_threshold.
inline double otsu_oracle(const std::vector<double>& values, double domain_max, double epsilon) {
  int nbins = static_cast<int>(std::ceil(domain_max / epsilon));
  std::vector<long> hist(nbins, 0);
  for (double v : values) hist[std::min(nbins - 1, static_cast<int>(v / epsilon))]++;

  double best_var = -1.0;
  int best_t = -1;
  for (int t = 1; t < nbins; ++t) {
    long n0 = 0, n1 = 0;
    double s0 = 0, s1 = 0;
    for (int b = 0; b < nbins; ++b) {
      double center = (b + 0.5) * epsilon;
      if (b < t) {
        n0 += hist[b];
        s0 += hist[b] * center;
      } else {
        n1 += hist[b];
        s1 += hist[b] * center;
      }
    }
    if (n0 == 0 || n1 == 0) continue;
    double w0 = double(n0) / values.size(), w1 = double(n1) / values.size();
    double mu0 = s0 / n0, mu1 = s1 / n1;
    double var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
    if (var > best_var) {
      best_var = var;
      best_t = t;
    }
  }
  if (best_t < 0 || best_var <= 0.0) throw std::logic_error("oracle: degenerate histogram");
  return best_t * epsilon;
}

// --- exact minimum-barrier-distance oracle ---------------------------------

// Exact MBD from seed set on a grayscale grid: min over candidate floor
// values m of (minimax-over-paths-in-{v >= m} minus m), each inner problem a
// Dijkstra-style minimax search. Exact because for the optimal path with
// min value mu, the candidate m = mu recovers max - mu.
inline std::vector<double> exact_mbd(const Plane& img, const std::vector<uint8_t>& seed) {
  const int w = img.width, h = img.height;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> best(static_cast<size_t>(w) * h, inf);

  std::vector<double> candidates(img.v.begin(), img.v.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  const int dx[4] = {0, 0, -1, 1};
  const int dy[4] = {-1, 1, 0, 0};
  for (double m : candidates) {
    // minimax over paths restricted to pixels with value >= m
    std::vector<double> mm(static_cast<size_t>(w) * h, inf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (int i = 0; i < w * h; ++i) {
      if (seed[i] && img.v[i] >= m) {
        mm[i] = img.v[i];
        pq.emplace(mm[i], i);
      }
    }
    while (!pq.empty()) {
      auto [d, i] = pq.top();
      pq.pop();
      if (d > mm[i]) continue;
      int x = i % w, y = i / w;
      for (int k = 0; k < 4; ++k) {
        int nx = x + dx[k], ny = y + dy[k];
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        int j = ny * w + nx;
        if (img.v[j] < m) continue;
        double nd = std::max(d, double(img.v[j]));
        if (nd < mm[j]) {
          mm[j] = nd;
          pq.emplace(nd, j);
        }
      }
    }
    for (int i = 0; i < w * h; ++i)
      if (mm[i] < inf) best[i] = std::min(best[i], mm[i] - m);
  }
  return best;
}

// Raster-scan MBD restricted to one gray channel, mirroring the production
// sweep on a gray image (all three channels identical).
inline ImageBuffer gray_to_rgb(const Plane& p) {
  ImageBuffer img(p.width, p.height);
  for (int y = 0; y < p.height; ++y)
    for (int x = 0; x < p.width; ++x) img.set_pixel(x, y, p.at(x, y), p.at(x, y), p.at(x, y));
  return img;
}

// Border seed set of a full-canvas mask.
inline std::vector<uint8_t> border_seeds(int w, int h) {
  std::vector<uint8_t> seed(static_cast<size_t>(w) * h, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      seed[static_cast<size_t>(y) * w + x] = (x == 0 || y == 0 || x == w - 1 || y == h - 1);
  return seed;
}

// --- random instance generator (min-cut acceptance) -------------------------

struct RandomInstance {
  OverlapRegion region;
  EnergyModel model;
};

// Random grid instance: random diffs in [0,1], random border placements on
// opposite sides, random weights in [1,2] plus occasional zeros.
inline RandomInstance random_instance(std::mt19937& rng, int max_pixels) {
  std::uniform_int_distribution<int> wdist(1, 4);
  int w = 0, h = 0;
  do {
    w = wdist(rng);
    h = wdist(rng);
  } while (w * h > max_pixels || w * h < 2);

  RandomInstance inst;
  inst.region = make_rect_region(w, h);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // Forced borders on opposite sides, plus occasional extra pins.
  for (int i = 0; i < inst.region.count(); ++i) {
    auto [x, y] = inst.region.pixels[i];
    if (x == 0 && unit(rng) < 0.8) inst.region.border[i] |= kBorderImage0;
    if (x == w - 1 && unit(rng) < 0.8 && !(inst.region.border[i] & kBorderImage0))
      inst.region.border[i] |= kBorderImage1;
    if (unit(rng) < 0.1) inst.region.border[i] |= kBorderCanvas;
  }

  std::vector<double> diffs(inst.region.count());
  for (double& d : diffs) d = unit(rng);
  DiffField field = field_on(inst.region, diffs);

  WeightField wf;
  wf.w.resize(inst.region.edges.size());
  for (double& x : wf.w) x = (unit(rng) < 0.2) ? 0.0 : 1.0 + unit(rng);

  inst.model = build_energy(inst.region, field, &wf);
  return inst;
}

inline std::vector<double> random_values(std::mt19937& rng, size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

}  // namespace testsupport
