#pragma once

#include <cmath>
#include <vector>

#include "seamweld/region.hpp"

namespace seamweld {

enum class Metric { kEuclidean, kSigmoid };

// Per-pixel color difference over P, indexed like OverlapRegion::pixels.
struct DiffField {
  Metric metric = Metric::kEuclidean;
  double domain_max = 0.0;
  std::vector<double> values;
};

inline constexpr double kEuclideanDomainMax = 1.7320508075688772;  // sqrt(3)
inline constexpr double kDefaultEpsilon = 0.06;

struct SigmoidParams {
  double tau = 0.0;
  double kappa = 0.0;    // 1 / epsilon
  double epsilon = 0.0;  // histogram bin width
};

// ||I0(p) - I1(p)||_2 over the three channels, range [0, sqrt(3)].
inline DiffField euclidean_diff(const AlignedPair& pair, const OverlapRegion& region) {
  DiffField f;
  f.metric = Metric::kEuclidean;
  f.domain_max = kEuclideanDomainMax;
  f.values.resize(region.count());
  for (int i = 0; i < region.count(); ++i) {
    auto [x, y] = region.pixels[i];
    double s = 0.0;
    for (int c = 0; c < 3; ++c) {
      double d = double(pair.img0.at(x, y, c)) - double(pair.img1.at(x, y, c));
      s += d * d;
    }
    f.values[i] = std::sqrt(s);
  }
  return f;
}

// Otsu threshold over a fixed-width histogram spanning [0, domain_max].
// tau is a bin edge; ties break toward the smaller tau; kappa = 1/epsilon.
inline SigmoidParams otsu_threshold(const DiffField& field, double epsilon = kDefaultEpsilon) {
  if (epsilon <= 0.0) throw InvalidArgumentError("otsu_threshold: epsilon must be > 0");
  if (field.values.empty()) throw InvalidArgumentError("otsu_threshold: empty field");

  int nbins = static_cast<int>(std::ceil(field.domain_max / epsilon));
  std::vector<int64_t> hist(nbins, 0);
  for (double v : field.values) {
    int b = static_cast<int>(v / epsilon);
    if (b >= nbins) b = nbins - 1;
    ++hist[b];
  }

  int occupied = 0;
  for (int64_t c : hist) occupied += (c > 0);
  if (occupied < 2)
    throw DegenerateHistogramError("constant difference field: histogram has a single occupied bin");

  // Between-class variance over all bin-edge splits; class representative
  // values are bin centers.
  int64_t total = static_cast<int64_t>(field.values.size());
  double total_mean = 0.0;
  for (int b = 0; b < nbins; ++b) total_mean += hist[b] * (b + 0.5) * epsilon;
  total_mean /= double(total);

  double best_var = -1.0;
  int best_split = 1;
  int64_t n0 = 0;
  double sum0 = 0.0;
  for (int t = 1; t < nbins; ++t) {
    n0 += hist[t - 1];
    sum0 += hist[t - 1] * (t - 0.5) * epsilon;
    int64_t n1 = total - n0;
    if (n0 == 0 || n1 == 0) continue;  // zero-weight class: variance 0, never best
    double w0 = double(n0) / double(total);
    double w1 = double(n1) / double(total);
    double mu0 = sum0 / double(n0);
    double mu1 = (total_mean * total - sum0) / double(n1);
    double var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
    if (var > best_var) {
      best_var = var;
      best_split = t;
    }
  }
  if (best_var <= 0.0)
    throw DegenerateHistogramError("constant difference field: no split separates classes");

  SigmoidParams p;
  p.epsilon = epsilon;
  p.kappa = 1.0 / epsilon;
  p.tau = best_split * epsilon;
  return p;
}

inline double sigmoid(double x, const SigmoidParams& p) {
  return 1.0 / (1.0 + std::exp(-4.0 * p.kappa * (x - p.tau)));
}

// Remaps a Euclidean-metric field through the logistic curve centered at tau.
inline DiffField sigmoid_remap(const DiffField& field, const SigmoidParams& params) {
  if (field.metric != Metric::kEuclidean)
    throw InvalidArgumentError("sigmoid_remap: input must be euclidean-tagged");
  DiffField out;
  out.metric = Metric::kSigmoid;
  out.domain_max = 1.0;
  out.values.resize(field.values.size());
  for (size_t i = 0; i < field.values.size(); ++i) out.values[i] = sigmoid(field.values[i], params);
  return out;
}

// Grayscale visualization of a difference field on its canvas.
inline Plane diff_to_plane(const DiffField& field, const OverlapRegion& region) {
  Plane p(region.canvas_w, region.canvas_h, 0.0f);
  for (int i = 0; i < region.count(); ++i) {
    auto [x, y] = region.pixels[i];
    p.at(x, y) = static_cast<float>(field.values[i] / field.domain_max);
  }
  return p;
}

}  // namespace seamweld
