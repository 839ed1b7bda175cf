#pragma once

#include <future>

#include "seamweld/energy.hpp"

namespace seamweld {

// Per-canvas-pixel source assignment plus the seam polyline.
struct CompositePlan {
  int canvas_w = 0;
  int canvas_h = 0;
  std::vector<int8_t> source;  // 0, 1, or -1 (uncovered)
  std::vector<OverlapRegion::Edge> seam;
};

inline CompositePlan make_plan(const AlignedPair& pair, const OverlapRegion& region,
                               const LabelMap& labels) {
  CompositePlan plan;
  plan.canvas_w = pair.canvas_w;
  plan.canvas_h = pair.canvas_h;
  plan.source.assign(static_cast<size_t>(pair.canvas_w) * pair.canvas_h, -1);
  for (int y = 0; y < pair.canvas_h; ++y) {
    for (int x = 0; x < pair.canvas_w; ++x) {
      size_t i = static_cast<size_t>(y) * pair.canvas_w + x;
      bool m0 = pair.mask0.at(x, y), m1 = pair.mask1.at(x, y);
      if (m0 && m1)
        plan.source[i] = labels.l[region.index_of[i]];
      else if (m0)
        plan.source[i] = 0;
      else if (m1)
        plan.source[i] = 1;
    }
  }
  plan.seam = extract_seam(region, labels);
  return plan;
}

// Per-pixel copy from the designated source; uncovered pixels stay black.
inline ImageBuffer composite_direct(const AlignedPair& pair, const CompositePlan& plan) {
  ImageBuffer out(plan.canvas_w, plan.canvas_h);
  for (int y = 0; y < plan.canvas_h; ++y) {
    for (int x = 0; x < plan.canvas_w; ++x) {
      int8_t s = plan.source[static_cast<size_t>(y) * plan.canvas_w + x];
      if (s < 0) continue;
      const ImageBuffer& src = (s == 0) ? pair.img0 : pair.img1;
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = src.at(x, y, c);
    }
  }
  return out;
}

struct PoissonResult {
  ImageBuffer image;
  bool converged = true;
  int iterations = 0;
  double residual = 0.0;  // max-norm over all channels at exit
};

namespace detail {

struct PoissonSystem {
  std::vector<int> omega;          // canvas indices of Omega, row-major
  std::vector<int> nbr;            // 4 entries per Omega pixel: Omega index, or -1
  std::vector<int> bnd;            // 4 entries per Omega pixel: canvas index of a Dirichlet neighbor, or -1
  std::vector<double> diag;        // neighbor count inside Omega union its boundary
};

// Jacobi-preconditioned conjugate gradients on the 5-point Laplacian,
// matrix-free. Convergence is declared on the max-norm of the residual.
struct CgOutcome {
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  std::vector<double> objective_trace;  // quadratic objective every check interval
};

inline CgOutcome solve_cg(const PoissonSystem& sys, const std::vector<double>& b,
                          std::vector<double>& f, double tol, int max_iter) {
  const size_t n = sys.omega.size();
  auto apply = [&](const std::vector<double>& x, std::vector<double>& out) {
    for (size_t i = 0; i < n; ++i) {
      double v = sys.diag[i] * x[i];
      for (int k = 0; k < 4; ++k) {
        int j = sys.nbr[i * 4 + k];
        if (j >= 0) v -= x[j];
      }
      out[i] = v;
    }
  };

  std::vector<double> r(n), z(n), p(n), ap(n);
  apply(f, ap);
  double rmax = 0.0;
  for (size_t i = 0; i < n; ++i) {
    r[i] = b[i] - ap[i];
    rmax = std::max(rmax, std::abs(r[i]));
  }

  CgOutcome out;
  out.residual = rmax;
  double rz = 0.0;
  for (size_t i = 0; i < n; ++i) {
    z[i] = r[i] / sys.diag[i];
    rz += r[i] * z[i];
    p[i] = z[i];
  }

  const int check_every = 32;
  auto objective = [&]() {
    // phi(f) = 1/2 f'Af - b'f = -1/2 f'(b + r)
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += f[i] * (b[i] + r[i]);
    return -0.5 * s;
  };
  out.objective_trace.push_back(objective());

  int it = 0;
  while (rmax >= tol && it < max_iter) {
    apply(p, ap);
    double pap = 0.0;
    for (size_t i = 0; i < n; ++i) pap += p[i] * ap[i];
    if (pap <= 0.0) break;  // numerically exhausted
    double alpha = rz / pap;
    rmax = 0.0;
    for (size_t i = 0; i < n; ++i) {
      f[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
      rmax = std::max(rmax, std::abs(r[i]));
    }
    double rz_new = 0.0;
    for (size_t i = 0; i < n; ++i) {
      z[i] = r[i] / sys.diag[i];
      rz_new += r[i] * z[i];
    }
    double beta = rz_new / rz;
    rz = rz_new;
    for (size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    ++it;
    if (it % check_every == 0) out.objective_trace.push_back(objective());
  }
  out.objective_trace.push_back(objective());
  out.iterations = it;
  out.residual = rmax;
  out.converged = rmax < tol;
  return out;
}

inline int poisson_threads() {
  if (const char* env = std::getenv("SEAMWELD_THREADS")) {
    int t = std::atoi(env);
    if (t >= 1) return std::min(t, 3);
  }
  return 1;
}

}  // namespace detail

// Gradient-domain fusion: the label-1 side is recomputed per channel so its
// gradients match I1 while its boundary pins to the label-0 composite, by
// solving the discrete Poisson equation over Omega. The result is clamped to
// [0,1]. Channels are solved concurrently when SEAMWELD_THREADS allows.
inline PoissonResult composite_poisson(const AlignedPair& pair, const CompositePlan& plan,
                                       double tol = 1e-4, int max_iter = 0,
                                       std::vector<std::vector<double>>* objective_traces = nullptr) {
  if (tol <= 0.0) throw InvalidArgumentError("composite_poisson: tol must be > 0");
  PoissonResult res;
  res.image = composite_direct(pair, plan);

  const int w = plan.canvas_w, h = plan.canvas_h;
  detail::PoissonSystem sys;
  std::vector<int> omega_index(static_cast<size_t>(w) * h, -1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      size_t i = static_cast<size_t>(y) * w + x;
      if (plan.source[i] == 1) {
        omega_index[i] = static_cast<int>(sys.omega.size());
        sys.omega.push_back(static_cast<int>(i));
      }
    }
  }
  if (sys.omega.empty()) return res;

  const int dx[4] = {0, 0, -1, 1};
  const int dy[4] = {-1, 1, 0, 0};
  sys.nbr.assign(sys.omega.size() * 4, -1);
  sys.bnd.assign(sys.omega.size() * 4, -1);
  sys.diag.assign(sys.omega.size(), 0.0);
  for (size_t i = 0; i < sys.omega.size(); ++i) {
    int ci = sys.omega[i];
    int x = ci % w, y = ci / w;
    for (int k = 0; k < 4; ++k) {
      int nx = x + dx[k], ny = y + dy[k];
      if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
      size_t cj = static_cast<size_t>(ny) * w + nx;
      if (plan.source[cj] == 1) {
        sys.nbr[i * 4 + k] = omega_index[cj];
        sys.diag[i] += 1.0;
      } else if (plan.source[cj] == 0) {
        sys.bnd[i * 4 + k] = static_cast<int>(cj);
        sys.diag[i] += 1.0;
      }
      // Uncovered neighbors contribute nothing (natural boundary).
    }
    if (sys.diag[i] == 0.0) sys.diag[i] = 1.0;  // isolated pixel: keep I1 value
  }

  if (max_iter <= 0)
    max_iter = static_cast<int>(10.0 * std::sqrt(double(sys.omega.size()))) + 1000;

  auto solve_channel = [&](int c) {
    const size_t n = sys.omega.size();
    std::vector<double> b(n, 0.0), f(n);

    // Guide field gradients plus Dirichlet boundary contributions; a mean
    // boundary offset seeds the iteration (exact for constant-offset pairs).
    double offset_sum = 0.0;
    size_t offset_cnt = 0;
    for (size_t i = 0; i < n; ++i) {
      int ci = sys.omega[i];
      int x = ci % w, y = ci / w;
      double gp = pair.img1.at(x, y, c);
      for (int k = 0; k < 4; ++k) {
        int nx = x + dx[k], ny = y + dy[k];
        int oj = sys.nbr[i * 4 + k];
        int bj = sys.bnd[i * 4 + k];
        if (oj >= 0) {
          b[i] += gp - pair.img1.at(nx, ny, c);
        } else if (bj >= 0) {
          double gq = pair.mask1.at(nx, ny) ? pair.img1.at(nx, ny, c) : gp;
          double fixed = res.image.data[static_cast<size_t>(bj) * 3 + c];
          b[i] += (gp - gq) + fixed;
          offset_sum += fixed - gq;
          ++offset_cnt;
        }
      }
      f[i] = gp;
    }
    double offset = offset_cnt ? offset_sum / double(offset_cnt) : 0.0;
    for (size_t i = 0; i < n; ++i) f[i] = std::clamp(f[i] + offset, -1.0, 2.0);

    detail::CgOutcome cg = detail::solve_cg(sys, b, f, tol, max_iter);
    return std::make_pair(std::move(f), cg);
  };

  std::array<std::pair<std::vector<double>, detail::CgOutcome>, 3> solved;
  if (detail::poisson_threads() > 1) {
    std::array<std::future<std::pair<std::vector<double>, detail::CgOutcome>>, 3> futs;
    for (int c = 0; c < 3; ++c) futs[c] = std::async(std::launch::async, solve_channel, c);
    for (int c = 0; c < 3; ++c) solved[c] = futs[c].get();
  } else {
    for (int c = 0; c < 3; ++c) solved[c] = solve_channel(c);
  }

  for (int c = 0; c < 3; ++c) {
    const auto& [f, cg] = solved[c];
    for (size_t i = 0; i < sys.omega.size(); ++i) {
      res.image.data[static_cast<size_t>(sys.omega[i]) * 3 + c] =
          static_cast<float>(std::clamp(f[i], 0.0, 1.0));
    }
    res.converged = res.converged && cg.converged;
    res.iterations = std::max(res.iterations, cg.iterations);
    res.residual = std::max(res.residual, cg.residual);
    if (objective_traces) objective_traces->push_back(cg.objective_trace);
  }
  return res;
}

// Recomputes the Poisson residual of a composite independently of the solver.
inline double poisson_residual(const AlignedPair& pair, const CompositePlan& plan,
                               const ImageBuffer& result) {
  const int w = plan.canvas_w, h = plan.canvas_h;
  const int dx[4] = {0, 0, -1, 1};
  const int dy[4] = {-1, 1, 0, 0};
  double rmax = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      size_t i = static_cast<size_t>(y) * w + x;
      if (plan.source[i] != 1) continue;
      for (int c = 0; c < 3; ++c) {
        double lhs = 0.0, rhs = 0.0;
        double fp = result.at(x, y, c);
        double gp = pair.img1.at(x, y, c);
        for (int k = 0; k < 4; ++k) {
          int nx = x + dx[k], ny = y + dy[k];
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          size_t j = static_cast<size_t>(ny) * w + nx;
          if (plan.source[j] < 0) continue;
          lhs += fp - result.at(nx, ny, c);
          double gq = pair.mask1.at(nx, ny) ? pair.img1.at(nx, ny, c) : gp;
          rhs += gp - gq;
        }
        rmax = std::max(rmax, std::abs(lhs - rhs));
      }
    }
  }
  return rmax;
}

// Seam drawn in pure red over a composite; both endpoints of every cut edge
// are colored.
inline ImageBuffer render_seam_overlay(const ImageBuffer& composite, const OverlapRegion& region,
                                       const std::vector<OverlapRegion::Edge>& seam) {
  ImageBuffer out = composite;
  for (const auto& e : seam) {
    for (int idx : {e.p, e.q}) {
      auto [x, y] = region.pixels[idx];
      out.set_pixel(x, y, 1.0f, 0.0f, 0.0f);
    }
  }
  return out;
}

}  // namespace seamweld
