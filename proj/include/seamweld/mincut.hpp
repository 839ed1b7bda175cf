#pragma once

#include <cstdlib>
#include <deque>
#include <queue>

#include "seamweld/energy.hpp"

namespace seamweld {

// Capacities are scaled to integers for exact augmenting-path arithmetic.
// Energy drift from rounding is bounded by |N| / kCapacityScale.
inline constexpr int64_t kCapacityScale = 1 << 20;

inline int64_t scale_cost(double x) { return std::llround(x * double(kCapacityScale)); }

// Grid s/t flow network. Neighbor arcs come in sister pairs (2e, 2e+1);
// terminal capacities are folded into a single residual per node
// (tr > 0: residual from source, tr < 0: residual to sink).
struct FlowGraph {
  int n = 0;
  std::vector<int> arc_head;    // arc -> target node
  std::vector<int64_t> rcap;    // arc -> residual capacity
  std::vector<int> adj_start;   // node -> first index into adj_arcs
  std::vector<int> adj_arcs;    // arcs per node, ordered up, down, left, right
  std::vector<int64_t> tr;      // terminal residual per node
  int64_t flow_base = 0;        // sum of min(D0, D1) pushed up front
};

inline FlowGraph build_graph(const OverlapRegion& region, const EnergyModel& model) {
  FlowGraph g;
  g.n = region.count();
  g.tr.resize(g.n);
  for (int i = 0; i < g.n; ++i) {
    int64_t to_sink = scale_cost(model.data[i][0]);    // cost of label 0 -> cap(p, t)
    int64_t from_source = scale_cost(model.data[i][1]);  // cost of label 1 -> cap(s, p)
    g.flow_base += std::min(from_source, to_sink);
    g.tr[i] = from_source - to_sink;
  }

  size_t m = region.edges.size();
  g.arc_head.resize(2 * m);
  g.rcap.resize(2 * m);
  for (size_t e = 0; e < m; ++e) {
    int64_t c = scale_cost(model.smooth[e]);
    g.arc_head[2 * e] = region.edges[e].q;
    g.arc_head[2 * e + 1] = region.edges[e].p;
    g.rcap[2 * e] = c;
    g.rcap[2 * e + 1] = c;
  }

  // Deterministic per-node arc order: up, down, left, right.
  std::vector<std::array<int, 4>> slots(g.n, {-1, -1, -1, -1});
  auto slot_of = [&](int p, int q) {
    auto [px, py] = region.pixels[p];
    auto [qx, qy] = region.pixels[q];
    if (qy == py - 1) return 0;
    if (qy == py + 1) return 1;
    if (qx == px - 1) return 2;
    return 3;
  };
  for (size_t e = 0; e < m; ++e) {
    int p = region.edges[e].p, q = region.edges[e].q;
    slots[p][slot_of(p, q)] = static_cast<int>(2 * e);
    slots[q][slot_of(q, p)] = static_cast<int>(2 * e + 1);
  }
  g.adj_start.resize(g.n + 1);
  g.adj_arcs.reserve(2 * m);
  for (int i = 0; i < g.n; ++i) {
    g.adj_start[i] = static_cast<int>(g.adj_arcs.size());
    for (int s = 0; s < 4; ++s)
      if (slots[i][s] >= 0) g.adj_arcs.push_back(slots[i][s]);
  }
  g.adj_start[g.n] = static_cast<int>(g.adj_arcs.size());
  return g;
}

struct CutResult {
  LabelMap labels;
  double flow_value = 0.0;
  double energy = 0.0;
  int64_t scaled_energy = 0;  // exact integer-arithmetic energy
};

inline int64_t scaled_energy_of(const OverlapRegion& region, const EnergyModel& model,
                                const LabelMap& labels) {
  int64_t e = 0;
  for (size_t i = 0; i < model.data.size(); ++i) e += scale_cost(model.data[i][labels.l[i]]);
  for (size_t k = 0; k < region.edges.size(); ++k)
    if (labels.l[region.edges[k].p] != labels.l[region.edges[k].q]) e += scale_cost(model.smooth[k]);
  return e;
}

namespace detail {

// Boykov-Kolmogorov max-flow: two search trees grown from s and t, with
// augmentation and orphan adoption reusing the trees between paths.
class BkSolver {
 public:
  explicit BkSolver(FlowGraph& g) : g_(g) {}

  int64_t run() {
    const int n = g_.n;
    tree_.assign(n, kFree);
    parent_.assign(n, kNoArc);
    int64_t flow = 0;

    std::deque<int> active;
    for (int i = 0; i < n; ++i) {
      if (g_.tr[i] > 0) {
        tree_[i] = kSource;
        parent_[i] = kTerminal;
        active.push_back(i);
      } else if (g_.tr[i] < 0) {
        tree_[i] = kSink;
        parent_[i] = kTerminal;
        active.push_back(i);
      }
    }

    std::deque<int> orphans;
    while (true) {
      // Growth: expand trees until they touch through a residual arc.
      int middle = kNoArc;
      while (!active.empty() && middle == kNoArc) {
        int p = active.front();
        if (tree_[p] == kFree) {
          active.pop_front();
          continue;
        }
        for (int ai = g_.adj_start[p]; ai < g_.adj_start[p + 1]; ++ai) {
          int a = g_.adj_arcs[ai];
          int out = (tree_[p] == kSource) ? a : (a ^ 1);  // arc carrying flow outward
          if (g_.rcap[out] <= 0) continue;
          int q = g_.arc_head[a];
          if (tree_[q] == kFree) {
            tree_[q] = tree_[p];
            parent_[q] = a ^ 1;  // arc q -> p
            active.push_back(q);
          } else if (tree_[q] != tree_[p]) {
            middle = (tree_[p] == kSource) ? a : (a ^ 1);
            break;
          }
        }
        if (middle == kNoArc) active.pop_front();
      }
      if (middle == kNoArc) break;

      // Augment along source-root .. middle .. sink-root.
      int64_t bottleneck = g_.rcap[middle];
      int u = g_.arc_head[middle ^ 1];  // source-side endpoint
      while (parent_[u] != kTerminal) {
        int a = parent_[u];
        bottleneck = std::min(bottleneck, g_.rcap[a ^ 1]);
        u = g_.arc_head[a];
      }
      bottleneck = std::min(bottleneck, g_.tr[u]);
      int v = g_.arc_head[middle];  // sink-side endpoint
      while (parent_[v] != kTerminal) {
        int a = parent_[v];
        bottleneck = std::min(bottleneck, g_.rcap[a]);
        v = g_.arc_head[a];
      }
      bottleneck = std::min(bottleneck, -g_.tr[v]);

      g_.rcap[middle] -= bottleneck;
      g_.rcap[middle ^ 1] += bottleneck;
      u = g_.arc_head[middle ^ 1];
      while (parent_[u] != kTerminal) {
        int a = parent_[u];
        g_.rcap[a ^ 1] -= bottleneck;
        g_.rcap[a] += bottleneck;
        int next = g_.arc_head[a];
        if (g_.rcap[a ^ 1] == 0) {
          parent_[u] = kOrphanArc;
          orphans.push_back(u);
        }
        u = next;
      }
      g_.tr[u] -= bottleneck;
      if (g_.tr[u] == 0) {
        parent_[u] = kOrphanArc;
        orphans.push_back(u);
      }
      v = g_.arc_head[middle];
      while (parent_[v] != kTerminal) {
        int a = parent_[v];
        g_.rcap[a] -= bottleneck;
        g_.rcap[a ^ 1] += bottleneck;
        int next = g_.arc_head[a];
        if (g_.rcap[a] == 0) {
          parent_[v] = kOrphanArc;
          orphans.push_back(v);
        }
        v = next;
      }
      g_.tr[v] += bottleneck;
      if (g_.tr[v] == 0) {
        parent_[v] = kOrphanArc;
        orphans.push_back(v);
      }
      flow += bottleneck;

      // Adoption: reattach or free every orphan.
      while (!orphans.empty()) {
        int p = orphans.front();
        orphans.pop_front();
        int t = tree_[p];
        int best = kNoArc;
        for (int ai = g_.adj_start[p]; ai < g_.adj_start[p + 1]; ++ai) {
          int a = g_.adj_arcs[ai];
          int q = g_.arc_head[a];
          if (tree_[q] != t) continue;
          int in = (t == kSource) ? (a ^ 1) : a;  // arc carrying flow toward p
          if (g_.rcap[in] <= 0) continue;
          if (!rooted(q)) continue;
          best = a;
          break;
        }
        if (best != kNoArc) {
          parent_[p] = best;
        } else {
          // p leaves the tree; neighbors may regrow, children become orphans.
          for (int ai = g_.adj_start[p]; ai < g_.adj_start[p + 1]; ++ai) {
            int a = g_.adj_arcs[ai];
            int q = g_.arc_head[a];
            if (tree_[q] != t) continue;
            int in = (t == kSource) ? (a ^ 1) : a;
            if (g_.rcap[in] > 0) active.push_back(q);
            if (parent_[q] >= 0 && g_.arc_head[parent_[q]] == p) {
              parent_[q] = kOrphanArc;
              orphans.push_back(q);
            }
          }
          tree_[p] = kFree;
          parent_[p] = kNoArc;
        }
      }
    }
    return flow;
  }

  // Min-cut side: label 0 for nodes residual-reachable from the source.
  LabelMap labels_from_residual() const {
    LabelMap lm;
    lm.l.assign(g_.n, 1);
    std::queue<int> bfs;
    for (int i = 0; i < g_.n; ++i) {
      if (g_.tr[i] > 0) {
        lm.l[i] = 0;
        bfs.push(i);
      }
    }
    while (!bfs.empty()) {
      int p = bfs.front();
      bfs.pop();
      for (int ai = g_.adj_start[p]; ai < g_.adj_start[p + 1]; ++ai) {
        int a = g_.adj_arcs[ai];
        int q = g_.arc_head[a];
        if (lm.l[q] == 0 || g_.rcap[a] <= 0) continue;
        lm.l[q] = 0;
        bfs.push(q);
      }
    }
    return lm;
  }

 private:
  static constexpr int kFree = 0, kSource = 1, kSink = 2;
  static constexpr int kNoArc = -1, kTerminal = -2, kOrphanArc = -3;

  // Does p's parent chain reach a terminal (not a pending orphan)?
  bool rooted(int p) const {
    while (true) {
      if (parent_[p] == kTerminal) return true;
      if (parent_[p] == kNoArc || parent_[p] == kOrphanArc) return false;
      p = g_.arc_head[parent_[p]];
    }
  }

  FlowGraph& g_;
  std::vector<int> tree_;
  std::vector<int> parent_;
};

}  // namespace detail

inline CutResult max_flow(const OverlapRegion& region, const EnergyModel& model) {
  FlowGraph g = build_graph(region, model);
  detail::BkSolver solver(g);
  int64_t flow = solver.run();

  CutResult r;
  r.labels = solver.labels_from_residual();
  r.flow_value = double(flow) / double(kCapacityScale);
  r.energy = evaluate_energy(region, model, r.labels);
  r.scaled_energy = scaled_energy_of(region, model, r.labels);
  return r;
}

// Exhaustive oracle for tiny instances. Ties break toward the smallest
// binary code, pixels row-major with label bits most-significant-first.
inline CutResult brute_force_min(const OverlapRegion& region, const EnergyModel& model) {
  int n = region.count();
  if (n > 20) throw InvalidArgumentError("brute_force_min: instance too large (|P| > 20)");

  std::vector<int64_t> d0(n), d1(n);
  for (int i = 0; i < n; ++i) {
    d0[i] = scale_cost(model.data[i][0]);
    d1[i] = scale_cost(model.data[i][1]);
  }
  std::vector<int64_t> s(region.edges.size());
  for (size_t e = 0; e < region.edges.size(); ++e) s[e] = scale_cost(model.smooth[e]);

  int64_t best = -1;
  uint32_t best_code = 0;
  LabelMap labels;
  labels.l.resize(n);
  for (uint32_t code = 0; code < (1u << n); ++code) {
    for (int i = 0; i < n; ++i) labels.l[i] = (code >> (n - 1 - i)) & 1u;
    int64_t e = 0;
    for (int i = 0; i < n; ++i) e += labels.l[i] ? d1[i] : d0[i];
    for (size_t k = 0; k < region.edges.size(); ++k)
      if (labels.l[region.edges[k].p] != labels.l[region.edges[k].q]) e += s[k];
    if (best < 0 || e < best) {
      best = e;
      best_code = code;
    }
  }

  CutResult r;
  r.labels.l.resize(n);
  for (int i = 0; i < n; ++i) r.labels.l[i] = (best_code >> (n - 1 - i)) & 1u;
  r.scaled_energy = best;
  r.energy = evaluate_energy(region, model, r.labels);
  int64_t base = 0;
  for (int i = 0; i < n; ++i) base += std::min(d0[i], d1[i]);
  r.flow_value = double(best - base) / double(kCapacityScale);
  return r;
}

}  // namespace seamweld
