#pragma once

#include <array>
#include <istream>
#include <ostream>
#include <string>

#include "seamweld/colordiff.hpp"

namespace seamweld {

// Binary labeling of P; l[i] in {0,1}, indexed like OverlapRegion::pixels.
struct LabelMap {
  std::vector<uint8_t> l;
};

// Data costs D_p(0), D_p(1) and per-edge smoothness costs, ready for the cut.
struct EnergyModel {
  std::vector<std::array<double, 2>> data;  // per pixel
  std::vector<double> smooth;               // per edge, charged across the cut
  double mu = 0.0;
};

// Assembles the labeling problem. Smoothness per edge (p,q) is
// W * (diff(p)+diff(q))/2, with W = 1 when no weight field is given. Data
// costs pin border pixels to their owning image with penalty mu; mu < 0
// requests the instance-derived default 1 + sum of all smoothness costs.
inline EnergyModel build_energy(const OverlapRegion& region, const DiffField& diff,
                                const WeightField* weights = nullptr, double mu = -1.0) {
  if (static_cast<int>(diff.values.size()) != region.count())
    throw InvalidArgumentError("build_energy: diff field does not cover P");
  if (weights && weights->w.size() != region.edges.size())
    throw InvalidArgumentError("build_energy: weight field does not cover N");

  EnergyModel m;
  m.smooth.resize(region.edges.size());
  double sum = 0.0;
  for (size_t e = 0; e < region.edges.size(); ++e) {
    const auto& edge = region.edges[e];
    double s = 0.5 * (diff.values[edge.p] + diff.values[edge.q]);
    if (weights) s *= weights->w[e];
    m.smooth[e] = s;
    sum += s;
  }

  m.mu = (mu < 0.0) ? 1.0 + sum : mu;
  if (m.mu <= sum)
    throw InvalidArgumentError("build_energy: penalty too small (mu must exceed total smoothness)");

  m.data.assign(region.count(), {0.0, 0.0});
  for (int i = 0; i < region.count(); ++i) {
    if (region.border[i] & kBorderImage0) m.data[i] = {0.0, m.mu};
    if (region.border[i] & kBorderImage1) m.data[i] = {m.mu, 0.0};
  }
  return m;
}

inline double evaluate_energy(const OverlapRegion& region, const EnergyModel& model,
                              const LabelMap& labels) {
  if (labels.l.size() != model.data.size())
    throw InvalidArgumentError("evaluate_energy: labeling is not total");
  double e = 0.0;
  for (size_t i = 0; i < model.data.size(); ++i) e += model.data[i][labels.l[i]];
  for (size_t k = 0; k < region.edges.size(); ++k) {
    const auto& edge = region.edges[k];
    if (labels.l[edge.p] != labels.l[edge.q]) e += model.smooth[k];
  }
  return e;
}

// Cut edges (l_p != l_q) in row-major order by first endpoint.
inline std::vector<OverlapRegion::Edge> extract_seam(const OverlapRegion& region,
                                                     const LabelMap& labels) {
  std::vector<OverlapRegion::Edge> seam;
  for (const auto& edge : region.edges)
    if (labels.l[edge.p] != labels.l[edge.q]) seam.push_back(edge);
  return seam;
}

// --- plain-text instance dump (consumed by the oracle subcommand) --------

inline std::string border_flags_string(uint8_t f) {
  std::string s;
  if (f & kBorderImage0) s += '0';
  if (f & kBorderImage1) s += '1';
  if (f & kBorderCanvas) s += '#';
  return s.empty() ? "-" : s;
}

inline void write_instance(std::ostream& out, const OverlapRegion& region,
                           const EnergyModel& model) {
  out << "seamweld-instance 1\n";
  out << "dims " << region.canvas_w << ' ' << region.canvas_h << '\n';
  out << "mu " << model.mu << '\n';
  out << "pixels " << region.count() << '\n';
  for (int i = 0; i < region.count(); ++i) {
    out << i << ' ' << region.pixels[i].first << ' ' << region.pixels[i].second << ' '
        << model.data[i][0] << ' ' << model.data[i][1] << ' ' << border_flags_string(region.border[i])
        << '\n';
  }
  out << "edges " << region.edges.size() << '\n';
  for (size_t e = 0; e < region.edges.size(); ++e)
    out << region.edges[e].p << ' ' << region.edges[e].q << ' ' << model.smooth[e] << '\n';
}

struct Instance {
  OverlapRegion region;  // geometry only (pixels/edges); masks not rebuilt
  EnergyModel model;
};

inline Instance read_instance(std::istream& in) {
  Instance inst;
  std::string word;
  int version = 0;
  if (!(in >> word >> version) || word != "seamweld-instance" || version != 1)
    throw FormatError("not a seamweld instance file");
  if (!(in >> word >> inst.region.canvas_w >> inst.region.canvas_h) || word != "dims")
    throw FormatError("instance: missing dims");
  if (!(in >> word >> inst.model.mu) || word != "mu") throw FormatError("instance: missing mu");

  int n = 0;
  if (!(in >> word >> n) || word != "pixels" || n < 1) throw FormatError("instance: missing pixels");
  inst.region.inside = BitMask(inst.region.canvas_w, inst.region.canvas_h);
  inst.region.index_of.assign(
      static_cast<size_t>(inst.region.canvas_w) * inst.region.canvas_h, -1);
  inst.region.pixels.resize(n);
  inst.region.border.resize(n);
  inst.model.data.resize(n);
  for (int i = 0; i < n; ++i) {
    int idx, x, y;
    double d0, d1;
    std::string flags;
    if (!(in >> idx >> x >> y >> d0 >> d1 >> flags) || idx != i)
      throw FormatError("instance: bad pixel line");
    inst.region.pixels[i] = {x, y};
    inst.region.inside.set(x, y, true);
    inst.region.index_of[static_cast<size_t>(y) * inst.region.canvas_w + x] = i;
    inst.model.data[i] = {d0, d1};
    uint8_t f = kBorderNone;
    for (char c : flags) {
      if (c == '0') f |= kBorderImage0;
      if (c == '1') f |= kBorderImage1;
      if (c == '#') f |= kBorderCanvas;
    }
    inst.region.border[i] = f;
  }

  int m = 0;
  if (!(in >> word >> m) || word != "edges" || m < 0) throw FormatError("instance: missing edges");
  inst.region.edges.resize(m);
  inst.model.smooth.resize(m);
  for (int e = 0; e < m; ++e) {
    if (!(in >> inst.region.edges[e].p >> inst.region.edges[e].q >> inst.model.smooth[e]))
      throw FormatError("instance: bad edge line");
  }
  return inst;
}

}  // namespace seamweld
