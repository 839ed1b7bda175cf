#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "seamweld/blend.hpp"
#include "seamweld/io.hpp"
#include "seamweld/mincut.hpp"
#include "seamweld/saliency.hpp"

namespace seamweld {

struct StitchConfig {
  double epsilon = kDefaultEpsilon;
  int passes = 3;
  Metric metric = Metric::kSigmoid;
  bool use_saliency = true;
  enum class Blend { kNone, kPoisson } blend = Blend::kPoisson;
  double tol = 1e-4;
  int max_iter = 0;  // 0: instance-derived default
  std::string dump_dir;
  int max_dim = 0;  // 0: no downscale (preview-only option)
};

struct StitchReport {
  double tau = 0.0;
  double kappa = 0.0;
  size_t seam_length = 0;
  double energy = 0.0;
  double normal_energy_of_same_seam = 0.0;
  std::map<std::string, double> timings_ms;
  std::vector<std::string> warnings;

  std::string to_text() const {
    std::ostringstream out;
    out.precision(12);
    out << "tau=" << tau << '\n';
    out << "kappa=" << kappa << '\n';
    out << "seam_length=" << seam_length << '\n';
    out << "energy=" << energy << '\n';
    out << "normal_energy_of_same_seam=" << normal_energy_of_same_seam << '\n';
    for (const auto& [k, v] : timings_ms) out << "time_ms_" << k << '=' << v << '\n';
    for (const auto& warning : warnings) out << "warning=" << warning << '\n';
    return out.str();
  }
};

struct StitchResult {
  ImageBuffer image;
  StitchReport report;
  OverlapRegion region;
  LabelMap labels;
  DiffField euclidean;
  DiffField metric_field;  // the field the energy was built from
  SaliencyMap omega;       // empty plane when saliency is off
};

namespace detail {

class StageTimer {
 public:
  explicit StageTimer(StitchReport& report) : report_(report) {}
  template <typename F>
  auto run(const std::string& name, F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    auto result = f();
    auto t1 = std::chrono::steady_clock::now();
    report_.timings_ms[name] = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return result;
  }

 private:
  StitchReport& report_;
};

}  // namespace detail

// Full seam-cutting pipeline: overlap -> color difference -> (Otsu + sigmoid
// remap) -> (saliency weights) -> data term -> min-cut -> blend.
inline StitchResult stitch(const StitchConfig& config, const AlignedPair& input) {
  if (config.epsilon <= 0.0) throw InvalidArgumentError("stitch: epsilon must be > 0");
  if (config.passes < 1) throw InvalidArgumentError("stitch: passes must be >= 1");

  StitchResult res;
  detail::StageTimer timer(res.report);

  const AlignedPair pair =
      config.max_dim > 0 ? downscale_pair(input, config.max_dim) : input;

  res.region = timer.run("classify_borders", [&] { return classify_borders(pair); });
  res.euclidean = timer.run("euclidean_diff", [&] { return euclidean_diff(pair, res.region); });

  if (config.metric == Metric::kSigmoid) {
    SigmoidParams params;
    try {
      params = otsu_threshold(res.euclidean, config.epsilon);
    } catch (const DegenerateHistogramError&) {
      // Perfectly aligned inputs still stitch: fall back to mid-domain tau.
      params.epsilon = config.epsilon;
      params.kappa = 1.0 / config.epsilon;
      params.tau = res.euclidean.domain_max / 2.0;
      res.report.warnings.push_back("degenerate histogram: tau fell back to domain_max/2");
    }
    res.report.tau = params.tau;
    res.report.kappa = params.kappa;
    res.metric_field =
        timer.run("sigmoid_remap", [&] { return sigmoid_remap(res.euclidean, params); });
  } else {
    res.metric_field = res.euclidean;
  }

  WeightField weights;
  if (config.use_saliency) {
    res.omega =
        timer.run("saliency", [&] { return average_saliency(pair, res.region, config.passes); });
    weights = weight_field(res.omega, res.region);
  }

  EnergyModel model = timer.run("build_energy", [&] {
    return build_energy(res.region, res.metric_field, config.use_saliency ? &weights : nullptr);
  });

  CutResult cut = timer.run("mincut", [&] { return max_flow(res.region, model); });
  res.labels = cut.labels;
  res.report.energy = cut.energy;
  res.report.seam_length = extract_seam(res.region, res.labels).size();

  // Same seam scored under the unweighted (normal-framework) energy.
  EnergyModel normal_model = build_energy(res.region, res.metric_field, nullptr);
  res.report.normal_energy_of_same_seam = evaluate_energy(res.region, normal_model, res.labels);

  CompositePlan plan = make_plan(pair, res.region, res.labels);
  if (config.blend == StitchConfig::Blend::kPoisson) {
    PoissonResult blended = timer.run(
        "poisson", [&] { return composite_poisson(pair, plan, config.tol, config.max_iter); });
    if (!blended.converged)
      res.report.warnings.push_back("poisson solve did not converge within max_iter");
    res.image = std::move(blended.image);
  } else {
    res.image = timer.run("composite", [&] { return composite_direct(pair, plan); });
  }

  if (!res.image.finite_in_range()) throw Error("internal: composite left [0,1]");

  if (!config.dump_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(config.dump_dir);
    auto path = [&](const char* name) { return (fs::path(config.dump_dir) / name).string(); };
    save_plane(diff_to_plane(res.euclidean, res.region), path("diff_euclidean.png"));
    if (config.metric == Metric::kSigmoid)
      save_plane(diff_to_plane(res.metric_field, res.region), path("diff_sigmoid.png"));
    if (config.use_saliency) save_plane(res.omega.values, path("omega.png"));
    save_image(render_seam_overlay(res.image, res.region, plan.seam), path("seam_overlay.png"));
  }
  return res;
}

// Resolves CLI inputs to an aligned pair: either a homography file or a pair
// of mask files (or PNG alpha footprints) must pin the two images to one
// canvas.
inline AlignedPair load_inputs(const std::string& img0_path, const std::string& img1_path,
                               const std::string& homography_path, const std::string& mask0_path,
                               const std::string& mask1_path) {
  BitMask alpha0, alpha1;
  ImageBuffer img0 = load_image(img0_path, &alpha0);
  ImageBuffer img1 = load_image(img1_path, &alpha1);

  if (!homography_path.empty()) {
    Homography h = Homography::from_file(homography_path);
    return make_aligned_pair(img0, img1, h, std::nullopt, std::nullopt);
  }

  std::optional<BitMask> m0, m1;
  if (!mask0_path.empty()) m0 = load_mask(mask0_path);
  else if (alpha0.width > 0) m0 = std::move(alpha0);
  else m0 = BitMask(img0.width, img0.height, true);
  if (!mask1_path.empty()) m1 = load_mask(mask1_path);
  else if (alpha1.width > 0) m1 = std::move(alpha1);
  else m1 = BitMask(img1.width, img1.height, true);
  return make_aligned_pair(img0, img1, std::nullopt, m0, m1);
}

// Text labeling dump: dims line, then one row per canvas row
// ('0'/'1' inside P, '-' outside).
inline void write_labels(std::ostream& out, const OverlapRegion& region, const LabelMap& labels) {
  out << region.canvas_w << ' ' << region.canvas_h << '\n';
  for (int y = 0; y < region.canvas_h; ++y) {
    for (int x = 0; x < region.canvas_w; ++x) {
      int i = region.index_of[static_cast<size_t>(y) * region.canvas_w + x];
      out << (i < 0 ? '-' : char('0' + labels.l[i]));
    }
    out << '\n';
  }
}

}  // namespace seamweld
