// seamweld: seam-cutting image stitcher with a perception-based energy.
//
// Subcommands:
//   stitch  full pipeline, writes the blended mosaic
//   seam    stops before blending, writes the seam overlay + labeling file
//   maps    writes the intermediate difference / saliency maps
//   oracle  brute-forces a serialized energy instance
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "seamweld/seamweld.hpp"

namespace {

struct CommonArgs {
  std::string img0, img1;
  std::string homography, mask0, mask1;
  seamweld::StitchConfig config;
  std::string metric = "sigmoid";
  bool no_saliency = false;
  std::string blend = "poisson";
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_blend) {
  cmd->add_option("img0", a.img0, "reference image (PNG or PPM)")->required();
  cmd->add_option("img1", a.img1, "second image")->required();
  cmd->add_option("-H,--homography", a.homography,
                  "3x3 homography file (nine decimals, row-major) mapping img1 into img0's frame");
  cmd->add_option("--mask0", a.mask0, "footprint mask for img0 (same-canvas mode)");
  cmd->add_option("--mask1", a.mask1, "footprint mask for img1 (same-canvas mode)");
  cmd->add_option("--metric", a.metric, "color difference metric")
      ->check(CLI::IsMember({"euclidean", "sigmoid"}));
  cmd->add_flag("--no-saliency", a.no_saliency, "disable saliency weights");
  cmd->add_option("--epsilon", a.config.epsilon, "Otsu histogram bin width")->check(CLI::PositiveNumber);
  cmd->add_option("--passes", a.config.passes, "MBD saliency sweep count")->check(CLI::PositiveNumber);
  cmd->add_option("--max-dim", a.config.max_dim,
                  "downscale so max(w,h) <= this before stitching (preview only)");
  cmd->add_option("--dump-dir", a.config.dump_dir, "directory for stage dumps");
  if (with_blend) {
    cmd->add_option("--blend", a.blend, "blending mode")->check(CLI::IsMember({"none", "poisson"}));
    cmd->add_option("--tol", a.config.tol, "Poisson solver max-residual tolerance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", a.config.max_iter, "Poisson solver iteration cap (0 = auto)");
  }
}

seamweld::StitchResult run_pipeline(CommonArgs& a) {
  a.config.metric =
      (a.metric == "euclidean") ? seamweld::Metric::kEuclidean : seamweld::Metric::kSigmoid;
  a.config.use_saliency = !a.no_saliency;
  a.config.blend = (a.blend == "none") ? seamweld::StitchConfig::Blend::kNone
                                       : seamweld::StitchConfig::Blend::kPoisson;
  seamweld::AlignedPair pair =
      seamweld::load_inputs(a.img0, a.img1, a.homography, a.mask0, a.mask1);
  return seamweld::stitch(a.config, pair);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seamweld: perception-based seam-cutting image stitcher"};
  app.require_subcommand(1);

  CommonArgs stitch_args, seam_args, maps_args;
  std::string out_path, labels_path, out_dir, instance_path;

  CLI::App* cmd_stitch = app.add_subcommand("stitch", "run the full pipeline");
  add_common(cmd_stitch, stitch_args, /*with_blend=*/true);
  cmd_stitch->add_option("-o,--output", out_path, "output mosaic path")->required();

  CLI::App* cmd_seam = app.add_subcommand("seam", "compute the seam only");
  add_common(cmd_seam, seam_args, /*with_blend=*/false);
  cmd_seam->add_option("-o,--output", out_path, "seam overlay output path")->required();
  cmd_seam->add_option("--labels", labels_path, "labeling text file output path");

  CLI::App* cmd_maps = app.add_subcommand("maps", "emit intermediate maps");
  add_common(cmd_maps, maps_args, /*with_blend=*/false);
  cmd_maps->add_option("--out-dir", out_dir, "output directory for maps")->required();

  CLI::App* cmd_oracle = app.add_subcommand("oracle", "brute-force a serialized instance");
  cmd_oracle->add_option("instance", instance_path, "instance file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // collapse CLI11's error codes to 1
  }

  try {
    if (cmd_stitch->parsed()) {
      seamweld::StitchResult res = run_pipeline(stitch_args);
      seamweld::save_image(res.image, out_path);
      std::cout << res.report.to_text();
    } else if (cmd_seam->parsed()) {
      seam_args.blend = "none";
      seamweld::StitchResult res = run_pipeline(seam_args);
      auto seam = seamweld::extract_seam(res.region, res.labels);
      seamweld::save_image(seamweld::render_seam_overlay(res.image, res.region, seam), out_path);
      if (!labels_path.empty()) {
        std::ofstream out(labels_path);
        if (!out) throw seamweld::IoError("cannot open labels file: " + labels_path);
        seamweld::write_labels(out, res.region, res.labels);
      }
      std::cout << res.report.to_text();
    } else if (cmd_maps->parsed()) {
      maps_args.blend = "none";
      maps_args.config.dump_dir = out_dir;
      seamweld::StitchResult res = run_pipeline(maps_args);
      std::cout << res.report.to_text();
    } else if (cmd_oracle->parsed()) {
      std::ifstream in(instance_path);
      if (!in) throw seamweld::IoError("cannot open instance file: " + instance_path);
      seamweld::Instance inst = seamweld::read_instance(in);
      seamweld::CutResult r = seamweld::brute_force_min(inst.region, inst.model);
      std::cout.precision(12);
      std::cout << "energy=" << r.energy << '\n';
      std::cout << "labels=";
      for (uint8_t l : r.labels.l) std::cout << char('0' + l);
      std::cout << '\n';
    }
  } catch (const seamweld::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
