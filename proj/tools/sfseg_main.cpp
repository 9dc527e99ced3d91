// Command-line front end. Every subcommand is a thin wrapper over one
// library call; see README.md for the flag reference.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "sfseg/edges.hpp"
#include "sfseg/fusion.hpp"
#include "sfseg/json_io.hpp"
#include "sfseg/metrics.hpp"
#include "sfseg/nig.hpp"
#include "sfseg/npy.hpp"
#include "sfseg/pipeline.hpp"
#include "sfseg/synth.hpp"

namespace {

using sfseg::Json;

struct ConfigFlags {
  std::string config_path;
  std::optional<double> tau1, tau2;
  std::optional<std::size_t> n_candidates;
  std::optional<int> align_radius;
  std::optional<std::string> mask_mode, fusion_mode;
  std::optional<std::uint64_t> seed;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file");
  cmd->add_option("--tau1", f.tau1, "entropy threshold");
  cmd->add_option("--tau2", f.tau2, "variance threshold");
  cmd->add_option("--n-candidates", f.n_candidates, "number of candidates");
  cmd->add_option("--align-radius", f.align_radius, "edge alignment radius (px)");
  cmd->add_option("--mask-mode", f.mask_mode, "hierarchical | nig_only");
  cmd->add_option("--fusion-mode", f.fusion_mode, "hard | soft");
  cmd->add_option("--seed", f.seed, "random seed");
}

Json config_file(const ConfigFlags& f) {
  return f.config_path.empty() ? Json::object() : sfseg::read_json_file(f.config_path);
}

sfseg::PipelineConfig resolve_config(const ConfigFlags& f) {
  Json j = config_file(f);
  if (f.tau1) j["tau1"] = *f.tau1;
  if (f.tau2) j["tau2"] = *f.tau2;
  if (f.n_candidates) j["n_candidates"] = *f.n_candidates;
  if (f.align_radius) j["align_radius"] = *f.align_radius;
  if (f.mask_mode) j["mask_mode"] = *f.mask_mode;
  if (f.fusion_mode) j["fusion_mode"] = *f.fusion_mode;
  if (f.seed) j["seed"] = *f.seed;
  sfseg::PipelineConfig cfg = sfseg::config_from_json(j);
  cfg.validate();
  return cfg;
}

void emit_json(const Json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) sfseg::fail(sfseg::ErrorCode::IoError, "cannot write " + path);
  out << text;
}

std::vector<double> parse_spacing(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      sfseg::fail(sfseg::ErrorCode::BadParams, "bad --spacing value '" + item + "'");
    }
  }
  return out;
}

std::optional<std::size_t> as_classes(std::size_t classes) {
  return classes == 0 ? std::nullopt : std::optional<std::size_t>(classes);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learning-free pseudo-label refinement for segmentation"};
  app.require_subcommand(1);

  // denoise
  ConfigFlags denoise_flags;
  std::string prob_path, out_path, entropy_path, variance_path;
  auto* denoise = app.add_subcommand("denoise", "Entropy + evidential denoising of a probability map");
  denoise->add_option("--prob", prob_path, "C x [D x] H x W float32 NPY")->required();
  denoise->add_option("--out", out_path, "denoised labels (uint8 NPY)")->required();
  denoise->add_option("--emit-entropy", entropy_path, "write voxel entropy (float32 NPY)");
  denoise->add_option("--emit-variance", variance_path, "write evidential variance (float32 NPY)");
  add_config_flags(denoise, denoise_flags);

  // select
  ConfigFlags select_flags;
  std::string condition_path, candidates_dir, select_out;
  std::size_t select_classes = 0;
  auto* select = app.add_subcommand("select", "Score candidate images against a condition label map");
  select->add_option("--condition", condition_path, "condition labels (uint8 NPY)")->required();
  select->add_option("--candidates", candidates_dir, "directory of candidate images")->required();
  select->add_option("--out", select_out, "JSON scores (stdout when omitted)");
  select->add_option("--classes", select_classes, "class count (default: max label + 1)");
  add_config_flags(select, select_flags);

  // fuse
  ConfigFlags fuse_flags;
  std::string pseudo_path, seg_path, fuse_out;
  std::size_t fuse_classes = 0;
  auto* fuse = app.add_subcommand("fuse", "Size-aware fusion of denoised labels and a segmentation");
  fuse->add_option("--pseudo", pseudo_path, "denoised labels (uint8 NPY)")->required();
  fuse->add_option("--seg", seg_path, "segmentation of the chosen candidate (uint8 NPY)")->required();
  fuse->add_option("--out", fuse_out, "fused labels (uint8 NPY)")->required();
  fuse->add_option("--classes", fuse_classes, "class count (default: max label + 1)");
  add_config_flags(fuse, fuse_flags);

  // pipeline
  ConfigFlags pipe_flags;
  std::string pipe_prob, pipe_out, pipe_report, pipe_candidates, pipe_seg;
  auto* pipeline = app.add_subcommand("pipeline", "Run denoise, select and fuse end to end");
  pipeline->add_option("--prob", pipe_prob, "probability map (float32 NPY)")->required();
  pipeline->add_option("--out", pipe_out, "fused labels (uint8 NPY)")->required();
  pipeline->add_option("--report", pipe_report, "JSON run report (stdout when omitted)");
  pipeline->add_option("--candidates", pipe_candidates, "directory of candidate images");
  pipeline->add_option("--seg", pipe_seg, "directory of per-candidate segmentations");
  add_config_flags(pipeline, pipe_flags);

  // metrics
  std::string pred_path, gt_path, spacing_text, metrics_out;
  std::size_t metrics_classes = 0;
  auto* metrics = app.add_subcommand("metrics", "Per-class Dice and average surface distance");
  metrics->add_option("--pred", pred_path, "predicted labels (uint8 NPY)")->required();
  metrics->add_option("--gt", gt_path, "reference labels (uint8 NPY)")->required();
  metrics->add_option("--spacing", spacing_text, "voxel spacing in mm, e.g. 1,1,1");
  metrics->add_option("--out", metrics_out, "JSON report (stdout when omitted)");
  metrics->add_option("--classes", metrics_classes, "class count (default: max label + 1)");

  // synth
  auto* synth = app.add_subcommand("synth", "Synthetic phantoms, corrupted maps and candidates");
  synth->require_subcommand(1);
  std::string phantom_config, phantom_out, phantom_image;
  std::optional<std::uint64_t> phantom_seed;
  auto* phantom = synth->add_subcommand("phantom", "Nested-ellipsoid label phantom");
  phantom->add_option("--config", phantom_config, "phantom spec JSON");
  phantom->add_option("--seed", phantom_seed, "random seed");
  phantom->add_option("--out", phantom_out, "labels (uint8 NPY)")->required();
  phantom->add_option("--image", phantom_image, "clean intensity image (float32 NPY)");

  std::string corrupt_config, corrupt_gt, corrupt_out;
  std::optional<std::uint64_t> corrupt_seed;
  auto* corrupt = synth->add_subcommand("corrupt", "Domain-shift-corrupted probability map");
  corrupt->add_option("--gt", corrupt_gt, "labels (uint8 NPY)")->required();
  corrupt->add_option("--config", corrupt_config, "corruption spec JSON");
  corrupt->add_option("--seed", corrupt_seed, "random seed");
  corrupt->add_option("--out", corrupt_out, "probability map (float32 NPY)")->required();
  std::size_t corrupt_classes = 0;
  corrupt->add_option("--classes", corrupt_classes, "class count (default: max label + 1)");

  ConfigFlags cand_flags;
  std::string cand_condition, cand_out;
  std::size_t cand_classes = 0;
  auto* cands = synth->add_subcommand("candidates", "Candidate renders of a label map");
  cands->add_option("--condition", cand_condition, "labels (uint8 NPY)")->required();
  cands->add_option("--out", cand_out, "output directory")->required();
  cands->add_option("--classes", cand_classes, "class count (default: max label + 1)");
  add_config_flags(cands, cand_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*denoise) {
      const auto cfg = resolve_config(denoise_flags);
      const auto prob = sfseg::npy::read_prob(prob_path);
      const auto result = sfseg::hierarchical_denoise(prob, cfg);
      sfseg::npy::write_array(out_path, result.refined);
      if (!entropy_path.empty()) {
        sfseg::npy::write_array(entropy_path, result.entropy.voxel_entropy);
      }
      if (!variance_path.empty()) sfseg::npy::write_array(variance_path, result.variance);
      emit_json(Json{{"argmax_foreground", result.pseudo.foreground_count()},
                     {"entropy_foreground", result.entropy_refined.foreground_count()},
                     {"refined_foreground", result.refined.foreground_count()},
                     {"voxels", result.refined.voxel_count()}},
                "");
    } else if (*select) {
      auto cfg = resolve_config(select_flags);
      const auto condition =
          sfseg::npy::read_labels(condition_path, as_classes(select_classes));
      std::vector<sfseg::Image> images;
      for (const auto& p : sfseg::list_arrays(candidates_dir)) {
        images.push_back(sfseg::npy::read_image(p));
      }
      const auto sel = sfseg::select_best(images, condition, cfg);
      Json scores = Json::array();
      for (const auto& s : sel.scores) {
        scores.push_back(Json{{"index", s.index},
                              {"score", sfseg::report_number(s.score)},
                              {"matched", s.matched},
                              {"condition_edges", s.condition_edges}});
      }
      emit_json(Json{{"best_index", sel.best_index}, {"scores", scores}}, select_out);
    } else if (*fuse) {
      const auto cfg = resolve_config(fuse_flags);
      const auto pseudo = sfseg::npy::read_labels(pseudo_path, as_classes(fuse_classes));
      auto seg = sfseg::npy::read_labels(seg_path, pseudo.classes());
      sfseg::npy::write_array(fuse_out, sfseg::fuse_or_bypass(pseudo, seg, cfg.fusion_mode));
    } else if (*pipeline) {
      const auto cfg = resolve_config(pipe_flags);
      const Json file = config_file(pipe_flags);
      sfseg::ProviderConfig providers;
      if (file.contains("providers")) {
        providers = sfseg::providers_from_json(file.at("providers"));
      }
      if (!pipe_candidates.empty()) {
        providers.candidates = sfseg::DirCandidateProvider{pipe_candidates};
      }
      if (!pipe_seg.empty()) providers.seg = sfseg::FileSegProvider{pipe_seg};
      const auto outcome = sfseg::run_pipeline_files(pipe_prob, providers, cfg, pipe_out);
      emit_json(outcome.report, pipe_report);
      if (outcome.exit_code != 0) {
        std::cerr << outcome.report.at("message").get<std::string>() << "\n";
      }
      return outcome.exit_code;
    } else if (*metrics) {
      auto gt = sfseg::npy::read_labels(gt_path, as_classes(metrics_classes));
      auto pred = sfseg::npy::read_labels(pred_path, as_classes(metrics_classes));
      const auto spacing = parse_spacing(spacing_text);
      const std::size_t classes = std::max(gt.classes(), pred.classes());
      gt = sfseg::LabelVolume(gt.shape(), classes,
                              {gt.values().begin(), gt.values().end()});
      pred = sfseg::LabelVolume(pred.shape(), classes,
                                {pred.values().begin(), pred.values().end()});
      emit_json(sfseg::metrics_to_json(sfseg::evaluate(pred, gt, spacing)), metrics_out);
    } else if (*phantom) {
      const Json j = phantom_config.empty() ? Json::object()
                                            : sfseg::read_json_file(phantom_config);
      auto spec = sfseg::phantom_spec_from_json(j);
      if (phantom_seed) spec.seed = *phantom_seed;
      const auto ph = sfseg::make_phantom(spec);
      sfseg::npy::write_array(phantom_out, ph.labels);
      if (!phantom_image.empty()) sfseg::npy::write_array(phantom_image, ph.image);
    } else if (*corrupt) {
      const Json j = corrupt_config.empty() ? Json::object()
                                            : sfseg::read_json_file(corrupt_config);
      auto spec = sfseg::corruption_spec_from_json(j);
      if (corrupt_seed) spec.seed = *corrupt_seed;
      const auto gt = sfseg::npy::read_labels(corrupt_gt, as_classes(corrupt_classes));
      sfseg::npy::write_array(corrupt_out, sfseg::corrupt_probmap(gt, spec));
    } else if (*cands) {
      const auto cfg = resolve_config(cand_flags);
      const Json file = config_file(cand_flags);
      sfseg::ProviderConfig providers;
      if (file.contains("providers")) {
        providers = sfseg::providers_from_json(file.at("providers"));
      }
      if (!std::holds_alternative<sfseg::SynthCandidateProvider>(providers.candidates)) {
        sfseg::fail(sfseg::ErrorCode::BadConfig,
                    "synth candidates needs a synth candidate provider");
      }
      const auto condition =
          sfseg::npy::read_labels(cand_condition, as_classes(cand_classes));
      const auto images = sfseg::provide_candidates(providers.candidates, condition, cfg);
      std::filesystem::create_directories(cand_out);
      for (std::size_t i = 0; i < images.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "candidate_%03zu.npy", i);
        sfseg::npy::write_array(std::filesystem::path(cand_out) / name, images[i]);
      }
    }
  } catch (const sfseg::Error& e) {
    std::cerr << e.what() << "\n";
    return sfseg::exit_code(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "IoError: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
