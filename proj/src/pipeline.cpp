#include "sfseg/pipeline.hpp"

#include <algorithm>

#include "sfseg/npy.hpp"
#include "sfseg/rng.hpp"

namespace sfseg {
namespace {

template <typename F>
auto as_provider_error(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ProviderError) throw;
    fail(ErrorCode::ProviderError, e.what());
  }
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

std::vector<RenderSpec> default_render_specs(const PipelineConfig& cfg) {
  std::vector<RenderSpec> specs;
  for (std::size_t i = 0; i < cfg.n_candidates; ++i) {
    RenderSpec spec;
    spec.seed = split_seed(cfg.seed, i);
    spec.quality = Rng(spec.seed).uniform();
    specs.push_back(spec);
  }
  return specs;
}

ProviderConfig providers_from_json(const Json& j) try {
  ProviderConfig providers;
  if (!j.is_object()) fail(ErrorCode::BadConfig, "providers must be an object");
  for (const auto& item : j.items()) {
    if (item.key() != "seg" && item.key() != "candidates") {
      fail(ErrorCode::BadConfig, "providers: unknown key '" + item.key() + "'");
    }
  }
  if (j.contains("seg")) {
    const Json& seg = j.at("seg");
    if (seg.contains("toy")) {
      ToySegProvider toy;
      const Json& t = seg.at("toy");
      if (t.contains("class_intensities")) {
        toy.class_intensities = t.at("class_intensities").get<std::vector<double>>();
      }
      providers.seg = toy;
    } else if (seg.contains("file")) {
      providers.seg = FileSegProvider{seg.at("file").get<std::string>()};
    } else {
      fail(ErrorCode::BadConfig, "providers.seg needs 'toy' or 'file'");
    }
  }
  if (j.contains("candidates")) {
    const Json& cand = j.at("candidates");
    if (cand.contains("synth")) {
      SynthCandidateProvider synth;
      for (const Json& r : cand.at("synth")) {
        synth.renders.push_back(render_spec_from_json(r));
      }
      providers.candidates = synth;
    } else if (cand.contains("dir")) {
      providers.candidates = DirCandidateProvider{cand.at("dir").get<std::string>()};
    } else {
      fail(ErrorCode::BadConfig, "providers.candidates needs 'synth' or 'dir'");
    }
  }
  return providers;
} catch (const Json::exception& e) {
  fail(ErrorCode::BadConfig, std::string("providers: ") + e.what());
}

std::vector<std::filesystem::path> list_arrays(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    fail(ErrorCode::IoError, dir.string() + " is not a directory");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".npy") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
    return a.filename().string() < b.filename().string();
  });
  return files;
}

std::vector<Image> provide_candidates(const CandidateProvider& provider,
                                      const LabelVolume& condition,
                                      const PipelineConfig& cfg) {
  return as_provider_error([&] {
    std::vector<Image> images = std::visit(
        overloaded{
            [&](const SynthCandidateProvider& synth) {
              const auto specs =
                  synth.renders.empty() ? default_render_specs(cfg) : synth.renders;
              std::vector<Image> out;
              for (const RenderSpec& spec : specs) {
                out.push_back(render_candidate(condition, spec));
              }
              return out;
            },
            [&](const DirCandidateProvider& dir) {
              std::vector<Image> out;
              for (const auto& path : list_arrays(dir.dir)) {
                out.push_back(npy::read_image(path));
              }
              return out;
            }},
        provider);
    if (images.size() != cfg.n_candidates) {
      fail(ErrorCode::ProviderError,
           "candidate provider yielded " + std::to_string(images.size()) +
               " images, expected n_candidates = " + std::to_string(cfg.n_candidates));
    }
    for (const Image& img : images) {
      require_same_grid(img.shape(), condition.shape(), "candidate image");
    }
    return images;
  });
}

LabelVolume provide_segmentation(const SegProvider& provider, const Image& best,
                                 std::size_t best_index, const LabelVolume& condition) {
  return as_provider_error([&] {
    LabelVolume seg = std::visit(
        overloaded{
            [&](const ToySegProvider& toy) {
              const auto intensities = toy.class_intensities.empty()
                                           ? default_class_intensities(condition.classes())
                                           : toy.class_intensities;
              return toy_segment(best, intensities);
            },
            [&](const FileSegProvider& file) {
              const auto files = list_arrays(file.dir);
              if (best_index >= files.size()) {
                fail(ErrorCode::ProviderError,
                     "no segmentation file for candidate " + std::to_string(best_index));
              }
              return npy::read_labels(files[best_index], condition.classes());
            }},
        provider);
    require_same_grid(seg.shape(), condition.shape(), "segmentation");
    if (seg.classes() != condition.classes()) {
      fail(ErrorCode::ProviderError, "segmentation class count differs from the pipeline's");
    }
    return seg;
  });
}

PipelineResult run_pipeline(const ProbVolume& prob, const ProviderConfig& providers,
                            const PipelineConfig& cfg) {
  DenoiseResult denoise = hierarchical_denoise(prob, cfg);
  const LabelVolume& refined = denoise.refined;
  if (refined.foreground_count() == 0) {
    fail(ErrorCode::NoForeground, "denoised pseudo-labels are entirely background");
  }
  const std::vector<Image> candidates =
      provide_candidates(providers.candidates, refined, cfg);
  Selection selection = select_best(candidates, refined, cfg);
  LabelVolume seg = provide_segmentation(providers.seg, candidates[selection.best_index],
                                         selection.best_index, refined);
  SizeStats sizes = class_sizes(refined);
  const bool bypassed = sizes.counts.size() == 1;
  LabelVolume output = fuse_or_bypass(refined, seg, cfg.fusion_mode);
  return PipelineResult{std::move(denoise), std::move(selection), std::move(seg),
                        bypassed,           std::move(sizes),     std::move(output)};
}

Json pipeline_report(const PipelineResult& result, const PipelineConfig& cfg) {
  Json scores = Json::array();
  for (const CandidateScore& s : result.selection.scores) {
    scores.push_back(Json{{"index", s.index},
                          {"score", report_number(s.score)},
                          {"matched", s.matched},
                          {"condition_edges", s.condition_edges}});
  }
  Json fusion = size_stats_to_json(result.sizes);
  fusion["bypassed"] = result.fusion_bypassed;
  return Json{
      {"status", "ok"},
      {"exit_code", 0},
      {"config", config_to_json(cfg)},
      {"retention",
       {{"voxels", result.output.voxel_count()},
        {"argmax_foreground", result.denoise.pseudo.foreground_count()},
        {"entropy_foreground", result.denoise.entropy_refined.foreground_count()},
        {"refined_foreground", result.denoise.refined.foreground_count()},
        {"output_foreground", result.output.foreground_count()}}},
      {"selection", {{"best_index", result.selection.best_index}, {"scores", scores}}},
      {"fusion", fusion},
  };
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError:
    case ErrorCode::BadHeader:
    case ErrorCode::DtypeMismatch:
    case ErrorCode::ShapeMismatch:
    case ErrorCode::NotNormalized:
    case ErrorCode::OutOfRange:
    case ErrorCode::BadRank:
      return 2;
    case ErrorCode::BadConfig:
    case ErrorCode::BadParams:
    case ErrorCode::BadSpec:
      return 3;
    case ErrorCode::AlphaNotGreaterThanOne:
    case ErrorCode::EmptyConditionEdges:
    case ErrorCode::NoForeground:
    case ErrorCode::EmptySurface:
      return 4;
    case ErrorCode::ProviderError:
      return 5;
  }
  return 1;
}

Json error_report(const Error& error) {
  return Json{{"status", "error"},
              {"error", std::string(to_string(error.code()))},
              {"message", error.what()},
              {"exit_code", exit_code(error.code())}};
}

FileRunOutcome run_pipeline_files(const std::filesystem::path& prob_path,
                                  const ProviderConfig& providers,
                                  const PipelineConfig& cfg,
                                  const std::filesystem::path& out_path) {
  try {
    cfg.validate();
    const ProbVolume prob = npy::read_prob(prob_path);
    const PipelineResult result = run_pipeline(prob, providers, cfg);
    npy::write_array(out_path, result.output);
    return FileRunOutcome{0, pipeline_report(result, cfg)};
  } catch (const Error& e) {
    return FileRunOutcome{exit_code(e.code()), error_report(e)};
  }
}

}  // namespace sfseg
