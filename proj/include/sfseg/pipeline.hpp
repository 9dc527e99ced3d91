#pragma once

#include <filesystem>
#include <optional>
#include <variant>
#include <vector>

#include "sfseg/config.hpp"
#include "sfseg/edges.hpp"
#include "sfseg/fusion.hpp"
#include "sfseg/json_io.hpp"
#include "sfseg/nig.hpp"
#include "sfseg/synth.hpp"

namespace sfseg {

// Stand-in for the frozen segmentation model applied to the chosen candidate.
struct ToySegProvider {
  std::vector<double> class_intensities;  // empty: default_class_intensities
};
// Precomputed segmentations, one per candidate: the *.npy files of `dir` in
// lexicographic order, index i belonging to candidate i.
struct FileSegProvider {
  std::filesystem::path dir;
};
using SegProvider = std::variant<ToySegProvider, FileSegProvider>;

// Stand-in for the conditional generator: renders of the denoised labels.
struct SynthCandidateProvider {
  std::vector<RenderSpec> renders;  // empty: default_render_specs
};
// Candidate images: the *.npy files of `dir` in lexicographic order.
struct DirCandidateProvider {
  std::filesystem::path dir;
};
using CandidateProvider = std::variant<SynthCandidateProvider, DirCandidateProvider>;

struct ProviderConfig {
  SegProvider seg = ToySegProvider{};
  CandidateProvider candidates = SynthCandidateProvider{};
};

// n_candidates renders; candidate i uses seed split_seed(cfg.seed, i) and a
// quality drawn uniformly from [0, 1) by a generator with that seed.
std::vector<RenderSpec> default_render_specs(const PipelineConfig& cfg);

// Reads the "providers" object of a config file:
//   {"seg": {"toy": {"class_intensities": [...]}} | {"file": "<dir>"},
//    "candidates": {"synth": [RenderSpec, ...]} | {"dir": "<dir>"}}
ProviderConfig providers_from_json(const Json& j);

// Lists the *.npy files of a directory sorted by file name.
std::vector<std::filesystem::path> list_arrays(const std::filesystem::path& dir);

std::vector<Image> provide_candidates(const CandidateProvider& provider,
                                      const LabelVolume& condition,
                                      const PipelineConfig& cfg);

LabelVolume provide_segmentation(const SegProvider& provider, const Image& best,
                                 std::size_t best_index, const LabelVolume& condition);

struct PipelineResult {
  DenoiseResult denoise;
  Selection selection;
  LabelVolume segmentation;
  bool fusion_bypassed = false;
  SizeStats sizes;
  LabelVolume output;
};

// Denoise -> candidate selection -> segmentation of the winner -> fusion.
// Provider failures surface as ProviderError.
PipelineResult run_pipeline(const ProbVolume& prob, const ProviderConfig& providers,
                            const PipelineConfig& cfg);

Json pipeline_report(const PipelineResult& result, const PipelineConfig& cfg);

// 2 input, 3 config, 4 pipeline stage, 5 provider.
int exit_code(ErrorCode code);

Json error_report(const Error& error);

struct FileRunOutcome {
  int exit_code = 0;
  Json report;
};

// File-level pipeline: reads the probability map, runs, writes the fused
// labels to `out_path`. Errors are reported, never thrown.
FileRunOutcome run_pipeline_files(const std::filesystem::path& prob_path,
                                  const ProviderConfig& providers,
                                  const PipelineConfig& cfg,
                                  const std::filesystem::path& out_path);

}  // namespace sfseg
