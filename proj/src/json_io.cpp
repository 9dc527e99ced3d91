#include "sfseg/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <type_traits>

namespace sfseg {
namespace {

template <typename T>
void read_field(const Json& j, const char* key, T& out, ErrorCode code) {
  if (!j.contains(key)) return;
  if constexpr (std::is_unsigned_v<T>) {
    if (!j.at(key).is_number_unsigned()) {
      fail(code, std::string("field '") + key + "' must be a non-negative integer");
    }
  }
  try {
    out = j.at(key).get<T>();
  } catch (const Json::exception& e) {
    fail(code, std::string("field '") + key + "': " + e.what());
  }
}

void reject_unknown(const Json& j, const std::set<std::string>& known,
                    ErrorCode code, const char* what) {
  if (!j.is_object()) fail(code, std::string(what) + " must be a JSON object");
  for (const auto& item : j.items()) {
    if (!known.contains(item.key())) {
      fail(code, std::string(what) + ": unknown key '" + item.key() + "'");
    }
  }
}

}  // namespace

double report_number(double value) {
  if (!std::isfinite(value)) return value;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return std::strtod(buf, nullptr);
}

PipelineConfig config_from_json(const Json& j, PipelineConfig cfg) {
  constexpr auto code = ErrorCode::BadConfig;
  reject_unknown(j,
                 {"tau1", "tau2", "kappa", "epsilon", "zeta1", "zeta2", "eta1",
                  "eta2", "n_candidates", "canny", "align_radius", "mask_mode",
                  "fusion_mode", "seed", "providers"},
                 code, "pipeline config");
  read_field(j, "tau1", cfg.tau1, code);
  read_field(j, "tau2", cfg.tau2, code);
  read_field(j, "kappa", cfg.kappa, code);
  read_field(j, "epsilon", cfg.epsilon, code);
  read_field(j, "zeta1", cfg.zeta1, code);
  read_field(j, "zeta2", cfg.zeta2, code);
  read_field(j, "eta1", cfg.eta1, code);
  read_field(j, "eta2", cfg.eta2, code);
  read_field(j, "n_candidates", cfg.n_candidates, code);
  read_field(j, "align_radius", cfg.align_radius, code);
  read_field(j, "seed", cfg.seed, code);
  if (j.contains("canny")) {
    const Json& c = j.at("canny");
    reject_unknown(c, {"sigma", "high", "low"}, code, "canny");
    read_field(c, "sigma", cfg.canny.sigma, code);
    read_field(c, "high", cfg.canny.high, code);
    read_field(c, "low", cfg.canny.low, code);
  }
  if (j.contains("mask_mode")) {
    std::string mode;
    read_field(j, "mask_mode", mode, code);
    if (mode == "hierarchical") {
      cfg.mask_mode = MaskMode::Hierarchical;
    } else if (mode == "nig_only") {
      cfg.mask_mode = MaskMode::NigOnly;
    } else {
      fail(code, "mask_mode must be 'hierarchical' or 'nig_only'");
    }
  }
  if (j.contains("fusion_mode")) {
    std::string mode;
    read_field(j, "fusion_mode", mode, code);
    if (mode == "hard") {
      cfg.fusion_mode = FusionMode::Hard;
    } else if (mode == "soft") {
      cfg.fusion_mode = FusionMode::Soft;
    } else {
      fail(code, "fusion_mode must be 'hard' or 'soft'");
    }
  }
  return cfg;
}

Json config_to_json(const PipelineConfig& cfg) {
  return Json{
      {"tau1", report_number(cfg.tau1)},
      {"tau2", report_number(cfg.tau2)},
      {"kappa", report_number(cfg.kappa)},
      {"epsilon", report_number(cfg.epsilon)},
      {"zeta1", report_number(cfg.zeta1)},
      {"zeta2", report_number(cfg.zeta2)},
      {"eta1", report_number(cfg.eta1)},
      {"eta2", report_number(cfg.eta2)},
      {"n_candidates", cfg.n_candidates},
      {"canny",
       {{"sigma", report_number(cfg.canny.sigma)},
        {"high", report_number(cfg.canny.high)},
        {"low", report_number(cfg.canny.low)}}},
      {"align_radius", cfg.align_radius},
      {"mask_mode",
       cfg.mask_mode == MaskMode::Hierarchical ? "hierarchical" : "nig_only"},
      {"fusion_mode", cfg.fusion_mode == FusionMode::Hard ? "hard" : "soft"},
      {"seed", cfg.seed},
  };
}

PhantomSpec phantom_spec_from_json(const Json& j) {
  constexpr auto code = ErrorCode::BadSpec;
  reject_unknown(j, {"shape", "spacing", "classes", "nesting", "class_intensities", "seed"},
                 code, "phantom spec");
  PhantomSpec spec;
  std::vector<std::size_t> dims = spec.shape.dims();
  std::vector<double> spacing;
  read_field(j, "shape", dims, code);
  read_field(j, "spacing", spacing, code);
  read_field(j, "classes", spec.classes, code);
  read_field(j, "class_intensities", spec.class_intensities, code);
  read_field(j, "seed", spec.seed, code);
  if (j.contains("nesting")) {
    spec.nesting.clear();
    if (!j.at("nesting").is_array()) fail(code, "nesting must be an array");
    for (const Json& level : j.at("nesting")) {
      if (level.is_number()) {
        spec.nesting.push_back({level.get<double>()});
      } else if (level.is_array()) {
        spec.nesting.push_back(level.get<std::vector<double>>());
      } else {
        fail(code, "nesting levels are radii or semi-axis arrays");
      }
    }
  }
  try {
    spec.shape = GridShape(std::move(dims), std::move(spacing));
  } catch (const Error& e) {
    fail(code, e.what());
  }
  return spec;
}

CorruptionSpec corruption_spec_from_json(const Json& j) {
  constexpr auto code = ErrorCode::BadSpec;
  reject_unknown(j, {"boundary_blur_sigma", "logit_noise_std", "flip_rate",
                     "logit_scale", "seed"},
                 code, "corruption spec");
  CorruptionSpec spec;
  read_field(j, "boundary_blur_sigma", spec.boundary_blur_sigma, code);
  read_field(j, "logit_noise_std", spec.logit_noise_std, code);
  read_field(j, "flip_rate", spec.flip_rate, code);
  read_field(j, "logit_scale", spec.logit_scale, code);
  read_field(j, "seed", spec.seed, code);
  return spec;
}

RenderSpec render_spec_from_json(const Json& j) {
  constexpr auto code = ErrorCode::BadSpec;
  reject_unknown(j, {"quality", "class_intensities", "noise_std", "edge_jitter", "seed"},
                 code, "render spec");
  RenderSpec spec;
  read_field(j, "quality", spec.quality, code);
  read_field(j, "class_intensities", spec.class_intensities, code);
  read_field(j, "noise_std", spec.noise_std, code);
  read_field(j, "edge_jitter", spec.edge_jitter, code);
  read_field(j, "seed", spec.seed, code);
  return spec;
}

Json render_spec_to_json(const RenderSpec& spec) {
  Json intensities = Json::array();
  for (double v : spec.class_intensities) intensities.push_back(report_number(v));
  return Json{{"quality", report_number(spec.quality)},
              {"class_intensities", intensities},
              {"noise_std", report_number(spec.noise_std)},
              {"edge_jitter", report_number(spec.edge_jitter)},
              {"seed", spec.seed}};
}

Json size_stats_to_json(const SizeStats& stats) {
  Json counts = Json::object();
  Json lambdas = Json::object();
  for (const auto& [cls, n] : stats.counts) counts[std::to_string(cls)] = n;
  for (const auto& [cls, l] : stats.lambdas) {
    lambdas[std::to_string(cls)] = report_number(l);
  }
  return Json{{"counts", counts}, {"lambdas", lambdas}, {"min_class", stats.min_class}};
}

Json metrics_to_json(const MetricsReport& report) {
  Json per_class = Json::object();
  for (const auto& [cls, m] : report.per_class) {
    per_class[std::to_string(cls)] = Json{
        {"dice", report_number(m.dice)},
        {"asd", m.asd ? Json(report_number(*m.asd)) : Json(nullptr)}};
  }
  return Json{{"per_class", per_class},
              {"mean_dice", report_number(report.mean_dice)},
              {"mean_asd", report.mean_asd ? Json(report_number(*report.mean_asd))
                                           : Json(nullptr)},
              {"asd_skipped", report.asd_skipped}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::BadConfig, path + ": " + e.what());
  }
}

}  // namespace sfseg
