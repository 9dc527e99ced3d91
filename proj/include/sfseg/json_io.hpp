#pragma once

#include <json.hpp>

#include "sfseg/config.hpp"
#include "sfseg/fusion.hpp"
#include "sfseg/metrics.hpp"
#include "sfseg/synth.hpp"

namespace sfseg {

using Json = nlohmann::json;

// Rounds to 9 significant digits so reports print identically everywhere.
double report_number(double value);

// Fields present in `j` override `base`. Unknown keys and wrong types raise
// BadConfig. The "providers" key is ignored here (see pipeline.hpp).
PipelineConfig config_from_json(const Json& j, PipelineConfig base = {});
Json config_to_json(const PipelineConfig& cfg);

// Spec parsers raise BadSpec.
PhantomSpec phantom_spec_from_json(const Json& j);
CorruptionSpec corruption_spec_from_json(const Json& j);
RenderSpec render_spec_from_json(const Json& j);
Json render_spec_to_json(const RenderSpec& spec);

Json size_stats_to_json(const SizeStats& stats);
Json metrics_to_json(const MetricsReport& report);

Json read_json_file(const std::string& path);

}  // namespace sfseg
