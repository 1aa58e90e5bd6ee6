#pragma once

#include "json.hpp"  // vendored nlohmann/json

#include "splitwire/pipeline.hpp"

namespace splitwire {

/// Machine-readable report of one extraction run. Top-level keys: params,
/// span_frame, centerline, window, clusters, bundle_geometry. Keys are fixed
/// and sorted, numbers rounded to 9 significant digits, so reports diff
/// cleanly between runs.
nlohmann::json make_report(const ExtractResult& result, const PipelineParams& params);

}  // namespace splitwire
