#pragma once

#include <optional>
#include <vector>

#include "splitwire/centerline.hpp"
#include "splitwire/dpc.hpp"
#include "splitwire/types.hpp"
#include "splitwire/wire_fit.hpp"

namespace splitwire {

/// Parameters of the full extraction pipeline.
struct PipelineParams {
    DpcParams dpc;
    /// Inputs longer than this in w are reduced to the central window.
    double segment_length = 10.0;
};

/// Per-cluster wire fit; wire is absent when the cluster is too small or too
/// degenerate to fit.
struct ClusterFit {
    int label = 0;
    std::size_t size = 0;
    std::optional<WireModel> wire;
};

/// Everything the extraction pipeline produces for one segment.
struct ExtractResult {
    SpanFrame frame;
    ParabolaModel centerline;
    double w_min = 0.0;
    double w_max = 0.0;
    double w_mid = 0.0;
    bool windowed = false;                 ///< true when the central window was applied
    std::vector<std::size_t> window;       ///< original indices of processed points
    std::vector<RelativeCoord> rel;        ///< relative coords of processed points
    ClusterResult clusters;                ///< over the processed subset
    std::vector<int> labels;               ///< full input length; -1 outside window / noise
    std::vector<ClusterFit> fits;          ///< one per cluster label 0..k-1
    std::optional<BundleGeometry> geometry;
};

/// read -> fit_span_frame -> project -> [central window] -> fit_parabola ->
/// relative_coords -> DPC -> per-cluster wire fits -> bundle geometry.
/// Throws InsufficientDataError for fewer than 3 points.
ExtractResult extract_bundle(const PointCloud& cloud, const PipelineParams& params);

}  // namespace splitwire
