#include "splitwire/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "splitwire/errors.hpp"

namespace splitwire {

ExtractResult extract_bundle(const PointCloud& cloud, const PipelineParams& params) {
    params.dpc.validate();
    if (!(params.segment_length > 0.0)) {
        throw ParameterError("segment_length must be positive");
    }

    const std::size_t n = cloud.size();
    if (n < 3) {
        throw InsufficientDataError("point count n = " + std::to_string(n) +
                                    ", need at least 3 points");
    }

    ExtractResult result;
    result.frame = fit_span_frame(cloud);
    const std::vector<ProjectedPoint> projected = project(cloud, result.frame);

    double w_min = projected[0].w, w_max = projected[0].w;
    for (const auto& p : projected) {
        w_min = std::min(w_min, p.w);
        w_max = std::max(w_max, p.w);
    }

    result.window.reserve(n);
    if (w_max - w_min > params.segment_length) {
        // Central window only; points outside keep label -1.
        const double center = (w_min + w_max) / 2.0;
        const double half = params.segment_length / 2.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(projected[i].w - center) <= half) result.window.push_back(i);
        }
        result.windowed = true;
        if (result.window.size() < 3) {
            throw InsufficientDataError("central window keeps " +
                                        std::to_string(result.window.size()) +
                                        " points, need at least 3");
        }
        w_min = projected[result.window.front()].w;
        w_max = w_min;
        for (std::size_t i : result.window) {
            w_min = std::min(w_min, projected[i].w);
            w_max = std::max(w_max, projected[i].w);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) result.window.push_back(i);
    }
    result.w_min = w_min;
    result.w_max = w_max;
    result.w_mid = (w_min + w_max) / 2.0;

    std::vector<ProjectedPoint> used;
    used.reserve(result.window.size());
    for (std::size_t i : result.window) used.push_back(projected[i]);

    result.centerline = fit_parabola(used);
    result.rel = relative_coords(used, result.centerline);
    result.clusters = cluster(result.rel, params.dpc);

    result.labels.assign(n, -1);
    for (std::size_t j = 0; j < result.window.size(); ++j) {
        result.labels[result.window[j]] = result.clusters.labels[j];
    }

    std::vector<WireModel> wires;
    for (int label = 0; label < result.clusters.k; ++label) {
        ClusterFit fit;
        fit.label = label;
        fit.size = static_cast<std::size_t>(
            std::count(result.labels.begin(), result.labels.end(), label));
        try {
            fit.wire = fit_subconductor(cloud, result.labels, label, result.frame);
            wires.push_back(*fit.wire);
        } catch (const InsufficientDataError&) {
        } catch (const DegenerateGeometryError&) {
        }
        result.fits.push_back(std::move(fit));
    }
    if (!wires.empty()) {
        result.geometry = bundle_geometry(wires, result.w_mid);
    }
    return result;
}

}  // namespace splitwire
