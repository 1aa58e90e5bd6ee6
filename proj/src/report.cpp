#include "splitwire/report.hpp"

#include <cstdlib>

#include "splitwire/io.hpp"

namespace splitwire {

namespace {

// Rounds through the 9-significant-digit text form so reports are stable and
// diff cleanly.
nlohmann::json num(double value) {
    return nlohmann::json(std::strtod(sig9(value).c_str(), nullptr));
}

}  // namespace

nlohmann::json make_report(const ExtractResult& result, const PipelineParams& params) {
    nlohmann::json report;

    report["params"] = {
        {"d_c", num(params.dpc.cutoff)},
        {"max_clusters", params.dpc.max_clusters},
        {"gamma_gap_threshold", num(params.dpc.gamma_gap_threshold)},
        {"noise_density_fraction", num(params.dpc.noise_density_fraction)},
        {"segment_length", num(params.segment_length)},
    };
    report["span_frame"] = {
        {"origin", {num(result.frame.origin_x), num(result.frame.origin_y)}},
        {"direction", {num(result.frame.dir_x), num(result.frame.dir_y)}},
    };
    report["centerline"] = {
        {"a", num(result.centerline.a)},
        {"b", num(result.centerline.b)},
        {"c", num(result.centerline.c)},
    };
    report["window"] = {
        {"applied", result.windowed},
        {"w_min", num(result.w_min)},
        {"w_max", num(result.w_max)},
        {"w_mid", num(result.w_mid)},
        {"points_total", result.labels.size()},
        {"points_used", result.window.size()},
    };

    report["clusters"] = nlohmann::json::array();
    for (const auto& fit : result.fits) {
        nlohmann::json entry = {
            {"label", fit.label},
            {"size", fit.size},
        };
        if (fit.wire.has_value()) {
            entry["wire"] = {
                {"a", num(fit.wire->profile.a)},
                {"b", num(fit.wire->profile.b)},
                {"c", num(fit.wire->profile.c)},
                {"d0", num(fit.wire->offset_line.offset)},
                {"d1", num(fit.wire->offset_line.slope)},
                {"rmse", num(fit.wire->rmse)},
                {"support", fit.wire->support},
            };
        } else {
            entry["wire"] = nullptr;
        }
        report["clusters"].push_back(std::move(entry));
    }

    if (result.geometry.has_value()) {
        const auto& geo = *result.geometry;
        nlohmann::json centers = nlohmann::json::array();
        for (const auto& c : geo.centers) centers.push_back({num(c[0]), num(c[1])});
        nlohmann::json pairwise = nlohmann::json::array();
        for (double d : geo.pairwise_distances) pairwise.push_back(num(d));
        report["bundle_geometry"] = {
            {"k", geo.k},
            {"centers", std::move(centers)},
            {"pairwise_distances", std::move(pairwise)},
            {"min_adjacent_spacing",
             geo.min_adjacent_spacing.has_value() ? num(*geo.min_adjacent_spacing)
                                                  : nlohmann::json(nullptr)},
        };
    } else {
        report["bundle_geometry"] = nullptr;
    }
    return report;
}

}  // namespace splitwire
