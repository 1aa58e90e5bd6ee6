#include "splitwire/wire_fit.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "splitwire/errors.hpp"

namespace splitwire {

WireModel fit_subconductor(const PointCloud& cloud, std::span<const int> labels,
                           int cluster_id, const SpanFrame& frame) {
    if (labels.size() != cloud.size()) {
        throw ContractError("fit_subconductor: labels length does not match cloud");
    }

    std::vector<double> w, d, z;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        if (labels[i] != cluster_id) continue;
        const auto& p = cloud.points[i];
        const double hx = p.x - frame.origin_x;
        const double hy = p.y - frame.origin_y;
        w.push_back(hx * frame.dir_x + hy * frame.dir_y);
        d.push_back(hx * -frame.dir_y + hy * frame.dir_x);
        z.push_back(p.z);
    }

    const std::size_t n = w.size();
    if (n < 3) {
        throw InsufficientDataError("cluster " + std::to_string(cluster_id) + " has " +
                                    std::to_string(n) + " points, need at least 3");
    }
    if (std::set<double>(w.begin(), w.end()).size() < 3) {
        throw DegenerateGeometryError("cluster " + std::to_string(cluster_id) +
                                      " has fewer than 3 distinct w values");
    }

    WireModel model;
    model.frame = frame;
    model.profile = fit_parabola(w, z);
    model.support = n;

    // Horizontal drift d(w), least squares on centered w.
    double mean_w = 0.0, mean_d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_w += w[i];
        mean_d += d[i];
    }
    mean_w /= static_cast<double>(n);
    mean_d /= static_cast<double>(n);
    double sww = 0.0, swd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dw = w[i] - mean_w;
        sww += dw * dw;
        swd += dw * (d[i] - mean_d);
    }
    model.offset_line.slope = swd / sww;
    model.offset_line.offset = mean_d - model.offset_line.slope * mean_w;

    double sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double rz = z[i] - model.profile.evaluate(w[i]);
        const double rd = d[i] - model.offset_line.evaluate(w[i]);
        sum_sq += rz * rz + rd * rd;
    }
    model.rmse = std::sqrt(sum_sq / static_cast<double>(n));
    return model;
}

BundleGeometry bundle_geometry(std::span<const WireModel> models, double w_mid) {
    if (models.empty()) {
        throw ContractError("bundle_geometry: need at least 1 wire model");
    }
    for (const auto& m : models) {
        if (!(m.frame == models[0].frame)) {
            throw ContractError("bundle_geometry: wire models do not share one frame");
        }
    }

    BundleGeometry geo;
    geo.k = static_cast<int>(models.size());

    double mean_z = 0.0;
    std::vector<double> z_mid(models.size());
    for (std::size_t i = 0; i < models.size(); ++i) {
        z_mid[i] = models[i].profile.evaluate(w_mid);
        mean_z += z_mid[i];
    }
    mean_z /= static_cast<double>(models.size());

    geo.centers.reserve(models.size());
    for (std::size_t i = 0; i < models.size(); ++i) {
        geo.centers.push_back({models[i].offset_line.evaluate(w_mid), z_mid[i] - mean_z});
    }

    for (std::size_t i = 0; i < geo.centers.size(); ++i) {
        for (std::size_t j = i + 1; j < geo.centers.size(); ++j) {
            const double dd = geo.centers[i][0] - geo.centers[j][0];
            const double dr = geo.centers[i][1] - geo.centers[j][1];
            const double dist = std::sqrt(dd * dd + dr * dr);
            geo.pairwise_distances.push_back(dist);
            if (dist > 0.0 &&
                (!geo.min_adjacent_spacing.has_value() || dist < *geo.min_adjacent_spacing)) {
                geo.min_adjacent_spacing = dist;
            }
        }
    }
    return geo;
}

std::vector<Point3D> sample_wire(const WireModel& model, double w_start, double w_end,
                                 double step) {
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw ParameterError("sample step must be positive and finite");
    }
    if (!(w_start < w_end)) {
        throw ParameterError("sample range requires w_start < w_end");
    }

    std::vector<double> ws;
    const auto count = static_cast<std::size_t>(std::floor((w_end - w_start) / step));
    ws.reserve(count + 2);
    for (std::size_t i = 0; i <= count; ++i) ws.push_back(w_start + static_cast<double>(i) * step);
    const double tail_tol = 1e-12 * std::max(1.0, std::abs(w_end));
    if (ws.back() < w_end - tail_tol) {
        ws.push_back(w_end);
    } else {
        ws.back() = std::min(ws.back(), w_end);
    }

    const double px = -model.frame.dir_y;  // perp = ccw rotation of direction
    const double py = model.frame.dir_x;

    std::vector<Point3D> out;
    out.reserve(ws.size());
    for (double w : ws) {
        const double d = model.offset_line.evaluate(w);
        out.push_back({model.frame.origin_x + w * model.frame.dir_x + d * px,
                       model.frame.origin_y + w * model.frame.dir_y + d * py,
                       model.profile.evaluate(w)});
    }
    return out;
}

}  // namespace splitwire
