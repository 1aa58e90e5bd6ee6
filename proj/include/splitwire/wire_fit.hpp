#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "splitwire/centerline.hpp"
#include "splitwire/types.hpp"

namespace splitwire {

/// Horizontal offset drift d(w) = offset + slope * w.
struct LineModel {
    double offset = 0.0;
    double slope = 0.0;

    double evaluate(double w) const { return offset + slope * w; }
};

/// Least-squares model of one sub-conductor: vertical parabola z(w) plus a
/// straight horizontal offset line d(w), both in a shared span frame.
struct WireModel {
    SpanFrame frame;
    ParabolaModel profile;
    LineModel offset_line;
    double rmse = 0.0;          ///< sqrt(mean(r_z^2 + r_d^2)) over the support
    std::size_t support = 0;    ///< number of points fitted
};

/// Cross-section geometry of a bundle at mid-span.
struct BundleGeometry {
    int k = 0;
    /// Per wire: (d(w_mid), z(w_mid) - mean z(w_mid)).
    std::vector<std::array<double, 2>> centers;
    /// Upper triangle (i < j) of the pairwise center distances, row-major.
    std::vector<double> pairwise_distances;
    /// Minimum nonzero pairwise distance; absent for k = 1 (or all-coincident
    /// centers).
    std::optional<double> min_adjacent_spacing;
};

/// Fits the points carrying cluster_id: parabola on (w, z), line on (w, d),
/// in the given frame. Throws InsufficientDataError for fewer than 3 points,
/// DegenerateGeometryError for fewer than 3 distinct w.
WireModel fit_subconductor(const PointCloud& cloud, std::span<const int> labels,
                           int cluster_id, const SpanFrame& frame);

/// Cross-section centers, pairwise distances and minimum adjacent spacing of
/// the fitted wires, evaluated at w_mid. All models must share one frame
/// (ContractError otherwise; also thrown for an empty model list).
BundleGeometry bundle_geometry(std::span<const WireModel> models, double w_mid);

/// Evaluates the wire at uniform w steps from w_start to w_end (both
/// endpoints included) and maps back to world coordinates. Throws
/// ParameterError for step <= 0 or w_start >= w_end.
std::vector<Point3D> sample_wire(const WireModel& model, double w_start, double w_end,
                                 double step);

}  // namespace splitwire
