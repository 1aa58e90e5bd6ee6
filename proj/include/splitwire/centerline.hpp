#pragma once

#include <span>
#include <vector>

#include "splitwire/types.hpp"

namespace splitwire {

/// Horizontal coordinate frame of a span: origin at the horizontal centroid,
/// direction the principal horizontal axis (unit vector).
struct SpanFrame {
    double origin_x = 0.0;
    double origin_y = 0.0;
    double dir_x = 1.0;
    double dir_y = 0.0;

    bool operator==(const SpanFrame&) const = default;
};

/// A point expressed in the span frame: arc position w along the direction,
/// signed horizontal offset d (positive on the counter-clockwise side), and
/// unchanged height z.
struct ProjectedPoint {
    double w = 0.0;
    double d = 0.0;
    double z = 0.0;
};

/// Vertical profile z(w) = a*w^2 + b*w + c.
struct ParabolaModel {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    double evaluate(double w) const { return (a * w + b) * w + c; }
};

/// Cross-section coordinates of a point relative to the fitted centerline:
/// horizontal offset d and vertical residual r = z - z_fit(w). This is the
/// 2D feature space in which sub-conductors form compact clusters.
struct RelativeCoord {
    double d = 0.0;
    double r = 0.0;
};

/// Fits the span frame: horizontal centroid plus total-least-squares line
/// direction. The sign is canonical: the point farthest from the centroid
/// along the line (largest |projection|, later index on ties) projects
/// positive. Throws DegenerateGeometryError for n < 2 or horizontally
/// coincident input.
SpanFrame fit_span_frame(const PointCloud& cloud);

/// Projects every point into the span frame; output order = input order.
std::vector<ProjectedPoint> project(const PointCloud& cloud, const SpanFrame& frame);

/// Least-squares parabola through (w, z) samples. Solved on the 3x3 normal
/// equations with w centered and scaled to [-1, 1]; coefficients are returned
/// in original coordinates. Throws InsufficientDataError for fewer than 3
/// samples or fewer than 3 distinct w, DegenerateGeometryError when the
/// normal matrix fails its condition check.
ParabolaModel fit_parabola(std::span<const double> w, std::span<const double> z);
ParabolaModel fit_parabola(std::span<const ProjectedPoint> samples);

/// Relative coordinates of projected points against a fitted centerline:
/// d unchanged, r = z - model(w). Output order = input order.
std::vector<RelativeCoord> relative_coords(std::span<const ProjectedPoint> projected,
                                           const ParabolaModel& model);

}  // namespace splitwire
