#include "splitwire/centerline.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "splitwire/errors.hpp"

namespace splitwire {

SpanFrame fit_span_frame(const PointCloud& cloud) {
    const std::size_t n = cloud.size();
    if (n < 2) {
        throw DegenerateGeometryError("span frame needs at least 2 points, got " +
                                      std::to_string(n));
    }

    double cx = 0.0, cy = 0.0;
    double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
    double min_y = min_x, max_y = max_x;
    for (const auto& p : cloud.points) {
        cx += p.x;
        cy += p.y;
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    cx /= static_cast<double>(n);
    cy /= static_cast<double>(n);

    // Bounding-box diagonal bounds the max pairwise horizontal distance.
    if (std::hypot(max_x - min_x, max_y - min_y) <= 1e-6) {
        throw DegenerateGeometryError("all points horizontally coincident");
    }

    Eigen::Matrix2d scatter = Eigen::Matrix2d::Zero();
    for (const auto& p : cloud.points) {
        const double dx = p.x - cx;
        const double dy = p.y - cy;
        scatter(0, 0) += dx * dx;
        scatter(0, 1) += dx * dy;
        scatter(1, 1) += dy * dy;
    }
    scatter(1, 0) = scatter(0, 1);

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(scatter);
    Eigen::Vector2d dir = solver.eigenvectors().col(1);  // largest eigenvalue
    dir.normalize();

    // Canonical sign: the point farthest from the centroid along the line
    // (later index on |projection| ties) projects positive.
    double best_abs = -1.0;
    double best_t = 0.0;
    for (const auto& p : cloud.points) {
        const double t = (p.x - cx) * dir.x() + (p.y - cy) * dir.y();
        if (std::abs(t) >= best_abs) {
            best_abs = std::abs(t);
            best_t = t;
        }
    }
    if (best_t < 0.0) dir = -dir;

    return SpanFrame{cx, cy, dir.x(), dir.y()};
}

std::vector<ProjectedPoint> project(const PointCloud& cloud, const SpanFrame& frame) {
    std::vector<ProjectedPoint> out;
    out.reserve(cloud.size());
    for (const auto& p : cloud.points) {
        const double hx = p.x - frame.origin_x;
        const double hy = p.y - frame.origin_y;
        // perp(direction) is the 90-degree counter-clockwise rotation.
        out.push_back({hx * frame.dir_x + hy * frame.dir_y,
                       hx * -frame.dir_y + hy * frame.dir_x, p.z});
    }
    return out;
}

ParabolaModel fit_parabola(std::span<const double> w, std::span<const double> z) {
    if (w.size() != z.size()) {
        throw ContractError("fit_parabola: w and z lengths differ");
    }
    const std::size_t n = w.size();
    if (n < 3) {
        throw InsufficientDataError("parabola fit needs at least 3 samples, got " +
                                    std::to_string(n));
    }
    std::set<double> distinct(w.begin(), w.end());
    if (distinct.size() < 3) {
        throw InsufficientDataError("parabola fit needs at least 3 distinct w values, got " +
                                    std::to_string(distinct.size()));
    }

    // Center and scale w to [-1, 1] so the normal matrix stays well
    // conditioned on long spans.
    const auto [w_min_it, w_max_it] = std::minmax_element(w.begin(), w.end());
    const double mid = (*w_min_it + *w_max_it) / 2.0;
    const double half = (*w_max_it - *w_min_it) / 2.0;

    double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    double t0 = 0, t1 = 0, t2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = (w[i] - mid) / half;
        const double u2 = u * u;
        s1 += u;
        s2 += u2;
        s3 += u2 * u;
        s4 += u2 * u2;
        t0 += z[i];
        t1 += z[i] * u;
        t2 += z[i] * u2;
    }

    Eigen::Matrix3d normal;
    normal << s4, s3, s2, s3, s2, s1, s2, s1, static_cast<double>(n);
    Eigen::Vector3d rhs(t2, t1, t0);

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(normal);
    const auto& eigenvalues = solver.eigenvalues();
    if (!(eigenvalues(0) > 0.0) || eigenvalues(0) < 1e-12 * eigenvalues(2)) {
        throw DegenerateGeometryError("parabola normal matrix is numerically singular");
    }
    const Eigen::Vector3d coeff = solver.eigenvectors() *
                                  (solver.eigenvectors().transpose() * rhs).cwiseQuotient(eigenvalues);

    // Back to original coordinates: z = a*u^2 + b*u + c with u = (w - mid)/half.
    const double a = coeff(0), b = coeff(1), c = coeff(2);
    ParabolaModel model;
    model.a = a / (half * half);
    model.b = b / half - 2.0 * a * mid / (half * half);
    model.c = a * mid * mid / (half * half) - b * mid / half + c;
    if (!std::isfinite(model.a) || !std::isfinite(model.b) || !std::isfinite(model.c)) {
        throw DegenerateGeometryError("parabola coefficients are non-finite");
    }
    return model;
}

ParabolaModel fit_parabola(std::span<const ProjectedPoint> samples) {
    std::vector<double> w(samples.size());
    std::vector<double> z(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        w[i] = samples[i].w;
        z[i] = samples[i].z;
    }
    return fit_parabola(w, z);
}

std::vector<RelativeCoord> relative_coords(std::span<const ProjectedPoint> projected,
                                           const ParabolaModel& model) {
    std::vector<RelativeCoord> out;
    out.reserve(projected.size());
    for (const auto& p : projected) {
        out.push_back({p.d, p.z - model.evaluate(p.w)});
    }
    return out;
}

}  // namespace splitwire
