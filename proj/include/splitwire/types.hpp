#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace splitwire {

/// One LiDAR return. z is the vertical (height) axis.
struct Point3D {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// A point cloud with optional per-point cluster labels.
/// Label -1 is reserved for noise/outlier points.
struct PointCloud {
    std::vector<Point3D> points;
    std::optional<std::vector<int>> labels;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    bool has_labels() const { return labels.has_value(); }
};

}  // namespace splitwire
