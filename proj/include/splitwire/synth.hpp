#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "splitwire/centerline.hpp"
#include "splitwire/dpc.hpp"
#include "splitwire/types.hpp"

namespace splitwire {

/// Bundle cross-section layouts. square is the axis-aligned 4-vertex square;
/// regular_polygon places k >= 3 vertices on a circle with the given side
/// length (3 = triangle, 6 = hexagon, 8 = octagon).
enum class Layout {
    single,
    pair,
    square,
    regular_polygon,
};

Layout layout_from_string(const std::string& name);
std::string layout_to_string(Layout layout);

/// Configuration of one synthetic bundle cloud.
struct BundleSpec {
    int k = 4;
    double spacing = 0.45;          ///< adjacent sub-conductor spacing, meters
    Layout layout = Layout::square;
    double span_length = 10.0;      ///< meters
    double sag = 0.5;               ///< vertical drop at the ends vs mid-span
    int points_per_wire = 1000;
    double noise_sigma = 0.005;     ///< isotropic Gaussian sigma in (d, r)
    std::uint64_t seed = 0;

    /// Throws ParameterError on inconsistent values (square needs k = 4,
    /// pair k = 2, single k = 1, regular_polygon k >= 3, k <= 8, ...).
    void validate() const;
};

/// Cross-section offsets (d, r) of each wire relative to the bundle center.
std::vector<std::pair<double, double>> layout_offsets(const BundleSpec& spec);

/// Generates k parallel wires sharing one parabolic sag profile, sampled on a
/// midpoint grid in w (identical grid for every wire) with Gaussian noise in
/// (d, r). Deterministic for a fixed seed; labels = wire index. The RNG is
/// mt19937_64 with 53-bit uniforms and Box-Muller normals, so clouds are
/// reproducible across platforms.
PointCloud generate(const BundleSpec& spec);

/// O(n^2) reference implementation of the full clustering chain with no grid
/// truncation but identical definitions; shares no code with the production
/// path. Guarded to n <= 2000 (SizeError beyond).
ClusterResult dpc_bruteforce(std::span<const RelativeCoord> coords, const DpcParams& params);

/// Best-permutation label accuracy: the optimal one-to-one matching of
/// predicted cluster ids to truth ids, exhaustive over at most 8 ids per side
/// (SizeError beyond). Predicted -1 (noise) always counts as a mismatch.
double label_accuracy(std::span<const int> predicted, std::span<const int> truth);

}  // namespace splitwire
