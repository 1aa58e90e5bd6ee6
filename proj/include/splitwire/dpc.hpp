#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "splitwire/centerline.hpp"

namespace splitwire {

/// Tunables of the density-peaks clustering stage.
struct DpcParams {
    /// Kernel cutoff distance d_c in meters; defaults to the maximum
    /// sub-conductor diameter.
    double cutoff = 0.05;
    /// Physical bundles have at most 8 sub-conductors.
    int max_clusters = 8;
    /// Multiplicative gap that separates center gammas from the rest.
    double gamma_gap_threshold = 3.0;
    /// Points with rho_norm below this fraction are relabeled noise (-1).
    /// 0 disables the filter.
    double noise_density_fraction = 0.0;

    /// Throws ParameterError when out of range.
    void validate() const;
};

/// Per-point decision parameters: local density rho, separation distance
/// delta, their max-normalized values, and gamma = rho_norm * delta_norm.
/// nearest_higher is the closest point ranked higher in the strict density
/// order; exactly one point (the density argmax) has none.
struct DecisionPoint {
    double rho = 0.0;
    double delta = 0.0;
    double rho_norm = 0.0;
    double delta_norm = 0.0;
    double gamma = 0.0;
    std::optional<std::size_t> nearest_higher;
};

/// Output of the clustering stage over one set of relative coordinates.
struct ClusterResult {
    int k = 0;
    std::vector<std::size_t> centers;  ///< descending-gamma order; center j has label j
    std::vector<int> labels;           ///< per point, -1 = noise
    std::vector<DecisionPoint> decision;
};

/// delta and nearest_higher for every point, computed together.
struct Separation {
    std::vector<double> delta;
    std::vector<std::optional<std::size_t>> nearest_higher;
};

/// Gaussian-kernel local density rho_i = sum_{j != i} exp(-(d_ij/d_c)^2) in
/// (d, r) space. Uses a spatial grid with cell size 3*d_c; contributions of
/// points beyond the 3x3 cell neighborhood (hence beyond 3*d_c, each term
/// < e^-9) are truncated. Per-point sums run in ascending index order.
std::vector<double> local_density(std::span<const RelativeCoord> coords, double cutoff);

/// Separation distances under the strict density order
/// i < j  iff  (rho_i, -i) < (rho_j, -j):
/// delta_i = min distance to any higher-ranked point (nearest_higher = the
/// argmin, lowest index on distance ties); the top point takes the maximum
/// distance to any other point and has no nearest_higher. n = 1 gives
/// delta = 0. Exact: the grid search never truncates.
Separation separation_delta(std::span<const RelativeCoord> coords, std::span<const double> rho);

/// Max-normalization: rho_norm = rho/max(rho), delta_norm = delta/max(delta)
/// (all-zero inputs normalize to all zeros), gamma = rho_norm * delta_norm.
std::vector<DecisionPoint> normalize_decision(std::span<const double> rho,
                                              const Separation& separation);

/// Automatic center-count selection by a multiplicative gap test on sorted
/// gammas g_1 >= g_2 >= ...: k = the largest m <= min(max_clusters, n) with
/// g_m > 0 and g_m >= threshold * g_{m+1} (g_{n+1} = 0); k = 1 when no m
/// qualifies. Returns k and the top-k gamma point indices in descending
/// gamma order (ascending index on ties).
std::pair<int, std::vector<std::size_t>> select_centers(std::span<const DecisionPoint> decision,
                                                        const DpcParams& params);

/// Labels centers 0..k-1 in descending-gamma order and lets every other point
/// inherit the label of its nearest_higher, resolved in descending density
/// order so predecessors are always labeled first. With
/// noise_density_fraction f > 0, points with rho_norm < f are relabeled -1
/// afterwards.
ClusterResult assign(std::vector<DecisionPoint> decision,
                     std::span<const std::size_t> centers,
                     const DpcParams& params);

/// Full chain: local_density -> separation_delta -> normalize_decision ->
/// select_centers -> assign.
ClusterResult cluster(std::span<const RelativeCoord> coords, const DpcParams& params);

/// Emits "index,rho,delta,rho_norm,delta_norm,gamma" rows in point order,
/// 9 significant digits. The second overload writes caller-supplied values in
/// the index column (the CLI passes original point indices when a window was
/// applied).
void write_decision_csv(std::span<const DecisionPoint> decision, std::ostream& out);
void write_decision_csv(std::span<const DecisionPoint> decision,
                        std::span<const std::size_t> indices, std::ostream& out);

}  // namespace splitwire
