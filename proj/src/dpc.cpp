#include "splitwire/dpc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <unordered_map>

#include "splitwire/errors.hpp"
#include "splitwire/io.hpp"

namespace splitwire {

void DpcParams::validate() const {
    if (!(cutoff > 0.0) || !std::isfinite(cutoff)) {
        throw ParameterError("cutoff distance d_c must be positive and finite");
    }
    if (max_clusters < 1) {
        throw ParameterError("max_clusters must be at least 1");
    }
    if (!(gamma_gap_threshold > 1.0) || !std::isfinite(gamma_gap_threshold)) {
        throw ParameterError("gamma_gap_threshold must be greater than 1");
    }
    if (!(noise_density_fraction >= 0.0) || noise_density_fraction >= 1.0) {
        throw ParameterError("noise_density_fraction must lie in [0, 1)");
    }
}

namespace {

// Fixed-radius neighbor grid over (d, r) space. Cells are filled in ascending
// point index order, so each cell's list is itself ascending.
class NeighborGrid {
public:
    NeighborGrid(std::span<const RelativeCoord> coords, double cell_size)
        : cell_(cell_size) {
        min_d_ = min_r_ = std::numeric_limits<double>::infinity();
        double max_d = -min_d_, max_r = -min_r_;
        for (const auto& c : coords) {
            min_d_ = std::min(min_d_, c.d);
            max_d = std::max(max_d, c.d);
            min_r_ = std::min(min_r_, c.r);
            max_r = std::max(max_r, c.r);
        }
        if (coords.empty()) {
            min_d_ = min_r_ = 0.0;
            max_d = max_r = 0.0;
        }
        nx_ = static_cast<std::int64_t>(std::floor((max_d - min_d_) / cell_)) + 1;
        ny_ = static_cast<std::int64_t>(std::floor((max_r - min_r_) / cell_)) + 1;
        nx_ = std::max<std::int64_t>(nx_, 1);
        ny_ = std::max<std::int64_t>(ny_, 1);
    }

    std::int64_t cell_x(double d) const {
        return std::clamp<std::int64_t>(
            static_cast<std::int64_t>(std::floor((d - min_d_) / cell_)), 0, nx_ - 1);
    }
    std::int64_t cell_y(double r) const {
        return std::clamp<std::int64_t>(
            static_cast<std::int64_t>(std::floor((r - min_r_) / cell_)), 0, ny_ - 1);
    }

    void insert(std::size_t index, const RelativeCoord& c) {
        cells_[key(cell_x(c.d), cell_y(c.r))].push_back(static_cast<std::uint32_t>(index));
    }

    const std::vector<std::uint32_t>* cell(std::int64_t cx, std::int64_t cy) const {
        if (cx < 0 || cx >= nx_ || cy < 0 || cy >= ny_) return nullptr;
        auto it = cells_.find(key(cx, cy));
        return it == cells_.end() ? nullptr : &it->second;
    }

    std::int64_t nx() const { return nx_; }
    std::int64_t ny() const { return ny_; }
    double cell_size() const { return cell_; }

private:
    std::int64_t key(std::int64_t cx, std::int64_t cy) const { return cy * nx_ + cx; }

    double cell_;
    double min_d_ = 0.0;
    double min_r_ = 0.0;
    std::int64_t nx_ = 1;
    std::int64_t ny_ = 1;
    std::unordered_map<std::int64_t, std::vector<std::uint32_t>> cells_;
};

// Strict density order: i ranks above j iff (rho_i, -i) > (rho_j, -j).
std::vector<std::size_t> density_order(std::span<const double> rho) {
    std::vector<std::size_t> order(rho.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (rho[a] != rho[b]) return rho[a] > rho[b];
        return a < b;
    });
    return order;
}

}  // namespace

std::vector<double> local_density(std::span<const RelativeCoord> coords, double cutoff) {
    if (!(cutoff > 0.0) || !std::isfinite(cutoff)) {
        throw ParameterError("cutoff distance d_c must be positive and finite");
    }
    const std::size_t n = coords.size();
    std::vector<double> rho(n, 0.0);
    if (n <= 1) return rho;

    NeighborGrid grid(coords, 3.0 * cutoff);
    for (std::size_t i = 0; i < n; ++i) grid.insert(i, coords[i]);

    const double cutoff_sq = cutoff * cutoff;
    std::vector<std::uint32_t> neighbors;
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t cx = grid.cell_x(coords[i].d);
        const std::int64_t cy = grid.cell_y(coords[i].r);
        neighbors.clear();
        for (std::int64_t gy = cy - 1; gy <= cy + 1; ++gy) {
            for (std::int64_t gx = cx - 1; gx <= cx + 1; ++gx) {
                if (const auto* cell = grid.cell(gx, gy)) {
                    neighbors.insert(neighbors.end(), cell->begin(), cell->end());
                }
            }
        }
        // Everything missed lives beyond the 3x3 neighborhood, hence beyond
        // 3*d_c: each truncated kernel term is below e^-9. The sum runs in
        // ascending index order so results are reproducible and comparable
        // bit-for-bit with the exhaustive path.
        std::sort(neighbors.begin(), neighbors.end());
        double sum = 0.0;
        for (std::uint32_t j : neighbors) {
            if (j == i) continue;
            const double dd = coords[i].d - coords[j].d;
            const double dr = coords[i].r - coords[j].r;
            const double dist_sq = dd * dd + dr * dr;
            sum += std::exp(-(dist_sq / cutoff_sq));
        }
        rho[i] = sum;
    }
    return rho;
}

Separation separation_delta(std::span<const RelativeCoord> coords,
                            std::span<const double> rho) {
    const std::size_t n = coords.size();
    if (rho.size() != n) {
        throw ContractError("separation_delta: rho length does not match coords");
    }
    Separation sep;
    sep.delta.assign(n, 0.0);
    sep.nearest_higher.assign(n, std::nullopt);
    if (n <= 1) return sep;

    const std::vector<std::size_t> order = density_order(rho);

    // The top of the density order takes the maximum distance to any point.
    const std::size_t top = order[0];
    double max_dist = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == top) continue;
        const double dd = coords[top].d - coords[j].d;
        const double dr = coords[top].r - coords[j].r;
        max_dist = std::max(max_dist, std::sqrt(dd * dd + dr * dr));
    }
    sep.delta[top] = max_dist;

    // Everyone else: exact nearest neighbor among the points already ranked
    // higher, found by an expanding ring search over a grid built
    // incrementally in rank order. Cell size targets a few points per cell;
    // the ring bound keeps the search exact for any cell size.
    double extent = 0.0;
    {
        double min_d = coords[0].d, max_d = coords[0].d;
        double min_r = coords[0].r, max_r = coords[0].r;
        for (const auto& c : coords) {
            min_d = std::min(min_d, c.d);
            max_d = std::max(max_d, c.d);
            min_r = std::min(min_r, c.r);
            max_r = std::max(max_r, c.r);
        }
        extent = std::max(max_d - min_d, max_r - min_r);
    }
    const double cells_per_axis =
        std::clamp(std::floor(std::sqrt(static_cast<double>(n))), 1.0, 1024.0);
    const double cell_size = extent > 0.0 ? extent / cells_per_axis : 1.0;

    NeighborGrid grid(coords, cell_size);
    grid.insert(top, coords[top]);

    for (std::size_t rank = 1; rank < n; ++rank) {
        const std::size_t i = order[rank];
        const double qd = coords[i].d;
        const double qr = coords[i].r;
        const std::int64_t cx = grid.cell_x(qd);
        const std::int64_t cy = grid.cell_y(qr);
        const std::int64_t max_ring = std::max({cx, grid.nx() - 1 - cx, cy, grid.ny() - 1 - cy});

        double best_dist = std::numeric_limits<double>::infinity();
        std::size_t best_j = n;
        for (std::int64_t ring = 0; ring <= max_ring; ++ring) {
            // A point in ring r is at least (r-1)*cell away; equality still
            // allows a lower-index tie, so only a strict bound stops us.
            if (ring > 0 &&
                static_cast<double>(ring - 1) * grid.cell_size() > best_dist) {
                break;
            }
            for (std::int64_t gy = cy - ring; gy <= cy + ring; ++gy) {
                for (std::int64_t gx = cx - ring; gx <= cx + ring; ++gx) {
                    if (std::max(std::abs(gx - cx), std::abs(gy - cy)) != ring) continue;
                    const auto* cell = grid.cell(gx, gy);
                    if (cell == nullptr) continue;
                    for (std::uint32_t j : *cell) {
                        const double dd = qd - coords[j].d;
                        const double dr = qr - coords[j].r;
                        const double dist = std::sqrt(dd * dd + dr * dr);
                        if (dist < best_dist || (dist == best_dist && j < best_j)) {
                            best_dist = dist;
                            best_j = j;
                        }
                    }
                }
            }
        }
        sep.delta[i] = best_dist;
        sep.nearest_higher[i] = best_j;
        grid.insert(i, coords[i]);
    }
    return sep;
}

std::vector<DecisionPoint> normalize_decision(std::span<const double> rho,
                                              const Separation& separation) {
    const std::size_t n = rho.size();
    if (separation.delta.size() != n || separation.nearest_higher.size() != n) {
        throw ContractError("normalize_decision: separation length does not match rho");
    }
    double max_rho = 0.0, max_delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        max_rho = std::max(max_rho, rho[i]);
        max_delta = std::max(max_delta, separation.delta[i]);
    }
    std::vector<DecisionPoint> decision(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& d = decision[i];
        d.rho = rho[i];
        d.delta = separation.delta[i];
        d.rho_norm = max_rho > 0.0 ? rho[i] / max_rho : 0.0;
        d.delta_norm = max_delta > 0.0 ? separation.delta[i] / max_delta : 0.0;
        d.gamma = d.rho_norm * d.delta_norm;
        d.nearest_higher = separation.nearest_higher[i];
    }
    return decision;
}

std::pair<int, std::vector<std::size_t>> select_centers(std::span<const DecisionPoint> decision,
                                                        const DpcParams& params) {
    params.validate();
    const std::size_t n = decision.size();
    if (n == 0) return {0, {}};

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (decision[a].gamma != decision[b].gamma) return decision[a].gamma > decision[b].gamma;
        return a < b;
    });

    const std::size_t m_max = std::min<std::size_t>(static_cast<std::size_t>(params.max_clusters), n);
    std::size_t k = 1;
    for (std::size_t m = 1; m <= m_max; ++m) {
        const double g_m = decision[order[m - 1]].gamma;
        const double g_next = m < n ? decision[order[m]].gamma : 0.0;
        if (g_m > 0.0 && g_m >= params.gamma_gap_threshold * g_next) k = m;
    }
    std::vector<std::size_t> centers(order.begin(), order.begin() + k);
    return {static_cast<int>(k), std::move(centers)};
}

ClusterResult assign(std::vector<DecisionPoint> decision,
                     std::span<const std::size_t> centers,
                     const DpcParams& params) {
    params.validate();
    const std::size_t n = decision.size();
    if (centers.empty()) {
        throw ContractError("assign: centers must be nonempty");
    }
    std::vector<int> labels(n, -1);
    for (std::size_t j = 0; j < centers.size(); ++j) {
        if (centers[j] >= n) {
            throw ContractError("assign: center index " + std::to_string(centers[j]) +
                                " out of range");
        }
        if (labels[centers[j]] != -1) {
            throw ContractError("assign: duplicate center index " +
                                std::to_string(centers[j]));
        }
        labels[centers[j]] = static_cast<int>(j);
    }

    std::vector<double> rho(n);
    for (std::size_t i = 0; i < n; ++i) rho[i] = decision[i].rho;
    for (std::size_t i : density_order(rho)) {
        if (labels[i] != -1) continue;
        const auto& nearest = decision[i].nearest_higher;
        if (!nearest.has_value()) {
            throw ContractError("assign: the density argmax must be a center");
        }
        labels[i] = labels[*nearest];
    }

    if (params.noise_density_fraction > 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            if (decision[i].rho_norm < params.noise_density_fraction) labels[i] = -1;
        }
    }

    ClusterResult result;
    result.k = static_cast<int>(centers.size());
    result.centers.assign(centers.begin(), centers.end());
    result.labels = std::move(labels);
    result.decision = std::move(decision);
    return result;
}

ClusterResult cluster(std::span<const RelativeCoord> coords, const DpcParams& params) {
    params.validate();
    if (coords.empty()) return {};
    const std::vector<double> rho = local_density(coords, params.cutoff);
    const Separation sep = separation_delta(coords, rho);
    std::vector<DecisionPoint> decision = normalize_decision(rho, sep);
    auto [k, centers] = select_centers(decision, params);
    (void)k;
    return assign(std::move(decision), centers, params);
}

void write_decision_csv(std::span<const DecisionPoint> decision, std::ostream& out) {
    std::vector<std::size_t> indices(decision.size());
    std::iota(indices.begin(), indices.end(), std::size_t{0});
    write_decision_csv(decision, indices, out);
}

void write_decision_csv(std::span<const DecisionPoint> decision,
                        std::span<const std::size_t> indices, std::ostream& out) {
    if (indices.size() != decision.size()) {
        throw ContractError("write_decision_csv: index column length mismatch");
    }
    out << "index,rho,delta,rho_norm,delta_norm,gamma\n";
    for (std::size_t i = 0; i < decision.size(); ++i) {
        const auto& d = decision[i];
        out << indices[i] << ',' << sig9(d.rho) << ',' << sig9(d.delta) << ','
            << sig9(d.rho_norm) << ',' << sig9(d.delta_norm) << ',' << sig9(d.gamma) << '\n';
    }
}

}  // namespace splitwire
