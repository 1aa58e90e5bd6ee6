#include "splitwire/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "splitwire/errors.hpp"

namespace splitwire {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kBaseHeight = 10.0;  // wires hang around z = 10 m

// Portable deterministic random source: mt19937_64 (algorithm pinned by the
// C++ standard), uniforms from the top 53 bits, normals via Box-Muller.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * kPi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace

Layout layout_from_string(const std::string& name) {
    if (name == "single") return Layout::single;
    if (name == "pair") return Layout::pair;
    if (name == "square") return Layout::square;
    if (name == "regular_polygon") return Layout::regular_polygon;
    throw ParameterError("unknown layout '" + name + "'");
}

std::string layout_to_string(Layout layout) {
    switch (layout) {
        case Layout::single: return "single";
        case Layout::pair: return "pair";
        case Layout::square: return "square";
        case Layout::regular_polygon: return "regular_polygon";
    }
    throw ParameterError("invalid layout value");
}

void BundleSpec::validate() const {
    if (k < 1 || k > 8) throw ParameterError("k must be in 1..8");
    if (!(spacing > 0.0)) throw ParameterError("spacing must be positive");
    if (!(span_length > 0.0)) throw ParameterError("span_length must be positive");
    if (!(sag >= 0.0)) throw ParameterError("sag must be non-negative");
    if (points_per_wire < 3) throw ParameterError("points_per_wire must be at least 3");
    if (!(noise_sigma >= 0.0)) throw ParameterError("noise_sigma must be non-negative");
    switch (layout) {
        case Layout::single:
            if (k != 1) throw ParameterError("layout 'single' requires k = 1");
            break;
        case Layout::pair:
            if (k != 2) throw ParameterError("layout 'pair' requires k = 2");
            break;
        case Layout::square:
            if (k != 4) throw ParameterError("layout 'square' requires k = 4");
            break;
        case Layout::regular_polygon:
            if (k < 3) throw ParameterError("layout 'regular_polygon' requires k >= 3");
            break;
    }
}

std::vector<std::pair<double, double>> layout_offsets(const BundleSpec& spec) {
    spec.validate();
    const double half = spec.spacing / 2.0;
    switch (spec.layout) {
        case Layout::single:
            return {{0.0, 0.0}};
        case Layout::pair:
            return {{-half, 0.0}, {half, 0.0}};
        case Layout::square:
            return {{-half, half}, {half, half}, {half, -half}, {-half, -half}};
        case Layout::regular_polygon: {
            // Circumradius giving side length = spacing.
            const double radius = spec.spacing / (2.0 * std::sin(kPi / spec.k));
            std::vector<std::pair<double, double>> offsets;
            offsets.reserve(spec.k);
            for (int j = 0; j < spec.k; ++j) {
                const double angle = 2.0 * kPi * j / spec.k + kPi / 2.0;
                offsets.emplace_back(radius * std::cos(angle), radius * std::sin(angle));
            }
            return offsets;
        }
    }
    throw ParameterError("invalid layout value");
}

PointCloud generate(const BundleSpec& spec) {
    spec.validate();
    const auto offsets = layout_offsets(spec);
    const double sag_a = 4.0 * spec.sag / (spec.span_length * spec.span_length);
    const int n = spec.points_per_wire;

    Rng rng(spec.seed);
    PointCloud cloud;
    cloud.points.reserve(static_cast<std::size_t>(spec.k) * n);
    cloud.labels.emplace();
    cloud.labels->reserve(cloud.points.capacity());

    for (int wire = 0; wire < spec.k; ++wire) {
        const auto [off_d, off_r] = offsets[wire];
        for (int i = 0; i < n; ++i) {
            // Midpoint grid in w, identical for every wire.
            const double w =
                -spec.span_length / 2.0 + (i + 0.5) * spec.span_length / n;
            const double noise_d = spec.noise_sigma > 0.0 ? spec.noise_sigma * rng.gaussian() : 0.0;
            const double noise_r = spec.noise_sigma > 0.0 ? spec.noise_sigma * rng.gaussian() : 0.0;
            cloud.points.push_back({w, off_d + noise_d,
                                    kBaseHeight + sag_a * w * w + off_r + noise_r});
            cloud.labels->push_back(wire);
        }
    }
    return cloud;
}

ClusterResult dpc_bruteforce(std::span<const RelativeCoord> coords, const DpcParams& params) {
    params.validate();
    const std::size_t n = coords.size();
    if (n > 2000) {
        throw SizeError("dpc_bruteforce is quadratic and guarded to n <= 2000, got " +
                        std::to_string(n));
    }
    if (n == 0) return {};

    // Reference implementation: every definition spelled out with full
    // pairwise loops, sharing no code with the production path. Distance and
    // kernel expressions must match dpc.cpp bit-for-bit.
    const double cutoff_sq = params.cutoff * params.cutoff;
    std::vector<double> rho(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double dd = coords[i].d - coords[j].d;
            const double dr = coords[i].r - coords[j].r;
            const double dist_sq = dd * dd + dr * dr;
            sum += std::exp(-(dist_sq / cutoff_sq));
        }
        rho[i] = sum;
    }

    // Strict order: i ranks above j iff (rho_i, -i) > (rho_j, -j).
    auto ranks_above = [&](std::size_t a, std::size_t b) {
        if (rho[a] != rho[b]) return rho[a] > rho[b];
        return a < b;
    };

    std::vector<double> delta(n, 0.0);
    std::vector<std::optional<std::size_t>> nearest(n);
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::optional<std::size_t> best_j;
        double farthest = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double dd = coords[i].d - coords[j].d;
            const double dr = coords[i].r - coords[j].r;
            const double dist = std::sqrt(dd * dd + dr * dr);
            farthest = std::max(farthest, dist);
            if (ranks_above(j, i) && dist < best) {
                best = dist;
                best_j = j;
            }
        }
        if (best_j.has_value()) {
            delta[i] = best;
            nearest[i] = best_j;
        } else {
            delta[i] = farthest;  // the unique top of the order
        }
    }

    double max_rho = 0.0, max_delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        max_rho = std::max(max_rho, rho[i]);
        max_delta = std::max(max_delta, delta[i]);
    }
    std::vector<DecisionPoint> decision(n);
    for (std::size_t i = 0; i < n; ++i) {
        decision[i].rho = rho[i];
        decision[i].delta = delta[i];
        decision[i].rho_norm = max_rho > 0.0 ? rho[i] / max_rho : 0.0;
        decision[i].delta_norm = max_delta > 0.0 ? delta[i] / max_delta : 0.0;
        decision[i].gamma = decision[i].rho_norm * decision[i].delta_norm;
        decision[i].nearest_higher = nearest[i];
    }

    std::vector<std::size_t> by_gamma(n);
    std::iota(by_gamma.begin(), by_gamma.end(), std::size_t{0});
    std::sort(by_gamma.begin(), by_gamma.end(), [&](std::size_t a, std::size_t b) {
        if (decision[a].gamma != decision[b].gamma) return decision[a].gamma > decision[b].gamma;
        return a < b;
    });
    const std::size_t m_max = std::min<std::size_t>(static_cast<std::size_t>(params.max_clusters), n);
    std::size_t k = 1;
    for (std::size_t m = 1; m <= m_max; ++m) {
        const double g_m = decision[by_gamma[m - 1]].gamma;
        const double g_next = m < n ? decision[by_gamma[m]].gamma : 0.0;
        if (g_m > 0.0 && g_m >= params.gamma_gap_threshold * g_next) k = m;
    }

    std::vector<int> labels(n, -1);
    for (std::size_t j = 0; j < k; ++j) labels[by_gamma[j]] = static_cast<int>(j);

    std::vector<std::size_t> by_rank(n);
    std::iota(by_rank.begin(), by_rank.end(), std::size_t{0});
    std::sort(by_rank.begin(), by_rank.end(), ranks_above);
    for (std::size_t i : by_rank) {
        if (labels[i] == -1 && nearest[i].has_value()) labels[i] = labels[*nearest[i]];
    }
    if (params.noise_density_fraction > 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            if (decision[i].rho_norm < params.noise_density_fraction) labels[i] = -1;
        }
    }

    ClusterResult result;
    result.k = static_cast<int>(k);
    result.centers.assign(by_gamma.begin(), by_gamma.begin() + k);
    result.labels = std::move(labels);
    result.decision = std::move(decision);
    return result;
}

double label_accuracy(std::span<const int> predicted, std::span<const int> truth) {
    if (predicted.size() != truth.size()) {
        throw ContractError("label_accuracy: label sequences differ in length");
    }
    const std::size_t n = predicted.size();
    if (n == 0) return 1.0;

    auto collect_ids = [](std::span<const int> labels, bool keep_noise) {
        std::vector<int> ids(labels.begin(), labels.end());
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        if (!keep_noise) std::erase(ids, -1);
        return ids;
    };
    const std::vector<int> pred_ids = collect_ids(predicted, false);
    const std::vector<int> truth_ids = collect_ids(truth, true);

    const std::size_t m = std::max(pred_ids.size(), truth_ids.size());
    if (m > 8) {
        throw SizeError("label_accuracy matches exhaustively over at most 8 cluster ids, got " +
                        std::to_string(m));
    }
    if (m == 0) return 1.0;  // everything predicted noise vs ... cannot happen: truth keeps all ids

    auto index_of = [](const std::vector<int>& ids, int value) -> std::size_t {
        return static_cast<std::size_t>(
            std::lower_bound(ids.begin(), ids.end(), value) - ids.begin());
    };

    // counts[p][t]: points with predicted id p and truth id t, padded square.
    std::vector<std::vector<std::size_t>> counts(m, std::vector<std::size_t>(m, 0));
    for (std::size_t i = 0; i < n; ++i) {
        if (predicted[i] == -1) continue;  // noise predictions never match
        const std::size_t p = index_of(pred_ids, predicted[i]);
        const std::size_t t = index_of(truth_ids, truth[i]);
        if (p < m && t < truth_ids.size()) counts[p][t] += 1;
    }

    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::size_t best = 0;
    do {
        std::size_t matched = 0;
        for (std::size_t p = 0; p < m; ++p) matched += counts[p][perm[p]];
        best = std::max(best, matched);
    } while (std::next_permutation(perm.begin(), perm.end()));

    return static_cast<double>(best) / static_cast<double>(n);
}

}  // namespace splitwire
