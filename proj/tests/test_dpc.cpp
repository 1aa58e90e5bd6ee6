#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "splitwire/centerline.hpp"
#include "splitwire/dpc.hpp"
#include "splitwire/errors.hpp"
#include "splitwire/synth.hpp"

#include "oracles.hpp"

using namespace splitwire;

namespace {

std::vector<RelativeCoord> pipeline_coords(const PointCloud& cloud) {
    const SpanFrame frame = fit_span_frame(cloud);
    const auto projected = project(cloud, frame);
    return relative_coords(projected, fit_parabola(projected));
}

std::vector<RelativeCoord> uniform_coords(oracles::Rng& rng, std::size_t n, double box) {
    std::vector<RelativeCoord> coords;
    for (std::size_t i = 0; i < n; ++i) {
        coords.push_back({rng.uniform(0, box), rng.uniform(0, box)});
    }
    return coords;
}

std::vector<DecisionPoint> decision_from_gammas(const std::vector<double>& gammas) {
    std::vector<DecisionPoint> decision(gammas.size());
    for (std::size_t i = 0; i < gammas.size(); ++i) decision[i].gamma = gammas[i];
    return decision;
}

}  // namespace

TEST_CASE("local_density of a single point is zero") {
    const std::vector<RelativeCoord> one{{0.3, -0.2}};
    const auto rho = local_density(one, 0.05);
    REQUIRE(rho.size() == 1);
    CHECK(rho[0] == 0.0);
}

TEST_CASE("two points at the cutoff distance see the analytic kernel value") {
    const std::vector<RelativeCoord> coords{{0.0, 0.0}, {0.05, 0.0}};
    const auto rho = local_density(coords, 0.05);
    CHECK(rho[0] == doctest::Approx(0.36787944117144233).epsilon(1e-12));
    CHECK(rho[1] == doctest::Approx(0.36787944117144233).epsilon(1e-12));
}

TEST_CASE("local_density validates the cutoff") {
    const std::vector<RelativeCoord> coords{{0, 0}};
    CHECK_THROWS_AS(local_density(coords, 0.0), ParameterError);
    CHECK_THROWS_AS(local_density(coords, -1.0), ParameterError);
}

TEST_CASE("grid-accelerated density matches brute force within the truncation bound") {
    oracles::Rng rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        const auto coords = uniform_coords(rng, 300, 1.0);
        const auto fast = local_density(coords, 0.05);
        const auto exact = oracles::brute_rho(std::span<const RelativeCoord>(coords), 0.05);
        for (std::size_t i = 0; i < coords.size(); ++i) {
            CHECK(std::abs(fast[i] - exact[i]) <= 1.5e-4);
            CHECK(fast[i] <= exact[i] + 1e-15);  // truncation only ever removes mass
        }
    }
}

TEST_CASE("density is permutation equivariant") {
    oracles::Rng rng(7);
    auto coords = uniform_coords(rng, 120, 0.5);
    const auto rho = local_density(coords, 0.05);

    std::vector<std::size_t> perm(coords.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    for (std::size_t i = perm.size(); i > 1; --i) {
        std::swap(perm[i - 1], perm[rng.integer(i)]);
    }
    std::vector<RelativeCoord> shuffled(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) shuffled[i] = coords[perm[i]];
    const auto rho_shuffled = local_density(shuffled, 0.05);
    for (std::size_t i = 0; i < coords.size(); ++i) {
        CHECK(std::abs(rho_shuffled[i] - rho[perm[i]]) <= 1.5e-4);
    }
}

TEST_CASE("separation_delta implements the tie-broken strict order") {
    const std::vector<RelativeCoord> coords{{0.0, 0.0}, {0.3, 0.0}};
    const std::vector<double> rho{1.0, 1.0};
    const Separation sep = separation_delta(coords, rho);
    CHECK(sep.delta[0] == doctest::Approx(0.3).epsilon(1e-15));
    CHECK_FALSE(sep.nearest_higher[0].has_value());
    CHECK(sep.delta[1] == doctest::Approx(0.3).epsilon(1e-15));
    REQUIRE(sep.nearest_higher[1].has_value());
    CHECK(*sep.nearest_higher[1] == 0);
}

TEST_CASE("the density argmax takes the maximum distance") {
    oracles::Rng rng(13);
    const auto coords = uniform_coords(rng, 150, 0.8);
    const auto rho = local_density(coords, 0.05);
    const Separation sep = separation_delta(coords, rho);

    std::size_t top = 0;
    for (std::size_t i = 1; i < rho.size(); ++i) {
        if (rho[i] > rho[top]) top = i;
    }
    double farthest = 0.0;
    double max_pairwise = 0.0;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        for (std::size_t j = i + 1; j < coords.size(); ++j) {
            const double dist = std::hypot(coords[i].d - coords[j].d, coords[i].r - coords[j].r);
            max_pairwise = std::max(max_pairwise, dist);
            if (i == top || j == top) farthest = std::max(farthest, dist);
        }
    }
    CHECK(sep.delta[top] == doctest::Approx(farthest).epsilon(1e-12));
    CHECK_FALSE(sep.nearest_higher[top].has_value());

    std::size_t without = 0;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (!sep.nearest_higher[i].has_value()) ++without;
        CHECK(sep.delta[i] <= max_pairwise * (1 + 1e-12));
        CHECK(sep.delta[i] <= sep.delta[top] * (1 + 1e-12));
    }
    CHECK(without == 1);
}

TEST_CASE("grid nearest-higher search equals brute force exactly") {
    oracles::Rng rng(19);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng.integer(299);
        // mix of spread and clustered data
        auto coords = uniform_coords(rng, n / 2 + 1, 1.0);
        while (coords.size() < n) {
            coords.push_back({0.3 + 0.01 * rng.gaussian(), 0.4 + 0.01 * rng.gaussian()});
        }
        const auto rho = local_density(coords, 0.05);
        const Separation sep = separation_delta(coords, rho);
        const auto [delta, nearest] =
            oracles::brute_delta(std::span<const RelativeCoord>(coords), rho);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(sep.delta[i] == delta[i]);
            CHECK(sep.nearest_higher[i] == nearest[i]);
        }
    }
}

TEST_CASE("separation_delta checks lengths and handles n = 1") {
    const std::vector<RelativeCoord> coords{{0, 0}, {1, 1}};
    const std::vector<double> bad{1.0};
    CHECK_THROWS_AS(separation_delta(coords, bad), ContractError);

    const std::vector<RelativeCoord> one{{0, 0}};
    const std::vector<double> rho{0.0};
    const Separation sep = separation_delta(one, rho);
    CHECK(sep.delta[0] == 0.0);
    CHECK_FALSE(sep.nearest_higher[0].has_value());
}

TEST_CASE("normalize_decision divides by the maxima") {
    Separation sep;
    sep.delta = {1.0, 0.5};
    sep.nearest_higher = {std::nullopt, std::size_t{0}};
    const std::vector<double> rho{2.0, 4.0};
    const auto decision = normalize_decision(rho, sep);
    CHECK(decision[0].rho_norm == 0.5);
    CHECK(decision[1].rho_norm == 1.0);
    CHECK(decision[0].delta_norm == 1.0);
    CHECK(decision[1].delta_norm == 0.5);
    CHECK(decision[0].gamma == 0.5);
    CHECK(decision[1].gamma == 0.5);
}

TEST_CASE("normalize_decision guards the all-zero case") {
    Separation sep;
    sep.delta = {0.0};
    sep.nearest_higher = {std::nullopt};
    const std::vector<double> rho{0.0};
    const auto decision = normalize_decision(rho, sep);
    CHECK(decision[0].rho_norm == 0.0);
    CHECK(decision[0].delta_norm == 0.0);
    CHECK(decision[0].gamma == 0.0);
}

TEST_CASE("normalized maxima hit 1 for n >= 2") {
    oracles::Rng rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        const auto coords = uniform_coords(rng, 2 + rng.integer(60), 0.5);
        const auto rho = local_density(coords, 0.05);
        const auto decision = normalize_decision(rho, separation_delta(coords, rho));
        double max_rho_norm = 0, max_delta_norm = 0, max_gamma = 0;
        for (const auto& d : decision) {
            max_rho_norm = std::max(max_rho_norm, d.rho_norm);
            max_delta_norm = std::max(max_delta_norm, d.delta_norm);
            max_gamma = std::max(max_gamma, d.gamma);
        }
        CHECK(max_rho_norm == 1.0);
        CHECK(max_delta_norm == 1.0);
        CHECK(max_gamma <= 1.0);
    }
}

TEST_CASE("select_centers applies the documented gap rule") {
    DpcParams params;  // threshold 3.0, max 8

    // hand-evaluated: m = 4 is the largest index with g_m >= 3*g_{m+1}
    const auto decision =
        decision_from_gammas({1.0, 0.95, 0.9, 0.88, 0.02, 0.015, 0.01, 0.009, 0.008});
    const auto [k, centers] = select_centers(decision, params);
    CHECK(k == 4);
    REQUIRE(centers.size() == 4);
    CHECK(centers[0] == 0);
    CHECK(centers[3] == 3);
}

TEST_CASE("select_centers falls back to k = 1") {
    DpcParams params;
    const auto equal = decision_from_gammas(std::vector<double>(20, 0.4));
    CHECK(select_centers(equal, params).first == 1);

    const auto zeros = decision_from_gammas(std::vector<double>(20, 0.0));
    CHECK(select_centers(zeros, params).first == 1);
}

TEST_CASE("select_centers zero pad applies when n <= max_clusters") {
    DpcParams params;
    // all positive, no interior gap: the zero pad makes m = n qualify
    const auto decision = decision_from_gammas({0.5, 0.4, 0.3});
    CHECK(select_centers(decision, params).first == 3);
}

TEST_CASE("select_centers respects max_clusters") {
    DpcParams params;
    params.max_clusters = 2;
    const auto decision = decision_from_gammas({1.0, 0.9, 0.8, 0.001});
    const auto [k, centers] = select_centers(decision, params);
    CHECK(k <= 2);
}

TEST_CASE("assign gives centers their own labels") {
    // three isolated points, all declared centers
    const std::vector<RelativeCoord> coords{{0, 0}, {1, 0}, {2, 0}};
    const auto rho = local_density(coords, 0.05);
    auto decision = normalize_decision(rho, separation_delta(coords, rho));
    const std::vector<std::size_t> centers{0, 1, 2};
    DpcParams params;
    const ClusterResult result = assign(std::move(decision), centers, params);
    CHECK(result.labels == std::vector<int>{0, 1, 2});
}

TEST_CASE("assign validates centers") {
    const std::vector<RelativeCoord> coords{{0, 0}, {1, 0}};
    const auto rho = local_density(coords, 0.05);
    const auto decision = normalize_decision(rho, separation_delta(coords, rho));
    DpcParams params;
    CHECK_THROWS_AS(assign(decision, std::vector<std::size_t>{}, params), ContractError);
    CHECK_THROWS_AS(assign(decision, std::vector<std::size_t>{5}, params), ContractError);
    CHECK_THROWS_AS(assign(decision, std::vector<std::size_t>{0, 0}, params), ContractError);
}

TEST_CASE("two blobs 0.45 m apart cluster to ground truth") {
    oracles::Rng rng(43);
    std::vector<RelativeCoord> coords;
    std::vector<int> truth;
    for (int i = 0; i < 50; ++i) {
        coords.push_back({0.005 * rng.gaussian(), 0.005 * rng.gaussian()});
        truth.push_back(0);
    }
    for (int i = 0; i < 50; ++i) {
        coords.push_back({0.45 + 0.005 * rng.gaussian(), 0.005 * rng.gaussian()});
        truth.push_back(1);
    }
    DpcParams params;
    const ClusterResult result = cluster(coords, params);
    CHECK(result.k == 2);
    CHECK(label_accuracy(result.labels, truth) == 1.0);
}

TEST_CASE("production path equals the brute-force oracle on generator clouds") {
    const std::vector<std::pair<int, Layout>> layouts{
        {1, Layout::single},          {2, Layout::pair},
        {3, Layout::regular_polygon}, {4, Layout::square},
        {6, Layout::regular_polygon}, {8, Layout::regular_polygon},
    };
    DpcParams params;
    for (const auto& [k, layout] : layouts) {
        for (std::uint64_t seed = 0; seed < 9; ++seed) {
            BundleSpec spec;
            spec.k = k;
            spec.layout = layout;
            spec.points_per_wire = 300 / k;
            spec.seed = 1000 + seed;
            const PointCloud cloud = generate(spec);
            const auto coords = pipeline_coords(cloud);

            const ClusterResult fast = cluster(coords, params);
            const ClusterResult exact = dpc_bruteforce(coords, params);

            CHECK(fast.k == exact.k);
            CHECK(fast.labels == exact.labels);
            CHECK(fast.centers == exact.centers);
            for (std::size_t i = 0; i < coords.size(); ++i) {
                CHECK(std::abs(fast.decision[i].rho - exact.decision[i].rho) <= 1.5e-4);
                CHECK(fast.decision[i].delta == exact.decision[i].delta);
                CHECK(fast.decision[i].nearest_higher == exact.decision[i].nearest_higher);
            }
        }
    }
}

TEST_CASE("labels are scale invariant when d_c scales along") {
    BundleSpec spec;
    spec.seed = 77;
    const PointCloud cloud = generate(spec);
    const auto coords = pipeline_coords(cloud);

    DpcParams params;
    const ClusterResult base = cluster(coords, params);

    for (double scale : {4.0, 0.5}) {  // powers of two scale exactly
        std::vector<RelativeCoord> scaled;
        for (const auto& c : coords) scaled.push_back({c.d * scale, c.r * scale});
        DpcParams scaled_params = params;
        scaled_params.cutoff = params.cutoff * scale;
        const ClusterResult result = cluster(scaled, scaled_params);
        CHECK(result.labels == base.labels);
        for (std::size_t i = 0; i < coords.size(); ++i) {
            CHECK(result.decision[i].rho == base.decision[i].rho);
        }
    }
}

TEST_CASE("chains of nearest_higher terminate at a center with the same label") {
    oracles::Rng rng(53);
    const auto coords = uniform_coords(rng, 200, 0.6);
    DpcParams params;
    const ClusterResult result = cluster(coords, params);
    REQUIRE(result.k >= 1);
    CHECK(result.k <= params.max_clusters);

    std::vector<bool> is_center(coords.size(), false);
    for (std::size_t c : result.centers) is_center[c] = true;

    for (std::size_t i = 0; i < coords.size(); ++i) {
        CHECK(result.labels[i] >= 0);
        CHECK(result.labels[i] < result.k);
        std::size_t walk = i;
        while (!is_center[walk]) {
            REQUIRE(result.decision[walk].nearest_higher.has_value());
            walk = *result.decision[walk].nearest_higher;
        }
        CHECK(result.labels[walk] == result.labels[i]);
    }
}

TEST_CASE("noise filter relabels low-density points") {
    oracles::Rng rng(59);
    std::vector<RelativeCoord> coords;
    for (int i = 0; i < 80; ++i) {
        coords.push_back({0.005 * rng.gaussian(), 0.005 * rng.gaussian()});
    }
    coords.push_back({5.0, 5.0});  // isolated outlier

    DpcParams params;
    params.noise_density_fraction = 0.3;
    const ClusterResult result = cluster(coords, params);
    CHECK(result.labels.back() == -1);
    for (std::size_t i = 0; i + 1 < coords.size(); ++i) CHECK(result.labels[i] == 0);
}

TEST_CASE("decision CSV is bit-stable and round trips") {
    std::ostringstream empty;
    write_decision_csv(std::vector<DecisionPoint>{}, empty);
    CHECK(empty.str() == "index,rho,delta,rho_norm,delta_norm,gamma\n");

    std::vector<DecisionPoint> one(1);
    std::ostringstream single;
    write_decision_csv(one, single);
    CHECK(single.str() ==
          "index,rho,delta,rho_norm,delta_norm,gamma\n"
          "0,0.00000000,0.00000000,0.00000000,0.00000000,0.00000000\n");

    oracles::Rng rng(61);
    const auto coords = uniform_coords(rng, 40, 0.4);
    const auto rho = local_density(coords, 0.05);
    const auto decision = normalize_decision(rho, separation_delta(coords, rho));
    std::ostringstream out;
    write_decision_csv(decision, out);

    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);  // header
    std::size_t row = 0;
    while (std::getline(in, line)) {
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        std::size_t index;
        double rho_v, delta_v, rho_n, delta_n, gamma;
        fields >> index >> rho_v >> delta_v >> rho_n >> delta_n >> gamma;
        CHECK(index == row);
        CHECK(std::abs(rho_v - decision[row].rho) <= 1e-8 * std::max(1.0, decision[row].rho));
        CHECK(std::abs(delta_v - decision[row].delta) <= 1e-8);
        CHECK(std::abs(gamma - decision[row].gamma) <= 1e-8);
        ++row;
    }
    CHECK(row == decision.size());
}

TEST_CASE("DpcParams validation") {
    DpcParams params;
    params.cutoff = 0.0;
    CHECK_THROWS_AS(params.validate(), ParameterError);
    params = {};
    params.max_clusters = 0;
    CHECK_THROWS_AS(params.validate(), ParameterError);
    params = {};
    params.gamma_gap_threshold = 1.0;
    CHECK_THROWS_AS(params.validate(), ParameterError);
    params = {};
    params.noise_density_fraction = 1.0;
    CHECK_THROWS_AS(params.validate(), ParameterError);
    params = {};
    CHECK_NOTHROW(params.validate());
}
