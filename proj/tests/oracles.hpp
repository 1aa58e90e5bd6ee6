// Test-only reference implementations, kept independent of the library code
// paths they check.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace oracles {

// Principal direction of a 2x2 symmetric scatter matrix, closed form.
inline std::array<double, 2> principal_direction(double sxx, double sxy, double syy) {
    const double mean = (sxx + syy) / 2.0;
    const double diff = (sxx - syy) / 2.0;
    const double lambda_max = mean + std::sqrt(diff * diff + sxy * sxy);
    // Pick the numerically better of the two eigenvector expressions.
    double vx, vy;
    if (std::abs(lambda_max - syy) >= std::abs(lambda_max - sxx)) {
        vx = lambda_max - syy;
        vy = sxy;
    } else {
        vx = sxy;
        vy = lambda_max - sxx;
    }
    const double norm = std::hypot(vx, vy);
    return {vx / norm, vy / norm};
}

// Cramer's-rule solve of a 3x3 system.
inline std::array<double, 3> cramer3(const std::array<std::array<double, 3>, 3>& m,
                                     const std::array<double, 3>& rhs) {
    auto det3 = [](const std::array<std::array<double, 3>, 3>& a) {
        return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
               a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
               a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    };
    const double det = det3(m);
    std::array<double, 3> out{};
    for (int col = 0; col < 3; ++col) {
        auto replaced = m;
        for (int row = 0; row < 3; ++row) replaced[row][col] = rhs[row];
        out[col] = det3(replaced) / det;
    }
    return out;
}

// Least-squares parabola via Cramer's rule on the raw normal equations.
inline std::array<double, 3> parabola_fit(std::span<const double> w, std::span<const double> z) {
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0, t0 = 0, t1 = 0, t2 = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double wi = w[i];
        const double wi2 = wi * wi;
        s1 += wi;
        s2 += wi2;
        s3 += wi2 * wi;
        s4 += wi2 * wi2;
        t0 += z[i];
        t1 += z[i] * wi;
        t2 += z[i] * wi2;
    }
    const double n = static_cast<double>(w.size());
    return cramer3({{{s4, s3, s2}, {s3, s2, s1}, {s2, s1, n}}}, {t2, t1, t0});
}

// Least-squares line d = offset + slope * w, closed form.
inline std::array<double, 2> line_fit(std::span<const double> w, std::span<const double> d) {
    double sw = 0, sd = 0, sww = 0, swd = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        sw += w[i];
        sd += d[i];
        sww += w[i] * w[i];
        swd += w[i] * d[i];
    }
    const double n = static_cast<double>(w.size());
    const double slope = (n * swd - sw * sd) / (n * sww - sw * sw);
    return {(sd - slope * sw) / n, slope};
}

// Exhaustive pairwise local density. The distance and kernel expressions
// deliberately mirror the production form so agreement can be exact where no
// term is truncated.
template <typename Coord>
std::vector<double> brute_rho(std::span<const Coord> coords, double cutoff) {
    const std::size_t n = coords.size();
    const double cutoff_sq = cutoff * cutoff;
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
    return rho;
}

// Exhaustive separation distances under the strict (rho, -index) order.
template <typename Coord>
std::pair<std::vector<double>, std::vector<std::optional<std::size_t>>> brute_delta(
    std::span<const Coord> coords, std::span<const double> rho) {
    const std::size_t n = coords.size();
    std::vector<double> delta(n, 0.0);
    std::vector<std::optional<std::size_t>> nearest(n);
    auto ranks_above = [&](std::size_t a, std::size_t b) {
        if (rho[a] != rho[b]) return rho[a] > rho[b];
        return a < b;
    };
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
        delta[i] = best_j.has_value() ? best : farthest;
        nearest[i] = best_j;
    }
    return {std::move(delta), std::move(nearest)};
}

// Deterministic random source for test data.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double gaussian() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    std::uint64_t integer(std::uint64_t bound) { return engine_() % bound; }

private:
    std::mt19937_64 engine_;
};

}  // namespace oracles
