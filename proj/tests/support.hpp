#pragma once

#include "modcalc/curve.hpp"
#include "modcalc/families.hpp"
#include "modcalc/space.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace testkit {

using namespace modcalc;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t pick(std::mt19937_64& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

/// Random spanning tree plus extra edges; masses and lengths drawn from the given ranges.
inline SpaceSpec random_spec(std::mt19937_64& rng, std::size_t n, double extra = 0.3, double len_lo = 0.5,
                             double len_hi = 2.0, double m_lo = 0.2, double m_hi = 2.0) {
    SpaceSpec spec;
    for (std::size_t i = 0; i < n; ++i) spec.vertices.push_back({"v" + std::to_string(i), uniform(rng, m_lo, m_hi)});
    std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
    auto add = [&](std::size_t a, std::size_t b) {
        if (a == b || used[a][b]) return;
        used[a][b] = used[b][a] = true;
        spec.edges.push_back({"v" + std::to_string(a), "v" + std::to_string(b), uniform(rng, len_lo, len_hi)});
    };
    for (std::size_t i = 1; i < n; ++i) add(i, pick(rng, i));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (uniform(rng, 0.0, 1.0) < extra / static_cast<double>(n)) add(a, b);
    return spec;
}

inline MetricMeasureSpace random_space(std::mt19937_64& rng, std::size_t n, double extra = 0.3) {
    return MetricMeasureSpace::build(random_spec(rng, n, extra));
}

inline std::vector<Vertex> random_walk_vertices(const MetricMeasureSpace& space, std::mt19937_64& rng,
                                                std::size_t hops) {
    std::vector<Vertex> walk{pick(rng, space.size())};
    for (std::size_t k = 0; k < hops; ++k) {
        auto nbs = space.neighbors(walk.back());
        if (nbs.empty()) break;
        walk.push_back(nbs[pick(rng, nbs.size())].vertex);
    }
    return walk;
}

/// Curve with random strictly increasing times on a random interval.
inline DiscreteCurve random_timed_curve(const MetricMeasureSpace& space, std::mt19937_64& rng, std::size_t hops) {
    auto vertices = random_walk_vertices(space, rng, hops);
    std::vector<double> times{uniform(rng, -1.0, 1.0)};
    for (std::size_t i = 1; i < vertices.size(); ++i) times.push_back(times.back() + uniform(rng, 0.05, 1.0));
    return DiscreteCurve(std::move(times), std::move(vertices));
}

inline std::vector<double> random_values(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::vector<double> out(n);
    for (double& x : out) x = uniform(rng, lo, hi);
    return out;
}

inline double relative_error(double value, double expected) {
    return std::abs(value - expected) / std::max(std::abs(expected), 1e-300);
}

}  // namespace testkit
