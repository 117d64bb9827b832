#include "modcalc/lipschitz.hpp"

#include "modcalc/errors.hpp"
#include "modcalc/families.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <utility>

namespace modcalc {

Density asymptotic_slope(const MetricMeasureSpace& space, std::span<const double> f) {
    require_size(space, f, "f");
    std::vector<double> slope(space.size(), 0.0);
    for (Vertex v = 0; v < space.size(); ++v)
        for (const auto& nb : space.neighbors(v))
            slope[v] = std::max(slope[v], std::abs(f[nb.vertex] - f[v]) / space.distance(v, nb.vertex));
    return Density(std::move(slope));
}

double lipschitz_constant(const MetricMeasureSpace& space, std::span<const double> f, const VertexSet& set) {
    require_size(space, f, "f");
    if (set.empty()) throw ValidationError("E", "Lipschitz constant of an empty set is undefined");
    const auto& items = set.items();
    double best = 0.0;
    for (std::size_t i = 0; i < items.size(); ++i)
        for (std::size_t j = i + 1; j < items.size(); ++j) {
            double d = space.distance(items[i], items[j]);
            if (std::isfinite(d)) best = std::max(best, std::abs(f[items[i]] - f[items[j]]) / d);
        }
    return best;
}

VertexFunction mcshane_extend(const MetricMeasureSpace& space, std::span<const double> f, const VertexSet& domain,
                              double lipschitz) {
    require_size(space, f, "f");
    if (domain.empty()) throw ValidationError("K", "extension domain must be nonempty");
    const double own = lipschitz_constant(space, f, domain);
    if (!(lipschitz >= own * (1.0 - 1e-12)))
        throw ValidationError("L", "L is below the Lipschitz constant of f on K");
    VertexFunction out(space.size(), kInfinity);
    for (Vertex x = 0; x < space.size(); ++x) {
        if (domain.contains(x)) {
            out[x] = f[x];
            continue;
        }
        for (Vertex y : domain) {
            double d = space.distance(y, x);
            if (std::isfinite(d)) out[x] = std::min(out[x], f[y] + lipschitz * d);
        }
    }
    return out;
}

UpperGradientReport is_upper_gradient(const MetricMeasureSpace& space, std::span<const double> f,
                                      std::span<const double> rho, const CurveFamily& family) {
    require_size(space, f, "f");
    require_size(space, rho, "rho");
    UpperGradientReport report;
    report.worst_violation = -kInfinity;
    for (std::size_t k = 0; k < family.size(); ++k) {
        const auto& curve = family[k];
        double increment = std::abs(f[curve.finish()] - f[curve.start()]);
        double violation = increment - path_integral(space, curve, rho);
        if (violation > report.worst_violation) {
            report.worst_violation = violation;
            report.worst_curve = k;
        }
    }
    if (family.empty()) report.worst_violation = 0.0;
    report.holds = report.worst_violation <= kUpperGradientTolerance;
    return report;
}

VertexFunction path_relax(const MetricMeasureSpace& space, std::span<const double> f, std::span<const double> g,
                          const RelaxParams& params) {
    require_size(space, f, "f");
    require_size(space, g, "g");
    if (params.sources.empty()) throw ValidationError("C", "source set must be nonempty");
    if (!(params.mesh > 0.0)) throw ValidationError("delta", "mesh bound must be positive");
    if (!(params.cap > 0.0)) throw ValidationError("M", "cap must be positive");
    for (Vertex c : params.sources) {
        if (c >= space.size()) throw ValidationError("C", "unknown source vertex");
        if (!(f[c] >= 0.0)) throw ValidationError("f", "f must be nonnegative on the sources");
    }
    for (double x : g)
        if (!(x >= 0.0)) throw ValidationError("g", "g must be nonnegative");

    const std::size_t n = space.size();
    std::vector<double> dist(n, kInfinity);
    using Entry = std::pair<double, Vertex>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    for (Vertex c : params.sources) {
        dist[c] = f[c];
        queue.emplace(f[c], c);
    }
    while (!queue.empty()) {
        auto [d, u] = queue.top();
        queue.pop();
        if (d > dist[u] || d >= params.cap) continue;
        for (Vertex v = 0; v < n; ++v) {
            if (v == u) continue;
            double hop = space.distance(u, v);
            if (!(hop <= params.mesh)) continue;
            double candidate = d + 0.5 * (g[u] + g[v]) * hop;
            if (candidate < dist[v]) {
                dist[v] = candidate;
                queue.emplace(candidate, v);
            }
        }
    }
    for (double& x : dist) x = std::min(x, params.cap);
    return dist;
}

}  // namespace modcalc
