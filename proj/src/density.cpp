#include "modcalc/density.hpp"

#include "modcalc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace modcalc {

Density::Density(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_)
        if (!(v >= 0.0)) throw ValidationError("density", "densities must be nonnegative");
}

double lp_energy(const MetricMeasureSpace& space, std::span<const double> g, double p) {
    require_size(space, g, "function");
    double total = 0.0;
    for (Vertex v = 0; v < g.size(); ++v) {
        double a = std::abs(g[v]);
        if (a == 0.0) continue;
        total += space.mass(v) * (p == 1.0 ? a : p == 2.0 ? a * a : std::pow(a, p));
    }
    return total;
}

double lp_norm(const MetricMeasureSpace& space, std::span<const double> g, double p) {
    require_size(space, g, "function");
    if (std::isinf(p)) {
        double best = 0.0;
        for (double x : g) best = std::max(best, std::abs(x));
        return best;
    }
    return std::pow(lp_energy(space, g, p), 1.0 / p);
}

double conjugate_exponent(double p) {
    if (p == 1.0) return kInfinity;
    if (std::isinf(p)) return 1.0;
    return p / (p - 1.0);
}

void require_size(const MetricMeasureSpace& space, std::span<const double> values, const char* field) {
    if (values.size() != space.size())
        throw ValidationError(field, std::string(field) + " has " + std::to_string(values.size()) +
                                         " values for a space of " + std::to_string(space.size()) + " vertices");
}

}  // namespace modcalc
