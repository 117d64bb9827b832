#pragma once

#include "modcalc/curve.hpp"
#include "modcalc/density.hpp"
#include "modcalc/space.hpp"

#include <optional>
#include <span>
#include <vector>

namespace modcalc {

class CurveFamily;

/// Max over graph neighbours u of |f(u) - f(v)| / d(u,v); 0 at isolated vertices.
/// On a graph the slope and the asymptotic slope coincide.
Density asymptotic_slope(const MetricMeasureSpace& space, std::span<const double> f);

/// Max over distinct pairs of E at finite distance of |f(u) - f(v)| / d(u,v).
double lipschitz_constant(const MetricMeasureSpace& space, std::span<const double> f, const VertexSet& set);

/// Inf-convolution extension x -> min_{y in K} f(y) + L d(y,x). Only the
/// values of `f` on K are read.
VertexFunction mcshane_extend(const MetricMeasureSpace& space, std::span<const double> f, const VertexSet& domain,
                              double lipschitz);

struct UpperGradientReport {
    bool holds = true;
    std::optional<std::size_t> worst_curve;
    double worst_violation = 0.0;  // max of |f(end) - f(start)| - integral; <= 0 when it holds
};

inline constexpr double kUpperGradientTolerance = 1e-12;

UpperGradientReport is_upper_gradient(const MetricMeasureSpace& space, std::span<const double> f,
                                      std::span<const double> rho, const CurveFamily& family);

struct RelaxParams {
    VertexSet sources;
    double mesh = 1.0;  // delta: largest jump of a discrete path
    double cap = 1.0;   // M
};

/// Min over discrete paths with mesh <= delta from a source y of
/// f(y) + sum of trapezoid costs ((g(u) + g(v)) / 2) d(u,v), capped at M.
/// Unreachable vertices get M.
VertexFunction path_relax(const MetricMeasureSpace& space, std::span<const double> f, std::span<const double> g,
                          const RelaxParams& params);

}  // namespace modcalc
