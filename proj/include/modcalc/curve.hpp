#pragma once

#include "modcalc/density.hpp"
#include "modcalc/space.hpp"

#include <span>
#include <vector>

namespace modcalc {

/// Time-stamped vertex walk. Consecutive vertices are distinct graph
/// neighbours; a single breakpoint is the constant curve.
class DiscreteCurve {
public:
    DiscreteCurve(std::vector<double> times, std::vector<Vertex> vertices);

    /// Constant-speed parametrization of a vertex walk on [0,1].
    static DiscreteCurve through(const MetricMeasureSpace& space, std::vector<Vertex> vertices);
    static DiscreteCurve constant(Vertex v) { return DiscreteCurve({0.0}, {v}); }

    const std::vector<double>& times() const noexcept { return times_; }
    const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
    std::size_t hops() const noexcept { return vertices_.size() - 1; }
    bool is_constant() const noexcept { return vertices_.size() == 1; }
    Vertex start() const noexcept { return vertices_.front(); }
    Vertex finish() const noexcept { return vertices_.back(); }
    double start_time() const noexcept { return times_.front(); }
    double end_time() const noexcept { return times_.back(); }

    /// True when the domain is [0,1] (constant curves always qualify).
    bool on_unit_interval() const;

    /// Checks that the vertices exist and consecutive ones are adjacent.
    void validate(const MetricMeasureSpace& space) const;

    DiscreteCurve reversed() const;

    friend bool operator==(const DiscreteCurve&, const DiscreteCurve&) = default;

private:
    std::vector<double> times_;
    std::vector<Vertex> vertices_;
};

/// Signed atoms attached to the breakpoints of a curve.
struct AtomicMeasureOnCurve {
    std::vector<double> atoms;

    double total() const;
    double total_variation() const;
};

struct VariationMeasures {
    AtomicMeasureOnCurve arc_length;        // s_gamma
    AtomicMeasureOnCurve signed_variation;  // mu of f along the curve
    AtomicMeasureOnCurve total_variation;   // s of f along the curve
};

enum class StieltjesRule { Left, Right };

struct IbpTerms {
    double forward;   // left-rule sum of f1 against f2
    double backward;  // right-rule sum of f2 against f1
    double boundary;  // (f1 f2)(end) - (f1 f2)(start)
};

std::vector<double> hop_lengths(const MetricMeasureSpace& space, const DiscreteCurve& curve);
std::vector<double> speeds(const MetricMeasureSpace& space, const DiscreteCurve& curve);

double length(const MetricMeasureSpace& space, const DiscreteCurve& curve);

DiscreteCurve cs_reparam(const MetricMeasureSpace& space, const DiscreteCurve& curve);

/// Trapezoid rule: sum over hops of the endpoint average of rho times the
/// hop length. +inf propagates.
double path_integral(const MetricMeasureSpace& space, const DiscreteCurve& curve, std::span<const double> rho);

/// Per-breakpoint coefficients c with path_integral(rho) = sum_i c_i rho(p_i).
std::vector<double> arc_length_atoms(const MetricMeasureSpace& space, const DiscreteCurve& curve);

VariationMeasures variation_measures(const MetricMeasureSpace& space, const DiscreteCurve& curve,
                                     std::span<const double> f);

double stieltjes(const DiscreteCurve& curve, std::span<const double> a, std::span<const double> f,
                 StieltjesRule rule);

IbpTerms ibp_identity(const DiscreteCurve& curve, std::span<const double> f1, std::span<const double> f2);

/// Sub-curve between two breakpoint times, linearly rescaled to [0,1].
DiscreteCurve restrict(const DiscreteCurve& curve, double s, double t);

/// Integral of |speed|^q over the domain; the max speed for q = inf.
double q_energy(const MetricMeasureSpace& space, const DiscreteCurve& curve, double q);

/// Vertex occupied at time t: each hop spends the first half of its time
/// interval at its tail and the second half at its head.
Vertex position_at(const DiscreteCurve& curve, double t);

}  // namespace modcalc
