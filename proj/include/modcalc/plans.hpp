#pragma once

#include "modcalc/curve.hpp"
#include "modcalc/density.hpp"
#include "modcalc/space.hpp"

#include <optional>
#include <span>
#include <vector>

namespace modcalc {

/// Weight given to the endpoint evaluations in admissibility and barycenters.
enum class Lambda : int { Zero = 0, One = 1 };

inline double as_real(Lambda lambda) { return lambda == Lambda::One ? 1.0 : 0.0; }

struct PlanAtom {
    DiscreteCurve curve;
    double weight;
};

/// Finitely supported nonnegative measure on curves parametrized on [0,1].
class Plan {
public:
    Plan() = default;
    explicit Plan(std::vector<PlanAtom> support);

    const std::vector<PlanAtom>& support() const noexcept { return support_; }
    bool empty() const noexcept { return support_.empty(); }
    double mass() const;
    bool is_probability() const;

    Plan normalized() const;
    Plan scaled(double factor) const;
    /// pi restricted to the listed support indices and renormalized.
    Plan restricted(std::span<const std::size_t> indices) const;

    void validate(const MetricMeasureSpace& space) const;

private:
    std::vector<PlanAtom> support_;
};

/// Bar(pi)(v) m(v) = lambda (e_0)#pi(v) + lambda (e_1)#pi(v) + sum_gamma w s_gamma(v).
struct Barycenter {
    Density density;
    Lambda lambda = Lambda::Zero;

    double norm(const MetricMeasureSpace& space, double q) const { return lp_norm(space, density.values(), q); }
};

Barycenter barycenter(const MetricMeasureSpace& space, const Plan& plan, Lambda lambda);

/// sup over t in [0,1] and v of (e_t)#pi(v) / m(v), with positions given by
/// position_at. The pushforward is piecewise constant in t, so the sup is a max
/// over finitely many cells.
double compression(const MetricMeasureSpace& space, const Plan& plan);

/// Same maximum restricted to the uniform grid t = k/n, k = 0..n.
double compression_on_grid(const MetricMeasureSpace& space, const Plan& plan, std::size_t n);

/// lambda endpoint masses plus the time-occupation measure int_0^1 (e_t)#pi dt,
/// divided by m. With a grid size the time integral becomes (1/(n+1)) sum_k (e_{k/n})#pi.
Density parametric_barycenter(const MetricMeasureSpace& space, const Plan& plan, Lambda lambda,
                              std::optional<std::size_t> grid = std::nullopt);

double energy(const MetricMeasureSpace& space, const Plan& plan, double q);

struct TestPlanReport {
    bool is_test_plan = false;
    double mass = 0.0;
    double compression = 0.0;
    double energy = 0.0;
};

TestPlanReport is_test_plan(const MetricMeasureSpace& space, const Plan& plan, double q);

/// b(v) m(v) = sum_gamma w mu_{f o gamma}(v);  div(v) = sum_gamma w (1[gamma_0 = v] - 1[gamma_1 = v]).
struct PlanDerivation {
    VertexFunction b;
    VertexFunction divergence;
};

PlanDerivation plan_derivation(const MetricMeasureSpace& space, const Plan& plan, std::span<const double> f);

struct DerivationBoundReport {
    bool holds = true;
    double max_ratio = 0.0;  // max of |b| / (Bar lip_a f) where the denominator is positive
    std::optional<Vertex> worst_vertex;
};

DerivationBoundReport derivation_norm_bound(const MetricMeasureSpace& space, const Plan& plan,
                                            std::span<const double> f);

}  // namespace modcalc
