#pragma once

#include "modcalc/barrier.hpp"
#include "modcalc/density.hpp"
#include "modcalc/families.hpp"
#include "modcalc/plans.hpp"
#include "modcalc/space.hpp"

#include <optional>
#include <span>
#include <vector>

namespace modcalc {

inline constexpr double kAdmissibilitySlack = 1e-9;

struct SolverOptions {
    double tol = 1e-8;  // relative primal-dual gap
    int max_newton_steps = 4000;

    BarrierOptions barrier() const {
        BarrierOptions b;
        b.tol = tol;
        b.max_newton_steps = max_newton_steps;
        return b;
    }
};

/// Coefficients of the admissibility constraint of one curve:
/// lambda (rho(start) + rho(end)) + path_integral(rho).
SparseRow admissibility_row(const MetricMeasureSpace& space, const DiscreteCurve& curve, Lambda lambda);

struct AdmissibilityReport {
    bool admissible = true;
    double min_slack = kInfinity;  // min over curves of (lhs - 1); +inf for an empty family
    std::optional<std::size_t> worst_curve;
};

AdmissibilityReport admissible_check(const MetricMeasureSpace& space, std::span<const double> rho,
                                     const CurveFamily& family, Lambda lambda);

struct ModulusResult {
    double value = 0.0;  // +inf when no density is admissible
    Density rho;         // empty when value is +inf
    std::vector<double> dual_weights;  // one per curve of the input family
    double gap = 0.0;
    double lower_bound = 0.0;
    double p = 2.0;
    Lambda lambda = Lambda::Zero;
    int iterations = 0;
    bool converged = true;

    bool infinite() const { return value == kInfinity; }
};

ModulusResult modulus(const MetricMeasureSpace& space, const CurveFamily& family, double p, Lambda lambda,
                      const SolverOptions& options = {});

/// Probability plan built from the normalized dual weights.
Plan optimal_plan(const MetricMeasureSpace& space, const ModulusResult& result, const CurveFamily& family);

struct ExceptionalReport {
    bool exceptional = true;
    double value = 0.0;
};

ExceptionalReport is_exceptional(const MetricMeasureSpace& space, const VertexSet& set, double p,
                                 std::size_t max_hops, const SolverOptions& options = {});

}  // namespace modcalc
