#include "modcalc/modulus.hpp"

#include "modcalc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace modcalc {

SparseRow admissibility_row(const MetricMeasureSpace& space, const DiscreteCurve& curve, Lambda lambda) {
    std::map<Vertex, double> coefficients;
    auto atoms = arc_length_atoms(space, curve);
    for (std::size_t i = 0; i < atoms.size(); ++i)
        if (atoms[i] > 0.0) coefficients[curve.vertices()[i]] += atoms[i];
    if (lambda == Lambda::One) {
        coefficients[curve.start()] += 1.0;
        coefficients[curve.finish()] += 1.0;
    }
    SparseRow row;
    for (const auto& [v, a] : coefficients) row.terms.emplace_back(v, a);
    return row;
}

AdmissibilityReport admissible_check(const MetricMeasureSpace& space, std::span<const double> rho,
                                     const CurveFamily& family, Lambda lambda) {
    require_size(space, rho, "rho");
    AdmissibilityReport report;
    for (std::size_t k = 0; k < family.size(); ++k) {
        const auto& curve = family[k];
        // With lambda = 0 the endpoint term vanishes even where rho is infinite.
        double lhs = path_integral(space, curve, rho);
        if (lambda == Lambda::One) lhs += rho[curve.start()] + rho[curve.finish()];
        double slack = lhs - 1.0;
        if (slack < report.min_slack) {
            report.min_slack = slack;
            report.worst_curve = k;
        }
    }
    report.admissible = report.min_slack >= -kAdmissibilitySlack;
    return report;
}

ModulusResult modulus(const MetricMeasureSpace& space, const CurveFamily& family, double p, Lambda lambda,
                      const SolverOptions& options) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw ValidationError("p", "p must lie in [1, inf)");
    if (!(options.tol > 0.0)) throw ValidationError("tol", "tol must be positive");

    ModulusResult result;
    result.p = p;
    result.lambda = lambda;
    result.dual_weights.assign(family.size(), 0.0);

    // One row per distinct vertex sequence; duplicates share the first row.
    std::map<std::vector<Vertex>, std::size_t> row_of;
    std::vector<std::size_t> first_curve;
    std::vector<SparseRow> rows;
    for (std::size_t k = 0; k < family.size(); ++k) {
        const auto& curve = family[k];
        curve.validate(space);
        if (row_of.contains(curve.vertices())) continue;
        SparseRow row = admissibility_row(space, curve, lambda);
        if (row.terms.empty()) {
            // A constant curve with lambda = 0: no density is admissible.
            result.value = kInfinity;
            result.lower_bound = kInfinity;
            return result;
        }
        row_of.emplace(curve.vertices(), rows.size());
        first_curve.push_back(k);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        result.rho = Density::zeros(space.size());
        return result;
    }

    auto solved = solve_covering(space.masses(), p, rows, options.barrier());
    result.value = solved.upper;
    result.lower_bound = solved.lower;
    result.rho = Density(std::move(solved.x));
    result.gap = solved.gap;
    result.iterations = solved.iterations;
    result.converged = solved.converged;
    for (std::size_t i = 0; i < rows.size(); ++i) result.dual_weights[first_curve[i]] = solved.weights[i];
    return result;
}

Plan optimal_plan(const MetricMeasureSpace& space, const ModulusResult& result, const CurveFamily& family) {
    if (result.infinite() || !(result.value > 0.0))
        throw ValidationError("modulus", "an optimal plan needs 0 < Mod < inf");
    if (result.dual_weights.size() != family.size())
        throw ValidationError("dual_weights", "result does not belong to this family");
    if (!result.converged) throw ValidationError("gap", "modulus did not reach its gap tolerance");
    double total = std::accumulate(result.dual_weights.begin(), result.dual_weights.end(), 0.0);
    if (!(total > 0.0)) throw ValidationError("dual_weights", "no dual weights available");
    std::vector<PlanAtom> atoms;
    for (std::size_t k = 0; k < family.size(); ++k) {
        double w = result.dual_weights[k] / total;
        if (w > 0.0) atoms.push_back({cs_reparam(space, family[k]), w});
    }
    return Plan(std::move(atoms));
}

ExceptionalReport is_exceptional(const MetricMeasureSpace& space, const VertexSet& set, double p,
                                 std::size_t max_hops, const SolverOptions& options) {
    ExceptionalReport report;
    if (set.empty() || max_hops == 0) return report;
    auto family = family_through(space, set, max_hops);
    auto result = modulus(space, family, p, Lambda::Zero, options);
    report.value = result.value;
    report.exceptional = result.value <= options.tol;
    return report;
}

}  // namespace modcalc
