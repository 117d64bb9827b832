#include "modcalc/sobolev.hpp"

#include "modcalc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

namespace modcalc {

const char* to_string(Estimator estimator) {
    switch (estimator) {
        case Estimator::N: return "N";
        case Estimator::H: return "H";
        case Estimator::WCertificate: return "W-certificate";
    }
    return "?";
}

GradientResult n_gradient(const MetricMeasureSpace& space, std::span<const double> f, const CurveFamily& family,
                          double p, const SolverOptions& options) {
    require_size(space, f, "f");
    if (!(p >= 1.0) || !std::isfinite(p)) throw ValidationError("p", "p must lie in [1, inf)");
    for (double x : f)
        if (!std::isfinite(x)) throw ValidationError("f", "f must be finite");

    std::vector<SparseRow> rows;
    for (const auto& curve : family) {
        curve.validate(space);
        double increment = std::abs(f[curve.finish()] - f[curve.start()]);
        if (increment == 0.0) continue;
        SparseRow row = admissibility_row(space, curve, Lambda::Zero);
        for (auto& term : row.terms) term.second /= increment;
        rows.push_back(std::move(row));
    }

    GradientResult out;
    out.family_label = family.label();
    auto solved = solve_covering(space.masses(), p, rows, options.barrier());
    out.rho = Density(std::move(solved.x));
    out.p_norm = std::pow(solved.upper, 1.0 / p);
    out.gap = solved.gap;
    out.iterations = solved.iterations;
    out.converged = solved.converged;
    return out;
}

bool CalculusReport::all_hold() const {
    return std::all_of(checks.begin(), checks.end(), [](const RuleCheck& c) { return c.holds; });
}

const RuleCheck& CalculusReport::at(const std::string& rule) const {
    for (const auto& c : checks)
        if (c.rule == rule) return c;
    throw std::out_of_range("no calculus check named " + rule);
}

namespace {

double sup_norm(std::span<const double> f) {
    double best = 0.0;
    for (double x : f) best = std::max(best, std::abs(x));
    return best;
}

/// Records |increment| - bound for one curve.
void record(RuleCheck& check, std::size_t k, double increment, double bound) {
    double violation = std::abs(increment) - bound;
    if (check.curves_checked == 0 || violation > check.worst_violation) {
        check.worst_violation = violation;
        check.worst_curve = k;
    }
    ++check.curves_checked;
    if (violation > 1e-12 * (1.0 + std::abs(bound))) check.holds = false;
}

}  // namespace

CalculusReport ug_calculus(const MetricMeasureSpace& space, const CurveFamily& family, const CalculusInput& input) {
    const auto& f = input.f;
    const auto& g = input.g;
    require_size(space, f, "f");
    require_size(space, g, "g");
    if (!is_upper_gradient(space, f, input.rho_f.values(), family).holds)
        throw ValidationError("rho_f", "rho_f is not an upper gradient of f on the family");
    if (!is_upper_gradient(space, g, input.rho_g.values(), family).holds)
        throw ValidationError("rho_g", "rho_g is not an upper gradient of g on the family");
    if (input.rho_f_alt && !is_upper_gradient(space, f, input.rho_f_alt->values(), family).holds)
        throw ValidationError("rho_f_alt", "rho_f_alt is not an upper gradient of f on the family");

    const std::size_t n = space.size();
    VertexFunction sum(n), composed(n), product(n), difference(n);
    std::vector<double> rho_sum(n), rho_chain(n), rho_leibniz(n);
    const double f_sup = sup_norm(f), g_sup = sup_norm(g);
    for (Vertex v = 0; v < n; ++v) {
        sum[v] = f[v] + g[v];
        composed[v] = input.phi.apply(f[v]);
        product[v] = f[v] * g[v];
        difference[v] = f[v] - g[v];
        rho_sum[v] = input.rho_f[v] + input.rho_g[v];
        rho_chain[v] = input.phi.lipschitz * input.rho_f[v];
        rho_leibniz[v] = f_sup * input.rho_g[v] + g_sup * input.rho_f[v];
    }

    auto named = [](const char* rule) {
        RuleCheck check;
        check.rule = rule;
        return check;
    };
    RuleCheck sum_check = named("sum"), chain_check = named("chain"), leibniz_check = named("leibniz"),
              min_check = named("min"), locality_check = named("locality");
    for (std::size_t k = 0; k < family.size(); ++k) {
        const auto& curve = family[k];
        const Vertex a = curve.start(), b = curve.finish();
        record(sum_check, k, sum[b] - sum[a], path_integral(space, curve, rho_sum));
        record(chain_check, k, composed[b] - composed[a], path_integral(space, curve, rho_chain));
        record(leibniz_check, k, product[b] - product[a], path_integral(space, curve, rho_leibniz));

        if (input.rho_f_alt) {
            const auto& p = curve.vertices();
            double bound = 0.0;
            for (std::size_t i = 0; i + 1 < p.size(); ++i) {
                double d = space.distance(p[i], p[i + 1]);
                double first = 0.5 * (input.rho_f[p[i]] + input.rho_f[p[i + 1]]) * d;
                double second = 0.5 * ((*input.rho_f_alt)[p[i]] + (*input.rho_f_alt)[p[i + 1]]) * d;
                bound += std::min(first, second);
            }
            record(min_check, k, f[b] - f[a], bound);
        }

        const auto& p = curve.vertices();
        if (std::all_of(p.begin(), p.end(), [&](Vertex v) { return f[v] == g[v]; }))
            record(locality_check, k, difference[b] - difference[a], 0.0);
    }

    CalculusReport report;
    report.checks = {sum_check, chain_check, leibniz_check};
    if (input.rho_f_alt) report.checks.push_back(min_check);
    report.checks.push_back(locality_check);
    return report;
}

std::vector<HStep> h_gradient_sequence(const MetricMeasureSpace& space, std::span<const double> f,
                                       const Density& rho_f, double p, const HSequenceParams& params) {
    require_size(space, f, "f");
    require_size(space, rho_f.values(), "rho_f");
    std::vector<double> sigmas = params.sigmas;
    if (sigmas.empty())
        for (std::size_t k = 1; k <= params.steps; ++k) sigmas.push_back(std::ldexp(1.0, -static_cast<int>(k)));

    // Nonnegative f is relaxed as is; otherwise shift by the minimum.
    const double low = std::min(0.0, *std::min_element(f.begin(), f.end()));
    const double high = *std::max_element(f.begin(), f.end());
    VertexFunction shifted(f.begin(), f.end());
    for (double& x : shifted) x -= low;
    const double cap = high - low;
    double mesh = params.mesh.value_or(space.neighbor_mesh());
    if (!(mesh > 0.0)) mesh = 1.0;

    std::vector<HStep> steps;
    for (double sigma : sigmas) {
        HStep step;
        step.sigma = sigma;
        std::vector<double> relaxed_density(rho_f.values().begin(), rho_f.values().end());
        for (double& x : relaxed_density) x += sigma;
        if (cap > 0.0) {
            step.f_n = path_relax(space, shifted, relaxed_density, {space.all(), mesh, cap});
            if (low < 0.0)
                for (double& x : step.f_n) x += low;
        } else {
            step.f_n.assign(f.begin(), f.end());
        }
        step.slope = asymptotic_slope(space, step.f_n);

        VertexFunction diff(space.size()), slope_diff(space.size());
        step.equals_f = true;
        for (Vertex v = 0; v < space.size(); ++v) {
            diff[v] = step.f_n[v] - f[v];
            slope_diff[v] = step.slope[v] - rho_f[v];
            if (step.f_n[v] != f[v]) step.equals_f = false;
        }
        step.distance = lp_norm(space, diff, p);
        step.slope_error = lp_norm(space, slope_diff, p);

        step.slope_bound = true;
        for (Vertex v = 0; v < space.size(); ++v) {
            double bound = 0.0;
            for (const auto& nb : space.neighbors(v))
                bound = std::max(bound, 0.5 * (relaxed_density[v] + relaxed_density[nb.vertex]));
            if (step.slope[v] > bound * (1.0 + 1e-12) + 1e-15) step.slope_bound = false;
        }
        steps.push_back(std::move(step));
    }
    return steps;
}

std::vector<HStep> h_gradient_sequence(const MetricMeasureSpace& space, std::span<const double> f, double p,
                                       const CurveFamily& family, const HSequenceParams& params,
                                       const SolverOptions& options) {
    auto gradient = n_gradient(space, f, family, p, options);
    return h_gradient_sequence(space, f, gradient.rho, p, params);
}

WCertificate w_certificate(const MetricMeasureSpace& space, std::span<const double> f, std::span<const double> g,
                           std::span<const Plan> plans) {
    require_size(space, f, "f");
    require_size(space, g, "g");
    WCertificate out;
    out.max_violation = -kInfinity;
    for (const auto& plan : plans) {
        double increments = 0.0;
        for (const auto& [curve, w] : plan.support()) increments += w * (f[curve.finish()] - f[curve.start()]);
        auto bar = barycenter(space, plan, Lambda::Zero);
        double pairing = 0.0;
        for (Vertex v = 0; v < space.size(); ++v)
            if (bar.density[v] > 0.0) pairing += bar.density[v] * g[v] * space.mass(v);
        double violation = increments - pairing;
        out.violations.push_back(violation);
        out.max_violation = std::max(out.max_violation, violation);
    }
    return out;
}

CapacityResult capacity(const MetricMeasureSpace& space, const VertexSet& set, const CurveFamily& family, double p,
                        bool truncated, const SolverOptions& options) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw ValidationError("p", "p must lie in [1, inf)");
    for (Vertex v : set)
        if (v >= space.size()) throw ValidationError("E", "unknown vertex index " + std::to_string(v));
    const std::size_t n = space.size();
    CapacityResult out;
    out.f.assign(n, 0.0);
    out.rho = Density::zeros(n);
    if (set.empty()) return out;

    std::vector<const DiscreteCurve*> curves;
    double shortest = kInfinity;
    for (const auto& curve : family) {
        curve.validate(space);
        if (curve.start() == curve.finish()) continue;  // no increment to control
        curves.push_back(&curve);
        shortest = std::min(shortest, length(space, curve));
    }

    // Variable layout. Untruncated: f = f_plus - f_minus, both >= 0, then rho.
    // Truncated: f on the vertices outside E (0 <= f <= 1), then rho; f = 1 on E.
    BarrierProblem problem;
    problem.power = p;
    std::vector<std::size_t> f_var(n, SIZE_MAX);
    std::size_t rho_base = 0;
    std::vector<double> start;
    if (truncated) {
        for (Vertex v = 0; v < n; ++v)
            if (!set.contains(v)) {
                f_var[v] = problem.cost.size();
                problem.cost.push_back(space.mass(v));
                problem.upper.push_back(1.0);
                start.push_back(0.5);
            }
        rho_base = problem.cost.size();
    } else {
        for (Vertex v = 0; v < n; ++v) {
            problem.cost.push_back(space.mass(v));
            start.push_back(3.0);
        }
        for (Vertex v = 0; v < n; ++v) {
            problem.cost.push_back(space.mass(v));
            start.push_back(1.0);
        }
        rho_base = 2 * n;
    }
    const double rho_start = std::isfinite(shortest) ? 1.0 / shortest : 1.0;
    for (Vertex v = 0; v < n; ++v) {
        problem.cost.push_back(space.mass(v));
        if (truncated) problem.upper.push_back(kInfinity);
        start.push_back(rho_start);
    }

    if (!truncated)
        for (Vertex v : set) {
            problem.rows.push_back({{{v, 1.0}, {n + v, -1.0}}});
            problem.rhs.push_back(1.0);
        }

    // Adds sign * f(v) to the row, moving fixed values to the right-hand side.
    auto add_f = [&](SparseRow& row, double& rhs, Vertex v, double sign) {
        if (truncated) {
            if (f_var[v] == SIZE_MAX)
                rhs -= sign;
            else
                row.terms.emplace_back(f_var[v], sign);
        } else {
            row.terms.emplace_back(v, sign);
            row.terms.emplace_back(n + v, -sign);
        }
    };
    for (const DiscreteCurve* curve : curves) {
        if (truncated && set.contains(curve->start()) && set.contains(curve->finish())) continue;
        SparseRow integral = admissibility_row(space, *curve, Lambda::Zero);
        for (double sign : {1.0, -1.0}) {
            SparseRow row;
            double rhs = 0.0;
            for (const auto& [v, a] : integral.terms) row.terms.emplace_back(rho_base + v, a);
            add_f(row, rhs, curve->finish(), -sign);
            add_f(row, rhs, curve->start(), sign);
            problem.rows.push_back(std::move(row));
            problem.rhs.push_back(rhs);
        }
    }
    if (!truncated) problem.upper.clear();

    BarrierOptions barrier = options.barrier();
    barrier.tol = options.tol * 0.5;
    auto solved = solve_barrier(problem, std::move(start), barrier);
    out.iterations = solved.newton_steps;

    std::vector<double> rho(n);
    for (Vertex v = 0; v < n; ++v) {
        rho[v] = solved.x[rho_base + v];
        if (truncated)
            out.f[v] = f_var[v] == SIZE_MAX ? 1.0 : solved.x[f_var[v]];
        else
            out.f[v] = solved.x[v] - solved.x[n + v];
    }
    out.rho = Density(std::move(rho));
    out.value = lp_energy(space, out.f, p) + lp_energy(space, out.rho.values(), p);
    out.gap = solved.objective > 0.0 ? solved.gap_bound / solved.objective : 0.0;
    out.converged = solved.converged;
    return out;
}

namespace {

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += threads) fn(i);
        });
}

}  // namespace

EquivalenceReport equivalence_report(const MetricMeasureSpace& space, std::span<const double> f, double p,
                                     const EquivalenceOptions& options) {
    require_size(space, f, "f");
    EquivalenceReport report;
    report.p = p;
    auto family = all_walks(space, options.max_hops, true);
    report.curves = family.size();

    report.n = n_gradient(space, f, family, p, options.solver);
    report.h_steps = h_gradient_sequence(space, f, report.n.rho, p, options.h);
    if (!report.h_steps.empty()) {
        const auto& last = report.h_steps.back();
        report.h_slope_norm = lp_norm(space, last.slope.values(), p);
        report.h_slope_error = last.slope_error;
        report.h_distance = last.distance;
    }
    for (const auto& step : report.h_steps) {
        report.h_equals_f = report.h_equals_f && step.equals_f;
        report.h_slope_bound = report.h_slope_bound && step.slope_bound;
    }

    // Sub-families: the whole family and the curves leaving each vertex.
    std::vector<CurveFamily> subfamilies{family};
    std::map<Vertex, std::vector<DiscreteCurve>> by_start;
    for (const auto& curve : family) by_start[curve.start()].push_back(curve);
    for (auto& [v, curves] : by_start) subfamilies.emplace_back(std::move(curves), "from:" + space.id(v));

    std::vector<std::optional<Plan>> plans(subfamilies.size());
    std::vector<double> gaps(subfamilies.size(), 0.0);
    parallel_for(subfamilies.size(), options.threads, [&](std::size_t i) {
        auto result = modulus(space, subfamilies[i], p, Lambda::Zero, options.solver);
        gaps[i] = result.gap;
        if (!result.infinite() && result.value > 0.0 && result.converged)
            plans[i] = optimal_plan(space, result, subfamilies[i]);
    });
    std::vector<Plan> certified;
    for (std::size_t i = 0; i < plans.size(); ++i) {
        report.max_plan_gap = std::max(report.max_plan_gap, gaps[i]);
        if (plans[i]) certified.push_back(std::move(*plans[i]));
    }
    report.plans = certified.size();
    report.w = w_certificate(space, f, report.n.rho.values(), certified);
    return report;
}

}  // namespace modcalc
