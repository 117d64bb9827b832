#include "modcalc/barrier.hpp"

#include "modcalc/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace modcalc {

double SparseRow::dot(std::span<const double> x) const {
    double s = 0.0;
    for (const auto& [j, a] : terms) s += a * x[j];
    return s;
}

double SparseRow::sum() const {
    double s = 0.0;
    for (const auto& [j, a] : terms) s += a;
    return s;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct BarrierState {
    const BarrierProblem& problem;
    double t = 1.0;

    double objective(std::span<const double> x) const {
        double s = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) s += problem.cost[j] * std::pow(x[j], problem.power);
        return s;
    }

    bool has_upper(std::size_t j) const { return !problem.upper.empty() && std::isfinite(problem.upper[j]); }

    /// +inf outside the strict interior.
    double value(std::span<const double> x) const {
        double phi = t * objective(x);
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (!(x[j] > 0.0)) return kInf;
            phi -= std::log(x[j]);
            if (has_upper(j)) {
                double slack = problem.upper[j] - x[j];
                if (!(slack > 0.0)) return kInf;
                phi -= std::log(slack);
            }
        }
        for (std::size_t i = 0; i < problem.rows.size(); ++i) {
            double r = problem.rows[i].dot(x) - problem.rhs[i];
            if (!(r > 0.0)) return kInf;
            phi -= std::log(r);
        }
        return phi;
    }

    void derivatives(std::span<const double> x, Eigen::VectorXd& grad, Eigen::MatrixXd& hess) const {
        const std::size_t n = x.size();
        const double p = problem.power;
        grad.setZero(static_cast<Eigen::Index>(n));
        hess.setZero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t j = 0; j < n; ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            double c = problem.cost[j];
            grad(jj) += t * c * p * std::pow(x[j], p - 1.0) - 1.0 / x[j];
            hess(jj, jj) += 1.0 / (x[j] * x[j]);
            if (p != 1.0) hess(jj, jj) += t * c * p * (p - 1.0) * std::pow(x[j], p - 2.0);
            if (has_upper(j)) {
                double slack = problem.upper[j] - x[j];
                grad(jj) += 1.0 / slack;
                hess(jj, jj) += 1.0 / (slack * slack);
            }
        }
        for (std::size_t i = 0; i < problem.rows.size(); ++i) {
            const auto& row = problem.rows[i];
            double inv = 1.0 / (row.dot(x) - problem.rhs[i]);
            for (const auto& [j, a] : row.terms) {
                grad(static_cast<Eigen::Index>(j)) -= a * inv;
                for (const auto& [k, b] : row.terms)
                    hess(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) += a * b * inv * inv;
            }
        }
    }

    /// Largest step keeping every slack positive.
    double max_step(std::span<const double> x, const Eigen::VectorXd& dx) const {
        double alpha = kInf;
        for (std::size_t j = 0; j < x.size(); ++j) {
            double d = dx(static_cast<Eigen::Index>(j));
            if (d < 0.0) alpha = std::min(alpha, -x[j] / d);
            if (d > 0.0 && has_upper(j)) alpha = std::min(alpha, (problem.upper[j] - x[j]) / d);
        }
        for (std::size_t i = 0; i < problem.rows.size(); ++i) {
            double r = problem.rows[i].dot(x) - problem.rhs[i];
            double dr = 0.0;
            for (const auto& [j, a] : problem.rows[i].terms) dr += a * dx(static_cast<Eigen::Index>(j));
            if (dr < 0.0) alpha = std::min(alpha, -r / dr);
        }
        return alpha;
    }
};

}  // namespace

BarrierResult solve_barrier(const BarrierProblem& problem, std::vector<double> start, const BarrierOptions& options) {
    const std::size_t n = problem.cost.size();
    if (start.size() != n) throw ValidationError("start", "start point has the wrong dimension");
    if (problem.rhs.size() != problem.rows.size()) throw ValidationError("rhs", "one right-hand side per row");
    if (!(problem.power >= 1.0)) throw ValidationError("p", "objective power must be at least 1");

    BarrierState state{problem};
    std::size_t constraint_count = n + problem.rows.size();
    for (std::size_t j = 0; j < n; ++j)
        if (state.has_upper(j)) ++constraint_count;
    const double m = static_cast<double>(constraint_count);

    std::vector<double> x = std::move(start);
    if (!std::isfinite(state.value(x))) throw ValidationError("start", "start point is not strictly feasible");

    BarrierResult result;
    state.t = m / std::max(state.objective(x), 1e-12);
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
    std::vector<double> trial(n);

    while (result.newton_steps < options.max_newton_steps) {
        // Centering.
        double phi = state.value(x);
        while (result.newton_steps < options.max_newton_steps) {
            state.derivatives(x, grad, hess);
            Eigen::VectorXd dx = hess.ldlt().solve(-grad);
            double decrement = -grad.dot(dx);
            ++result.newton_steps;
            if (!std::isfinite(decrement) || decrement <= 0.0 || decrement * 0.5 <= 1e-10) break;

            double alpha = std::min(1.0, 0.99 * state.max_step(x, dx));
            bool accepted = false;
            for (int k = 0; k < 60 && alpha > 1e-16; ++k, alpha *= 0.5) {
                for (std::size_t j = 0; j < n; ++j) trial[j] = x[j] + alpha * dx(static_cast<Eigen::Index>(j));
                double next = state.value(trial);
                // Inside the quadratic region rounding in phi dominates the decrease.
                if (next <= phi + 0.25 * alpha * grad.dot(dx) || (decrement < 1e-3 && std::isfinite(next))) {
                    accepted = true;
                    phi = next;
                    x.swap(trial);
                    break;
                }
            }
            if (!accepted) break;
        }

        double objective = state.objective(x);
        result.gap_bound = m / state.t;
        if (result.gap_bound <= options.tol * std::max(objective, 1e-300)) {
            result.converged = true;
            break;
        }
        state.t *= options.growth;
    }

    result.objective = state.objective(x);
    result.row_duals.resize(problem.rows.size());
    for (std::size_t i = 0; i < problem.rows.size(); ++i)
        result.row_duals[i] = 1.0 / (state.t * (problem.rows[i].dot(x) - problem.rhs[i]));
    result.x = std::move(x);
    return result;
}

double aggregated_norm(std::span<const double> mass, double p, const std::vector<SparseRow>& rows,
                       std::span<const double> pi) {
    std::vector<double> aggregate(mass.size(), 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (const auto& [j, a] : rows[i].terms) aggregate[j] += pi[i] * a;
    if (p == 1.0) {
        double best = 0.0;
        for (std::size_t j = 0; j < mass.size(); ++j) best = std::max(best, aggregate[j] / mass[j]);
        return best;
    }
    const double q = p / (p - 1.0);
    double s = 0.0;
    for (std::size_t j = 0; j < mass.size(); ++j)
        if (aggregate[j] > 0.0) s += mass[j] * std::pow(aggregate[j] / mass[j], q);
    return std::pow(s, 1.0 / q);
}

CoveringSolution solve_covering(std::span<const double> mass, double p, const std::vector<SparseRow>& rows,
                                const BarrierOptions& options) {
    CoveringSolution out;
    out.x.assign(mass.size(), 0.0);
    out.weights.assign(rows.size(), 0.0);
    if (rows.empty()) {
        out.converged = true;
        return out;
    }

    // Only variables carried by some row enter the program; the rest are 0 at the optimum.
    std::vector<std::size_t> local(mass.size(), SIZE_MAX);
    std::vector<std::size_t> global;
    double min_row_sum = kInf;
    BarrierProblem problem;
    problem.power = p;
    problem.rows.reserve(rows.size());
    for (const auto& row : rows) {
        SparseRow compact;
        for (const auto& [j, a] : row.terms) {
            if (a <= 0.0) continue;
            if (local[j] == SIZE_MAX) {
                local[j] = global.size();
                global.push_back(j);
            }
            compact.terms.emplace_back(local[j], a);
        }
        min_row_sum = std::min(min_row_sum, compact.sum());
        problem.rows.push_back(std::move(compact));
    }
    if (!(min_row_sum > 0.0)) throw ValidationError("family", "a constraint row has no positive coefficient");
    problem.rhs.assign(rows.size(), 1.0);
    for (std::size_t j : global) problem.cost.push_back(mass[j]);

    BarrierOptions inner = options;
    inner.tol = options.tol * 0.25;
    auto solved = solve_barrier(problem, std::vector<double>(global.size(), 2.0 / min_row_sum), inner);
    out.iterations = solved.newton_steps;

    double scale = kInf;
    for (const auto& row : problem.rows) scale = std::min(scale, row.dot(solved.x));
    for (std::size_t k = 0; k < global.size(); ++k) out.x[global[k]] = solved.x[k] / scale;
    out.upper = 0.0;
    for (std::size_t j = 0; j < mass.size(); ++j)
        if (out.x[j] > 0.0) out.upper += mass[j] * std::pow(out.x[j], p);

    out.weights = solved.row_duals;
    double total = std::accumulate(out.weights.begin(), out.weights.end(), 0.0);
    std::vector<double> pi(out.weights.size());
    for (std::size_t i = 0; i < pi.size(); ++i) pi[i] = out.weights[i] / total;
    double norm = aggregated_norm(mass, p, rows, pi);
    out.lower = std::pow(norm, -p);
    out.gap = std::max(0.0, (out.upper - out.lower) / out.upper);
    out.converged = out.gap <= options.tol;
    return out;
}

}  // namespace modcalc
