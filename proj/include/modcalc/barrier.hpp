#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace modcalc {

struct SparseRow {
    std::vector<std::pair<std::size_t, double>> terms;

    double dot(std::span<const double> x) const;
    double sum() const;
};

/// minimize sum_j cost_j x_j^power  subject to  rows x >= rhs,  0 <= x <= upper.
struct BarrierProblem {
    std::vector<double> cost;
    double power = 2.0;
    std::vector<double> upper;  // empty, or one bound per variable (+inf allowed)
    std::vector<SparseRow> rows;
    std::vector<double> rhs;
};

struct BarrierOptions {
    double tol = 1e-9;        // target relative duality gap
    double growth = 12.0;     // barrier parameter multiplier per outer step
    int max_newton_steps = 4000;
};

struct BarrierResult {
    std::vector<double> x;
    std::vector<double> row_duals;  // multipliers of the rows on the central path
    double objective = 0.0;
    double gap_bound = 0.0;  // (number of constraints) / t at exit
    int newton_steps = 0;
    bool converged = false;
};

/// Primal log-barrier method with damped Newton centering. `start` must be
/// strictly feasible.
BarrierResult solve_barrier(const BarrierProblem& problem, std::vector<double> start, const BarrierOptions& options);

/// Result of  minimize sum_j mass_j x_j^p  subject to  rows x >= 1, x >= 0.
struct CoveringSolution {
    std::vector<double> x;        // admissible: min over rows of rows.x == 1
    std::vector<double> weights;  // nonnegative row multipliers
    double upper = 0.0;           // objective at x
    double lower = 0.0;           // certified lower bound from the multipliers
    double gap = 0.0;             // (upper - lower) / upper
    int iterations = 0;
    bool converged = false;
};

/// Every row must have a positive coefficient sum. With p = 1 the bound
/// is the LP dual bound; for p > 1 it is the Hoelder bound
/// ||A^T pi / mass||_q^(-p) of the normalized multipliers pi.
CoveringSolution solve_covering(std::span<const double> mass, double p, const std::vector<SparseRow>& rows,
                                const BarrierOptions& options);

/// ||(A^T pi) / mass||_{L^q(mass)} for a plan-like weight vector pi.
double aggregated_norm(std::span<const double> mass, double p, const std::vector<SparseRow>& rows,
                       std::span<const double> pi);

}  // namespace modcalc
