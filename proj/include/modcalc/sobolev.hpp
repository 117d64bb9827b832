#pragma once

#include "modcalc/density.hpp"
#include "modcalc/families.hpp"
#include "modcalc/lipschitz.hpp"
#include "modcalc/modulus.hpp"
#include "modcalc/plans.hpp"
#include "modcalc/space.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace modcalc {

enum class Estimator { N, H, WCertificate };

const char* to_string(Estimator estimator);

struct GradientResult {
    Density rho;
    double p_norm = 0.0;  // (sum m rho^p)^(1/p)
    std::string family_label;
    double gap = 0.0;
    Estimator estimator = Estimator::N;
    int iterations = 0;
    bool converged = true;
};

/// Least p-energy density rho with |f(end) - f(start)| <= path_integral(rho)
/// on every curve of the family.
GradientResult n_gradient(const MetricMeasureSpace& space, std::span<const double> f, const CurveFamily& family,
                          double p, const SolverOptions& options = {});

/// Scalar map phi with a known Lipschitz constant.
struct ScalarMap {
    std::function<double(double)> apply;
    double lipschitz = 1.0;
};

struct CalculusInput {
    VertexFunction f;
    VertexFunction g;
    Density rho_f;
    Density rho_g;
    std::optional<Density> rho_f_alt;  // a second upper gradient of f, for the min rule
    ScalarMap phi{[](double x) { return x; }, 1.0};
};

struct RuleCheck {
    std::string rule;
    bool holds = true;
    double worst_violation = 0.0;
    std::optional<std::size_t> worst_curve;
    std::size_t curves_checked = 0;
};

struct CalculusReport {
    std::vector<RuleCheck> checks;

    bool all_hold() const;
    const RuleCheck& at(const std::string& rule) const;
};

/// Sum, chain, Leibniz, min and locality rules checked on every curve of the family.
/// The min rule takes, hop by hop, the smaller of the two trapezoid contributions.
CalculusReport ug_calculus(const MetricMeasureSpace& space, const CurveFamily& family, const CalculusInput& input);

struct HStep {
    double sigma = 0.0;
    VertexFunction f_n;
    Density slope;              // lip_a(f_n)
    double distance = 0.0;      // ||f_n - f||_p
    double slope_error = 0.0;   // ||lip_a(f_n) - rho_f||_p
    bool equals_f = false;      // f_n == f at every vertex
    bool slope_bound = false;   // lip_a(f_n)(v) <= max_u (rho_n(u) + rho_n(v)) / 2 over neighbours
};

struct HSequenceParams {
    std::size_t steps = 5;
    std::vector<double> sigmas;   // explicit slack sequence; default 2^-n for n = 1..steps
    std::optional<double> mesh;   // delta; defaults to the neighbour mesh of the space
};

/// Lipschitz approximations f_n = path_relax(f, rho_f + sigma_n, C = all vertices)
/// with f shifted by its minimum when negative and the cap M = max f - min(0, min f).
std::vector<HStep> h_gradient_sequence(const MetricMeasureSpace& space, std::span<const double> f,
                                       const Density& rho_f, double p, const HSequenceParams& params = {});

std::vector<HStep> h_gradient_sequence(const MetricMeasureSpace& space, std::span<const double> f, double p,
                                       const CurveFamily& family, const HSequenceParams& params = {},
                                       const SolverOptions& options = {});

struct WCertificate {
    double max_violation = 0.0;          // -inf when no plans are given
    std::vector<double> violations;      // one per plan
};

/// v(pi) = sum_gamma w (f(gamma_1) - f(gamma_0)) - sum_v Bar(pi)(v) g(v) m(v).
WCertificate w_certificate(const MetricMeasureSpace& space, std::span<const double> f, std::span<const double> g,
                           std::span<const Plan> plans);

struct CapacityResult {
    double value = 0.0;
    VertexFunction f;
    Density rho;
    double gap = 0.0;
    int iterations = 0;
    bool converged = true;
};

/// inf of sum m |f|^p + sum m rho^p over f >= 1 on E and rho a family upper gradient of f.
/// The truncated variant also imposes 0 <= f <= 1.
CapacityResult capacity(const MetricMeasureSpace& space, const VertexSet& set, const CurveFamily& family, double p,
                        bool truncated, const SolverOptions& options = {});

struct EquivalenceOptions {
    std::size_t max_hops = 3;
    SolverOptions solver;
    HSequenceParams h;
    unsigned threads = 1;
};

struct EquivalenceReport {
    double p = 2.0;
    std::size_t curves = 0;
    GradientResult n;
    std::vector<HStep> h_steps;
    double h_slope_norm = 0.0;    // terminal ||lip_a(f_n)||_p
    double h_slope_error = 0.0;   // terminal ||lip_a(f_n) - rho_N||_p
    double h_distance = 0.0;      // terminal ||f_n - f||_p
    bool h_equals_f = true;
    bool h_slope_bound = true;
    WCertificate w;
    std::size_t plans = 0;
    double max_plan_gap = 0.0;    // worst relative gap of the sub-family moduli
};

/// N-gradient over all simple paths with at most max_hops hops, the H
/// sequence built on it, and the W certificate over optimal plans of the
/// family and of its sub-families grouped by starting vertex.
EquivalenceReport equivalence_report(const MetricMeasureSpace& space, std::span<const double> f, double p,
                                     const EquivalenceOptions& options = {});

}  // namespace modcalc
