#include "modcalc/plans.hpp"

#include "modcalc/errors.hpp"
#include "modcalc/lipschitz.hpp"

#include <algorithm>
#include <cmath>

namespace modcalc {

Plan::Plan(std::vector<PlanAtom> support) : support_(std::move(support)) {
    for (std::size_t k = 0; k < support_.size(); ++k) {
        const std::string field = "support[" + std::to_string(k) + "]";
        if (!std::isfinite(support_[k].weight) || !(support_[k].weight > 0.0))
            throw ValidationError(field + ".w", "plan weights must be positive and finite");
        if (!support_[k].curve.on_unit_interval())
            throw ValidationError(field + ".curve", "plan curves must be parametrized on [0,1]");
    }
}

double Plan::mass() const {
    double total = 0.0;
    for (const auto& atom : support_) total += atom.weight;
    return total;
}

bool Plan::is_probability() const { return std::abs(mass() - 1.0) <= 1e-12; }

Plan Plan::scaled(double factor) const {
    std::vector<PlanAtom> atoms = support_;
    for (auto& atom : atoms) atom.weight *= factor;
    return Plan(std::move(atoms));
}

Plan Plan::normalized() const {
    double total = mass();
    if (!(total > 0.0)) throw ValidationError("plan", "cannot normalize an empty plan");
    return scaled(1.0 / total);
}

Plan Plan::restricted(std::span<const std::size_t> indices) const {
    std::vector<PlanAtom> atoms;
    for (std::size_t k : indices) atoms.push_back(support_.at(k));
    return Plan(std::move(atoms)).normalized();
}

void Plan::validate(const MetricMeasureSpace& space) const {
    for (const auto& atom : support_) atom.curve.validate(space);
}

Barycenter barycenter(const MetricMeasureSpace& space, const Plan& plan, Lambda lambda) {
    std::vector<double> mass_density(space.size(), 0.0);
    for (const auto& [curve, w] : plan.support()) {
        auto atoms = arc_length_atoms(space, curve);
        for (std::size_t i = 0; i < atoms.size(); ++i) mass_density[curve.vertices()[i]] += w * atoms[i];
        if (lambda == Lambda::One) {
            mass_density[curve.start()] += w;
            mass_density[curve.finish()] += w;
        }
    }
    for (Vertex v = 0; v < space.size(); ++v) mass_density[v] /= space.mass(v);
    return {Density(std::move(mass_density)), lambda};
}

namespace {

double pushforward_ratio(const MetricMeasureSpace& space, const Plan& plan, double t, std::vector<double>& scratch) {
    std::fill(scratch.begin(), scratch.end(), 0.0);
    double best = 0.0;
    for (const auto& [curve, w] : plan.support()) {
        Vertex v = position_at(curve, t);
        scratch[v] += w;
        best = std::max(best, scratch[v] / space.mass(v));
    }
    return best;
}

}  // namespace

double compression(const MetricMeasureSpace& space, const Plan& plan) {
    std::vector<double> cuts{0.0, 1.0};
    for (const auto& atom : plan.support()) {
        const auto& times = atom.curve.times();
        for (std::size_t i = 0; i + 1 < times.size(); ++i) cuts.push_back(0.5 * (times[i] + times[i + 1]));
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<double> scratch(space.size());
    double best = 0.0;
    for (std::size_t k = 0; k < cuts.size(); ++k) {
        best = std::max(best, pushforward_ratio(space, plan, cuts[k], scratch));
        if (k + 1 < cuts.size())
            best = std::max(best, pushforward_ratio(space, plan, 0.5 * (cuts[k] + cuts[k + 1]), scratch));
    }
    return best;
}

double compression_on_grid(const MetricMeasureSpace& space, const Plan& plan, std::size_t n) {
    if (n == 0) throw ValidationError("grid", "grid size must be positive");
    std::vector<double> scratch(space.size());
    double best = 0.0;
    for (std::size_t k = 0; k <= n; ++k)
        best = std::max(best, pushforward_ratio(space, plan, static_cast<double>(k) / static_cast<double>(n), scratch));
    return best;
}

Density parametric_barycenter(const MetricMeasureSpace& space, const Plan& plan, Lambda lambda,
                              std::optional<std::size_t> grid) {
    std::vector<double> mass_density(space.size(), 0.0);
    for (const auto& [curve, w] : plan.support()) {
        if (lambda == Lambda::One) {
            mass_density[curve.start()] += w;
            mass_density[curve.finish()] += w;
        }
        if (grid) {
            const double n = static_cast<double>(*grid);
            for (std::size_t k = 0; k <= *grid; ++k)
                mass_density[position_at(curve, static_cast<double>(k) / n)] += w / (n + 1.0);
            continue;
        }
        if (curve.is_constant()) {
            mass_density[curve.start()] += w;
            continue;
        }
        const auto& t = curve.times();
        for (std::size_t i = 0; i + 1 < t.size(); ++i) {
            double half = 0.5 * (t[i + 1] - t[i]);
            mass_density[curve.vertices()[i]] += w * half;
            mass_density[curve.vertices()[i + 1]] += w * half;
        }
    }
    for (Vertex v = 0; v < space.size(); ++v) mass_density[v] /= space.mass(v);
    return Density(std::move(mass_density));
}

double energy(const MetricMeasureSpace& space, const Plan& plan, double q) {
    if (!(q > 1.0)) throw ValidationError("q", "plan energy needs q in (1, inf]");
    double total = 0.0;
    for (const auto& [curve, w] : plan.support()) {
        double e = q_energy(space, curve, q);
        total = std::isinf(q) ? std::max(total, e) : total + w * e;
    }
    return total;
}

TestPlanReport is_test_plan(const MetricMeasureSpace& space, const Plan& plan, double q) {
    TestPlanReport report;
    report.mass = plan.mass();
    report.compression = compression(space, plan);
    report.energy = energy(space, plan, q);
    report.is_test_plan = plan.is_probability() && std::isfinite(report.compression) && std::isfinite(report.energy);
    return report;
}

PlanDerivation plan_derivation(const MetricMeasureSpace& space, const Plan& plan, std::span<const double> f) {
    require_size(space, f, "f");
    PlanDerivation out;
    out.b.assign(space.size(), 0.0);
    out.divergence.assign(space.size(), 0.0);
    for (const auto& [curve, w] : plan.support()) {
        const auto& p = curve.vertices();
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
            double half_step = 0.5 * (f[p[i + 1]] - f[p[i]]);
            out.b[p[i]] += w * half_step;
            out.b[p[i + 1]] += w * half_step;
        }
        out.divergence[curve.start()] += w;
        out.divergence[curve.finish()] -= w;
    }
    for (Vertex v = 0; v < space.size(); ++v) out.b[v] /= space.mass(v);
    return out;
}

DerivationBoundReport derivation_norm_bound(const MetricMeasureSpace& space, const Plan& plan,
                                            std::span<const double> f) {
    auto derivation = plan_derivation(space, plan, f);
    auto bar = barycenter(space, plan, Lambda::Zero);
    auto slope = asymptotic_slope(space, f);
    DerivationBoundReport report;
    for (Vertex v = 0; v < space.size(); ++v) {
        double bound = bar.density[v] * slope[v];
        double magnitude = std::abs(derivation.b[v]);
        if (magnitude > bound + 1e-12) report.holds = false;
        if (bound > 0.0 && magnitude / bound > report.max_ratio) {
            report.max_ratio = magnitude / bound;
            report.worst_vertex = v;
        }
    }
    return report;
}

}  // namespace modcalc
