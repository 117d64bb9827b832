#include "modcalc/curve.hpp"

#include "modcalc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace modcalc {

DiscreteCurve::DiscreteCurve(std::vector<double> times, std::vector<Vertex> vertices)
    : times_(std::move(times)), vertices_(std::move(vertices)) {
    if (vertices_.empty()) throw ValidationError("curve.vertices", "a curve needs at least one breakpoint");
    if (times_.size() != vertices_.size())
        throw ValidationError("curve.times", "times and vertices must have equal length");
    for (double t : times_)
        if (!std::isfinite(t)) throw ValidationError("curve.times", "breakpoint times must be finite");
    for (std::size_t i = 0; i + 1 < times_.size(); ++i) {
        if (!(times_[i] < times_[i + 1]))
            throw ValidationError("curve.times", "breakpoint times must be strictly increasing");
        if (vertices_[i] == vertices_[i + 1])
            throw ValidationError("curve.vertices", "zero-length hops are not allowed");
    }
}

DiscreteCurve DiscreteCurve::through(const MetricMeasureSpace& space, std::vector<Vertex> vertices) {
    if (vertices.size() == 1) return constant(vertices.front());
    std::vector<double> times(vertices.size());
    std::iota(times.begin(), times.end(), 0.0);
    return cs_reparam(space, DiscreteCurve(std::move(times), std::move(vertices)));
}

bool DiscreteCurve::on_unit_interval() const {
    if (is_constant()) return true;
    return std::abs(times_.front()) <= 1e-12 && std::abs(times_.back() - 1.0) <= 1e-12;
}

void DiscreteCurve::validate(const MetricMeasureSpace& space) const {
    for (Vertex v : vertices_)
        if (v >= space.size()) throw ValidationError("curve.vertices", "unknown vertex index " + std::to_string(v));
    for (std::size_t i = 0; i + 1 < vertices_.size(); ++i)
        if (!space.adjacent(vertices_[i], vertices_[i + 1]))
            throw ValidationError("curve.vertices", "vertices " + space.id(vertices_[i]) + " and " +
                                                        space.id(vertices_[i + 1]) + " are not adjacent");
}

DiscreteCurve DiscreteCurve::reversed() const {
    std::vector<double> times(times_.size());
    std::vector<Vertex> vertices(vertices_.rbegin(), vertices_.rend());
    const double a = times_.front(), b = times_.back();
    for (std::size_t i = 0; i < times_.size(); ++i) times[i] = a + b - times_[times_.size() - 1 - i];
    times.front() = a;
    times.back() = b;
    return DiscreteCurve(std::move(times), std::move(vertices));
}

double AtomicMeasureOnCurve::total() const {
    return std::accumulate(atoms.begin(), atoms.end(), 0.0);
}

double AtomicMeasureOnCurve::total_variation() const {
    double s = 0.0;
    for (double a : atoms) s += std::abs(a);
    return s;
}

std::vector<double> hop_lengths(const MetricMeasureSpace& space, const DiscreteCurve& curve) {
    const auto& p = curve.vertices();
    std::vector<double> out(curve.hops());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = space.distance(p[i], p[i + 1]);
    return out;
}

std::vector<double> speeds(const MetricMeasureSpace& space, const DiscreteCurve& curve) {
    auto out = hop_lengths(space, curve);
    const auto& t = curve.times();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] /= (t[i + 1] - t[i]);
    return out;
}

double length(const MetricMeasureSpace& space, const DiscreteCurve& curve) {
    auto hops = hop_lengths(space, curve);
    return std::accumulate(hops.begin(), hops.end(), 0.0);
}

DiscreteCurve cs_reparam(const MetricMeasureSpace& space, const DiscreteCurve& curve) {
    if (curve.is_constant()) return DiscreteCurve::constant(curve.start());
    auto hops = hop_lengths(space, curve);
    double total = std::accumulate(hops.begin(), hops.end(), 0.0);
    if (!std::isfinite(total)) throw ValidationError("curve", "curve joins disconnected vertices");
    std::vector<double> times(curve.vertices().size());
    double running = 0.0;
    times[0] = 0.0;
    for (std::size_t i = 0; i < hops.size(); ++i) {
        running += hops[i];
        times[i + 1] = running / total;
    }
    times.back() = 1.0;
    return DiscreteCurve(std::move(times), curve.vertices());
}

std::vector<double> arc_length_atoms(const MetricMeasureSpace& space, const DiscreteCurve& curve) {
    auto hops = hop_lengths(space, curve);
    std::vector<double> atoms(curve.vertices().size(), 0.0);
    for (std::size_t i = 0; i < hops.size(); ++i) {
        atoms[i] += 0.5 * hops[i];
        atoms[i + 1] += 0.5 * hops[i];
    }
    return atoms;
}

double path_integral(const MetricMeasureSpace& space, const DiscreteCurve& curve, std::span<const double> rho) {
    require_size(space, rho, "rho");
    const auto& p = curve.vertices();
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
        total += 0.5 * (rho[p[i]] + rho[p[i + 1]]) * space.distance(p[i], p[i + 1]);
    return total;
}

VariationMeasures variation_measures(const MetricMeasureSpace& space, const DiscreteCurve& curve,
                                     std::span<const double> f) {
    require_size(space, f, "f");
    const auto& p = curve.vertices();
    VariationMeasures out;
    out.arc_length.atoms = arc_length_atoms(space, curve);
    out.signed_variation.atoms.assign(p.size(), 0.0);
    out.total_variation.atoms.assign(p.size(), 0.0);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        double step = f[p[i + 1]] - f[p[i]];
        out.signed_variation.atoms[i] += 0.5 * step;
        out.signed_variation.atoms[i + 1] += 0.5 * step;
        out.total_variation.atoms[i] += 0.5 * std::abs(step);
        out.total_variation.atoms[i + 1] += 0.5 * std::abs(step);
    }
    return out;
}

double stieltjes(const DiscreteCurve& curve, std::span<const double> a, std::span<const double> f,
                 StieltjesRule rule) {
    const auto& p = curve.vertices();
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        double weight = rule == StieltjesRule::Left ? a[p[i]] : a[p[i + 1]];
        total += weight * (f[p[i + 1]] - f[p[i]]);
    }
    return total;
}

IbpTerms ibp_identity(const DiscreteCurve& curve, std::span<const double> f1, std::span<const double> f2) {
    IbpTerms out;
    out.forward = stieltjes(curve, f1, f2, StieltjesRule::Left);
    out.backward = stieltjes(curve, f2, f1, StieltjesRule::Right);
    out.boundary = f1[curve.finish()] * f2[curve.finish()] - f1[curve.start()] * f2[curve.start()];
    return out;
}

namespace {

std::size_t breakpoint_index(const DiscreteCurve& curve, double t, const char* field) {
    const auto& times = curve.times();
    for (std::size_t i = 0; i < times.size(); ++i)
        if (std::abs(times[i] - t) <= 1e-12 * std::max(1.0, std::abs(t))) return i;
    throw ValidationError(field, "restriction times must be breakpoint times");
}

}  // namespace

DiscreteCurve restrict(const DiscreteCurve& curve, double s, double t) {
    if (!(s < t)) throw ValidationError("s", "restriction needs s < t");
    std::size_t i = breakpoint_index(curve, s, "s");
    std::size_t j = breakpoint_index(curve, t, "t");
    const auto& times = curve.times();
    std::vector<double> sub_times;
    std::vector<Vertex> sub_vertices;
    for (std::size_t k = i; k <= j; ++k) {
        sub_times.push_back((times[k] - times[i]) / (times[j] - times[i]));
        sub_vertices.push_back(curve.vertices()[k]);
    }
    sub_times.front() = 0.0;
    sub_times.back() = 1.0;
    return DiscreteCurve(std::move(sub_times), std::move(sub_vertices));
}

double q_energy(const MetricMeasureSpace& space, const DiscreteCurve& curve, double q) {
    if (!(q >= 1.0)) throw ValidationError("q", "energy exponent must be at least 1");
    if (!curve.on_unit_interval()) throw ValidationError("curve.times", "q-energy needs a curve on [0,1]");
    if (curve.is_constant()) return 0.0;
    auto v = speeds(space, curve);
    if (std::isinf(q)) return *std::max_element(v.begin(), v.end());
    const auto& t = curve.times();
    double total = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) total += (t[i + 1] - t[i]) * std::pow(v[i], q);
    return total;
}

Vertex position_at(const DiscreteCurve& curve, double t) {
    const auto& times = curve.times();
    const auto& p = curve.vertices();
    if (curve.is_constant() || t <= times.front()) return p.front();
    if (t >= times.back()) return p.back();
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t i = static_cast<std::size_t>(it - times.begin()) - 1;
    double mid = 0.5 * (times[i] + times[i + 1]);
    return t < mid ? p[i] : p[i + 1];
}

}  // namespace modcalc
