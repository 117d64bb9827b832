#pragma once

#include "modcalc/space.hpp"

#include <span>
#include <vector>

namespace modcalc {

/// Real-valued function on the vertices, indexed by vertex.
using VertexFunction = std::vector<double>;

/// Nonnegative extended-real vertex function (+inf allowed).
class Density {
public:
    Density() = default;
    explicit Density(std::vector<double> values);
    static Density zeros(std::size_t n) { return Density(std::vector<double>(n, 0.0)); }
    static Density constant(std::size_t n, double value) { return Density(std::vector<double>(n, value)); }

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](Vertex v) const { return values_[v]; }
    std::span<const double> values() const noexcept { return values_; }
    const std::vector<double>& vector() const noexcept { return values_; }

private:
    std::vector<double> values_;
};

/// (sum_v m_v |g_v|^p)^(1/p); the max of |g| for p = inf.
double lp_norm(const MetricMeasureSpace& space, std::span<const double> g, double p);

/// sum_v m_v |g_v|^p.
double lp_energy(const MetricMeasureSpace& space, std::span<const double> g, double p);

/// Conjugate exponent p/(p-1); inf for p = 1.
double conjugate_exponent(double p);

void require_size(const MetricMeasureSpace& space, std::span<const double> values, const char* field);

}  // namespace modcalc
