#include <doctest.h>

#include "modcalc/errors.hpp"
#include "modcalc/modulus.hpp"
#include "support.hpp"

using namespace modcalc;

namespace {

/// (sum_v c_v^q m_v^(1-q))^(1-p) for one curve; min m_v / c_v for p = 1.
double single_curve_oracle(const MetricMeasureSpace& space, const DiscreteCurve& curve, double p) {
    std::vector<double> c(space.size(), 0.0);
    auto atoms = arc_length_atoms(space, curve);
    for (std::size_t i = 0; i < atoms.size(); ++i) c[curve.vertices()[i]] += atoms[i];
    if (p == 1.0) {
        double best = kInfinity;
        for (Vertex v = 0; v < space.size(); ++v)
            if (c[v] > 0.0) best = std::min(best, space.mass(v) / c[v]);
        return best;
    }
    const double q = p / (p - 1.0);
    double s = 0.0;
    for (Vertex v = 0; v < space.size(); ++v)
        if (c[v] > 0.0) s += std::pow(c[v], q) * std::pow(space.mass(v), 1.0 - q);
    return std::pow(s, 1.0 - p);
}

/// Golden-section search over the middle value of the two unit hops of a
/// 3-vertex path; the outer values are forced to max(0, 2 - b).
double two_hop_oracle(const std::vector<double>& m, double p) {
    auto cost = [&](double b) {
        double a = std::max(0.0, 2.0 - b);
        return (m[0] + m[2]) * std::pow(a, p) + m[1] * std::pow(b, p);
    };
    double lo = 0.0, hi = 2.0;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int k = 0; k < 200; ++k) {
        double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
        if (cost(x1) < cost(x2))
            hi = x2;
        else
            lo = x1;
    }
    return cost(0.5 * (lo + hi));
}

}  // namespace

TEST_CASE("single edge closed form") {
    auto space = MetricMeasureSpace::build(path_spec(2));
    CurveFamily family({DiscreteCurve::through(space, {0, 1})});
    auto result = modulus(space, family, 2.0, Lambda::Zero);
    CHECK(result.value == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(result.gap <= 1e-8);
    CHECK(result.rho[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(modulus(space, family, 1.0, Lambda::Zero).value == doctest::Approx(2.0).epsilon(1e-8));
    // lambda = 1 adds rho(0) + rho(1): coefficients 1.5 each.
    CHECK(modulus(space, family, 2.0, Lambda::One).value == doctest::Approx(1.0 / 4.5).epsilon(1e-8));
}

TEST_CASE("random single curves match the closed form") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 40; ++trial) {
        auto space = testkit::random_space(rng, 4 + testkit::pick(rng, 8));
        auto walk = testkit::random_walk_vertices(space, rng, 1 + testkit::pick(rng, 10));
        if (walk.size() < 2) continue;
        CurveFamily family({DiscreteCurve::through(space, walk)});
        for (double p : {1.0, 1.5, 2.0, 3.0}) {
            auto result = modulus(space, family, p, Lambda::Zero);
            CHECK(testkit::relative_error(result.value, single_curve_oracle(space, family[0], p)) <= 1e-7);
        }
    }
}

TEST_CASE("two-hop family against a line search") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        SpaceSpec spec = path_spec(3);
        std::vector<double> m;
        for (auto& v : spec.vertices) m.push_back(v.mass = testkit::uniform(rng, 0.2, 3.0));
        auto space = MetricMeasureSpace::build(spec);
        CurveFamily family({DiscreteCurve::through(space, {0, 1}), DiscreteCurve::through(space, {1, 2})});
        for (double p : {1.5, 2.0, 3.0}) {
            auto result = modulus(space, family, p, Lambda::Zero);
            CHECK(testkit::relative_error(result.value, two_hop_oracle(m, p)) <= 1e-7);
        }
    }
}

TEST_CASE("unit path benchmark") {
    auto space = MetricMeasureSpace::build(path_spec(3));
    CurveFamily family({DiscreteCurve::through(space, {0, 1}), DiscreteCurve::through(space, {1, 2})});
    auto result = modulus(space, family, 2.0, Lambda::Zero);
    CHECK(result.value == doctest::Approx(8.0 / 3.0).epsilon(1e-8));
    CHECK(result.rho[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
    CHECK(result.rho[1] == doctest::Approx(4.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("degenerate families") {
    auto space = MetricMeasureSpace::build(path_spec(3));
    auto empty = modulus(space, CurveFamily{}, 2.0, Lambda::Zero);
    CHECK(empty.value == 0.0);
    CHECK(empty.rho.vector() == std::vector<double>(3, 0.0));

    CurveFamily constant({DiscreteCurve::constant(1)});
    CHECK(modulus(space, constant, 2.0, Lambda::Zero).infinite());
    // lambda = 1: 2 rho(1) >= 1, so Mod = m / 2^p.
    CHECK(modulus(space, constant, 2.0, Lambda::One).value == doctest::Approx(0.25).epsilon(1e-8));

    CHECK_THROWS_AS(modulus(space, constant, 0.5, Lambda::Zero), ValidationError);
    CurveFamily bad({DiscreteCurve({0.0, 1.0}, {0, 2})});
    CHECK_THROWS_AS(modulus(space, bad, 2.0, Lambda::Zero), ValidationError);
}

TEST_CASE("duplicate curves do not change the value") {
    auto space = MetricMeasureSpace::build(path_spec(3));
    CurveFamily once({DiscreteCurve::through(space, {0, 1, 2})});
    CurveFamily twice({DiscreteCurve::through(space, {0, 1, 2}), DiscreteCurve({0.0, 0.1, 1.0}, {0, 1, 2})});
    auto a = modulus(space, once, 2.0, Lambda::Zero);
    auto b = modulus(space, twice, 2.0, Lambda::Zero);
    CHECK(b.value == doctest::Approx(a.value).epsilon(1e-10));
    CHECK(b.dual_weights[1] == 0.0);
}

TEST_CASE("admissibility of the returned density") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        auto space = testkit::random_space(rng, 6 + testkit::pick(rng, 6), 1.0);
        CurveFamily family;
        for (int k = 0; k < 8; ++k) {
            auto walk = testkit::random_walk_vertices(space, rng, 1 + testkit::pick(rng, 4));
            family.push_back(DiscreteCurve::through(space, walk));
        }
        for (Lambda lambda : {Lambda::Zero, Lambda::One}) {
            auto result = modulus(space, family, 2.0, lambda);
            auto check = admissible_check(space, result.rho.values(), family, lambda);
            CHECK(check.admissible);
            CHECK(check.min_slack >= -1e-12);
            CHECK(result.lower_bound <= result.value * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("optimal plan is a probability measure dual to the modulus") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 15; ++trial) {
        auto space = testkit::random_space(rng, 8, 1.0);
        CurveFamily family;
        for (int k = 0; k < 6; ++k)
            family.push_back(DiscreteCurve::through(space, testkit::random_walk_vertices(space, rng, 3)));
        for (double p : {1.5, 2.0, 3.0}) {
            auto result = modulus(space, family, p, Lambda::Zero);
            auto plan = optimal_plan(space, result, family);
            CHECK(plan.is_probability());
            double q = p / (p - 1.0);
            double product = barycenter(space, plan, Lambda::Zero).norm(space, q) * std::pow(result.value, 1.0 / p);
            CHECK(product == doctest::Approx(1.0).epsilon(1e-6));
        }
    }
    auto space = MetricMeasureSpace::build(path_spec(2));
    auto zero = modulus(space, CurveFamily{}, 2.0, Lambda::Zero);
    CHECK_THROWS_AS(optimal_plan(space, zero, CurveFamily{}), ValidationError);
}

TEST_CASE("exceptional sets") {
    auto space = MetricMeasureSpace::build(path_spec(4));
    CHECK(is_exceptional(space, VertexSet{}, 2.0, 3).exceptional);
    auto report = is_exceptional(space, VertexSet{1}, 2.0, 3);
    CHECK_FALSE(report.exceptional);
    CHECK(report.value > 0.1);
}
