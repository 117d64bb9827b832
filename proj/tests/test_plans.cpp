#include <doctest.h>

#include "modcalc/errors.hpp"
#include "modcalc/lipschitz.hpp"
#include "modcalc/plans.hpp"
#include "support.hpp"

using namespace modcalc;

namespace {

Plan random_plan(const MetricMeasureSpace& space, std::mt19937_64& rng, std::size_t atoms) {
    std::vector<PlanAtom> support;
    for (std::size_t k = 0; k < atoms; ++k) {
        auto walk = testkit::random_walk_vertices(space, rng, testkit::pick(rng, 5));
        support.push_back({DiscreteCurve::through(space, walk), testkit::uniform(rng, 0.1, 1.0)});
    }
    return Plan(std::move(support)).normalized();
}

}  // namespace

TEST_CASE("plan validation") {
    auto space = MetricMeasureSpace::build(path_spec(3));
    auto curve = DiscreteCurve::through(space, {0, 1});
    CHECK_THROWS_AS(Plan({{curve, 0.0}}), ValidationError);
    CHECK_THROWS_AS(Plan({{curve, -1.0}}), ValidationError);
    CHECK_THROWS_AS(Plan({{DiscreteCurve({0.0, 2.0}, {0, 1}), 1.0}}), ValidationError);
    Plan plan({{curve, 2.0}, {DiscreteCurve::through(space, {1, 2}), 6.0}});
    CHECK(plan.mass() == doctest::Approx(8.0));
    CHECK_FALSE(plan.is_probability());
    CHECK(plan.normalized().is_probability());
    std::vector<std::size_t> keep{1};
    auto sub = plan.restricted(keep);
    REQUIRE(sub.support().size() == 1);
    CHECK(sub.support()[0].weight == doctest::Approx(1.0));
}

TEST_CASE("barycenter of a single edge") {
    SpaceSpec spec = path_spec(2, 2.0);
    spec.vertices[0].mass = 0.5;
    auto space = MetricMeasureSpace::build(spec);
    Plan plan({{DiscreteCurve::through(space, {0, 1}), 1.0}});
    auto bar0 = barycenter(space, plan, Lambda::Zero);
    CHECK(bar0.density.vector() == std::vector<double>{2.0, 1.0});
    auto bar1 = barycenter(space, plan, Lambda::One);
    CHECK(bar1.density.vector() == std::vector<double>{4.0, 2.0});
    CHECK(bar0.norm(space, 2.0) == doctest::Approx(std::sqrt(0.5 * 4.0 + 1.0)));
    CHECK(bar0.norm(space, kInfinity) == doctest::Approx(2.0));
}

TEST_CASE("compression counts time marginals") {
    SpaceSpec spec = path_spec(2);
    spec.vertices[0].mass = 0.25;
    auto space = MetricMeasureSpace::build(spec);
    Plan plan({{DiscreteCurve::through(space, {0, 1}), 0.5}, {DiscreteCurve::through(space, {1, 0}), 0.5}});
    CHECK(compression(space, plan) == doctest::Approx(2.0));

    Plan single({{DiscreteCurve::through(space, {0, 1}), 1.0}});
    CHECK(compression(space, single) == doctest::Approx(4.0));

    // Hops ending off the grid: the grid value never exceeds the exact one.
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        auto s = testkit::random_space(rng, 7, 1.0);
        auto p = random_plan(s, rng, 5);
        double exact = compression(s, p);
        for (std::size_t n : {4u, 16u, 64u}) CHECK(compression_on_grid(s, p, n) <= exact * (1.0 + 1e-12));
        CHECK(exact >= 1.0 / s.measure(s.all()) - 1e-12);
    }
}

TEST_CASE("time occupation of a constant-speed curve is the scaled barycenter") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        auto space = testkit::random_space(rng, 8);
        auto walk = testkit::random_walk_vertices(space, rng, 1 + testkit::pick(rng, 5));
        if (walk.size() < 2) continue;
        auto curve = DiscreteCurve::through(space, walk);
        Plan plan({{curve, 1.0}});
        auto occupation = parametric_barycenter(space, plan, Lambda::Zero);
        auto bar = barycenter(space, plan, Lambda::Zero);
        double l = length(space, curve);
        for (Vertex v = 0; v < space.size(); ++v)
            CHECK(occupation[v] * l == doctest::Approx(bar.density[v]).epsilon(1e-12));
    }
}

TEST_CASE("energy and test plans") {
    auto space = MetricMeasureSpace::build(path_spec(3));
    Plan plan({{DiscreteCurve::through(space, {0, 1, 2}), 0.25}, {DiscreteCurve::through(space, {1, 2}), 0.75}});
    CHECK(energy(space, plan, 2.0) == doctest::Approx(0.25 * 4.0 + 0.75 * 1.0));
    CHECK(energy(space, plan, kInfinity) == doctest::Approx(2.0));
    CHECK_THROWS_AS(energy(space, plan, 1.0), ValidationError);
    auto report = is_test_plan(space, plan, 2.0);
    CHECK(report.is_test_plan);
    CHECK_FALSE(is_test_plan(space, plan.scaled(2.0), 2.0).is_test_plan);
}

TEST_CASE("plan derivation integrates by parts against its divergence") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 200; ++trial) {
        auto space = testkit::random_space(rng, 3 + testkit::pick(rng, 8), 1.0);
        auto plan = random_plan(space, rng, 1 + testkit::pick(rng, 6));
        auto f = testkit::random_values(rng, space.size(), -3.0, 3.0);
        auto d = plan_derivation(space, plan, f);
        double lhs = 0.0, rhs = 0.0, div_total = 0.0;
        for (Vertex v = 0; v < space.size(); ++v) {
            lhs += d.b[v] * space.mass(v);
            rhs -= f[v] * d.divergence[v];
            div_total += d.divergence[v];
        }
        CHECK(std::abs(lhs - rhs) <= 1e-12);
        CHECK(std::abs(div_total) <= 1e-12);
        CHECK(derivation_norm_bound(space, plan, f).holds);
    }
}
