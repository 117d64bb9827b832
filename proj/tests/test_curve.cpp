#include <doctest.h>

#include "modcalc/curve.hpp"
#include "modcalc/errors.hpp"
#include "support.hpp"

using namespace modcalc;

TEST_CASE("curve construction rejects bad input") {
    CHECK_THROWS_AS(DiscreteCurve({}, {}), ValidationError);
    CHECK_THROWS_AS(DiscreteCurve({0.0, 1.0}, {0}), ValidationError);
    CHECK_THROWS_AS(DiscreteCurve({0.0, 0.0}, {0, 1}), ValidationError);
    CHECK_THROWS_AS(DiscreteCurve({0.0, 1.0, 0.5}, {0, 1, 2}), ValidationError);
    CHECK_THROWS_AS(DiscreteCurve({0.0, 1.0}, {1, 1}), ValidationError);

    auto space = MetricMeasureSpace::build(path_spec(4));
    CHECK_THROWS_AS(DiscreteCurve({0.0, 1.0}, {0, 2}).validate(space), ValidationError);
    CHECK_THROWS_AS(DiscreteCurve({0.0, 1.0}, {0, 9}).validate(space), ValidationError);
    CHECK_NOTHROW(DiscreteCurve({0.0, 1.0}, {0, 1}).validate(space));
}

TEST_CASE("trapezoid path integral on a weighted path") {
    SpaceSpec spec = path_spec(3);
    spec.edges[0].length = 2.0;
    spec.edges[1].length = 0.5;
    auto space = MetricMeasureSpace::build(spec);
    auto curve = DiscreteCurve::through(space, {0, 1, 2});
    std::vector<double> rho{1.0, 3.0, 5.0};
    CHECK(path_integral(space, curve, rho) == doctest::Approx(0.5 * 4.0 * 2.0 + 0.5 * 8.0 * 0.5));
    CHECK(length(space, curve) == doctest::Approx(2.5));
    CHECK(curve.times() == std::vector<double>{0.0, 0.8, 1.0});

    auto atoms = arc_length_atoms(space, curve);
    CHECK(atoms == std::vector<double>{1.0, 1.25, 0.25});

    std::vector<double> with_inf{kInfinity, 0.0, 0.0};
    CHECK(path_integral(space, curve, with_inf) == kInfinity);
}

TEST_CASE("constant curves") {
    auto space = MetricMeasureSpace::build(path_spec(2));
    auto c = DiscreteCurve::constant(1);
    CHECK(c.is_constant());
    CHECK(c.on_unit_interval());
    CHECK(length(space, c) == 0.0);
    CHECK(path_integral(space, c, std::vector<double>{5.0, 5.0}) == 0.0);
    CHECK(position_at(c, 0.3) == 1);
    CHECK(q_energy(space, c, 2.0) == 0.0);
}

TEST_CASE("position rule spends half of each hop at each endpoint") {
    auto curve = DiscreteCurve({0.0, 0.4, 1.0}, {0, 1, 2});
    CHECK(position_at(curve, 0.0) == 0);
    CHECK(position_at(curve, 0.19) == 0);
    CHECK(position_at(curve, 0.2) == 1);
    CHECK(position_at(curve, 0.69) == 1);
    CHECK(position_at(curve, 0.7) == 2);
    CHECK(position_at(curve, 1.0) == 2);
}

TEST_CASE("restriction to breakpoint times") {
    auto curve = DiscreteCurve({0.0, 0.25, 0.5, 1.0}, {0, 1, 2, 3});
    auto sub = restrict(curve, 0.25, 1.0);
    CHECK(sub.vertices() == std::vector<Vertex>{1, 2, 3});
    CHECK(sub.times()[1] == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(restrict(curve, 0.3, 1.0), ValidationError);
    CHECK_THROWS_AS(restrict(curve, 0.5, 0.5), ValidationError);
}

TEST_CASE("q-energy of a constant-speed curve is length^q") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        auto space = testkit::random_space(rng, 8);
        auto curve = cs_reparam(space, testkit::random_timed_curve(space, rng, 1 + testkit::pick(rng, 6)));
        if (curve.is_constant()) continue;
        double l = length(space, curve);
        CHECK(q_energy(space, curve, 2.0) == doctest::Approx(l * l).epsilon(1e-12));
        CHECK(q_energy(space, curve, 3.5) == doctest::Approx(std::pow(l, 3.5)).epsilon(1e-12));
        CHECK(q_energy(space, curve, kInfinity) == doctest::Approx(l).epsilon(1e-12));
    }
    auto space = MetricMeasureSpace::build(path_spec(3));
    CHECK_THROWS_AS(q_energy(space, DiscreteCurve({0.0, 2.0}, {0, 1}), 2.0), ValidationError);
}

TEST_CASE("variation measures") {
    auto space = MetricMeasureSpace::build(path_spec(4));
    auto curve = DiscreteCurve::through(space, {0, 1, 2, 1});
    std::vector<double> f{0.0, 2.0, 1.0, 7.0};
    auto mv = variation_measures(space, curve, f);
    CHECK(mv.signed_variation.atoms == std::vector<double>{1.0, 0.5, 0.0, 0.5});
    CHECK(mv.total_variation.atoms == std::vector<double>{1.0, 1.5, 1.0, 0.5});
    CHECK(mv.signed_variation.total() == doctest::Approx(2.0));
    CHECK(mv.total_variation.total() == doctest::Approx(4.0));
    CHECK(mv.arc_length.total() == doctest::Approx(3.0));
}

TEST_CASE("reversal swaps endpoints and keeps the integral") {
    std::mt19937_64 rng(9);
    auto space = testkit::random_space(rng, 10);
    for (int trial = 0; trial < 30; ++trial) {
        auto curve = testkit::random_timed_curve(space, rng, 5);
        auto back = curve.reversed();
        CHECK(back.start() == curve.finish());
        CHECK(back.start_time() == curve.start_time());
        CHECK(back.end_time() == doctest::Approx(curve.end_time()));
        auto rho = testkit::random_values(rng, space.size(), 0.0, 3.0);
        CHECK(path_integral(space, back, rho) == doctest::Approx(path_integral(space, curve, rho)));
    }
}
