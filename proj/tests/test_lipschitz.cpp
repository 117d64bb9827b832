#include <doctest.h>

#include "modcalc/errors.hpp"
#include "modcalc/families.hpp"
#include "modcalc/lipschitz.hpp"
#include "support.hpp"

using namespace modcalc;

TEST_CASE("slope and Lipschitz constant on a path") {
    auto space = MetricMeasureSpace::build(path_spec(4));
    std::vector<double> f{0.0, 1.0, 3.0, 3.5};
    auto slope = asymptotic_slope(space, f);
    CHECK(slope.vector() == std::vector<double>{1.0, 2.0, 2.0, 0.5});
    CHECK(lipschitz_constant(space, f, space.all()) == doctest::Approx(2.0));
    CHECK(lipschitz_constant(space, f, VertexSet{0, 3}) == doctest::Approx(3.5 / 3.0));
    CHECK(lipschitz_constant(space, f, VertexSet{2}) == 0.0);
    CHECK_THROWS_AS(lipschitz_constant(space, f, VertexSet{}), ValidationError);
}

TEST_CASE("McShane extension agrees on K and keeps the constant") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        auto space = testkit::random_space(rng, 3 + testkit::pick(rng, 10), 1.0);
        auto f = testkit::random_values(rng, space.size(), -2.0, 2.0);
        std::vector<Vertex> k;
        for (Vertex v = 0; v < space.size(); ++v)
            if (testkit::uniform(rng, 0.0, 1.0) < 0.4) k.push_back(v);
        if (k.empty()) k.push_back(0);
        VertexSet domain(k);
        double lip = lipschitz_constant(space, f, domain);
        double big = lip * testkit::uniform(rng, 1.0, 2.0);
        auto g = mcshane_extend(space, f, domain, big);
        for (Vertex v : domain) CHECK(g[v] == f[v]);
        CHECK(lipschitz_constant(space, g, space.all()) <= big * (1.0 + 1e-12) + 1e-15);
    }
    auto space = MetricMeasureSpace::build(path_spec(3));
    CHECK_THROWS_AS(mcshane_extend(space, std::vector<double>{0.0, 0.0, 5.0}, VertexSet{0, 2}, 1.0),
                    ValidationError);
}

TEST_CASE("upper gradient check on explicit curves") {
    auto space = MetricMeasureSpace::build(path_spec(3));
    std::vector<double> f{0.0, 1.0, 2.0};
    auto family = all_walks(space, 2, true);
    CHECK(is_upper_gradient(space, f, std::vector<double>{1.0, 1.0, 1.0}, family).holds);
    auto report = is_upper_gradient(space, f, std::vector<double>{0.5, 0.5, 0.5}, family);
    CHECK_FALSE(report.holds);
    CHECK(report.worst_violation == doctest::Approx(1.0));
    CHECK(is_upper_gradient(space, f, std::vector<double>{0.0, 0.0, 0.0}, CurveFamily{}).holds);
}

TEST_CASE("path relaxation on a unit path") {
    auto space = MetricMeasureSpace::build(path_spec(4));
    std::vector<double> f{0.0, 5.0, 5.0, 5.0};
    std::vector<double> g{1.0, 1.0, 3.0, 1.0};
    auto relaxed = path_relax(space, f, g, {VertexSet{0}, 1.0, 10.0});
    CHECK(relaxed == std::vector<double>{0.0, 1.0, 3.0, 5.0});

    // Capped and unreachable values become M.
    auto capped = path_relax(space, f, g, {VertexSet{0}, 1.0, 2.5});
    CHECK(capped == std::vector<double>{0.0, 1.0, 2.5, 2.5});

    // A mesh of 2 allows jumps over one vertex.
    auto jumps = path_relax(space, f, g, {VertexSet{0}, 2.0, 10.0});
    CHECK(jumps[2] == doctest::Approx(3.0));
    CHECK(jumps[3] == doctest::Approx(3.0));

    CHECK_THROWS_AS(path_relax(space, f, g, {VertexSet{}, 1.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(path_relax(space, f, g, {VertexSet{0}, 0.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(path_relax(space, f, g, {VertexSet{0}, 1.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(path_relax(space, std::vector<double>{-1.0, 0, 0, 0}, g, {VertexSet{0}, 1.0, 1.0}),
                    ValidationError);
}

TEST_CASE("path relaxation with several sources keeps the cheapest") {
    auto space = MetricMeasureSpace::build(path_spec(5));
    std::vector<double> f{4.0, 9.0, 9.0, 9.0, 0.5};
    std::vector<double> g(5, 1.0);
    auto relaxed = path_relax(space, f, g, {VertexSet{0, 4}, 1.0, 100.0});
    CHECK(relaxed == std::vector<double>{4.0, 3.5, 2.5, 1.5, 0.5});
}
