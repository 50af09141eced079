#include "doctest.h"

#include "oracles.hpp"
#include "riskcal/lift.hpp"

using namespace riskcal;

namespace {

Filtration halves(std::size_t n) {
    std::vector<std::size_t> a, b;
    for (std::size_t i = 0; i < n; ++i) (i < n / 2 ? a : b).push_back(i);
    return Filtration::two_period(n, Partition({a, b}));
}

RandomVariable blockwise(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = i < n / 2 ? a : b;
    return RandomVariable(v);
}

}  // namespace

TEST_SUITE("lift") {

TEST_CASE("geometry examples") {
    const auto g = geometry_xyl({0.0, 0.0}, 1.0);
    CHECK(g.lower == GeometryPoint{-1.0, -1.0});
    CHECK(g.upper == GeometryPoint{1.0, 1.0});
    CHECK(g.lambda == 0.5);
    CHECK(g.d == 2.0);

    const auto corner = geometry_xyl({1.0, -1.0}, 1.0);
    CHECK(corner.lower == GeometryPoint{1.0, -1.0});
    CHECK(corner.upper == GeometryPoint{1.0, -1.0});
    CHECK(corner.lambda == 0.0);

    const auto edge = geometry_xyl({1.0, 0.0}, 1.0);
    CHECK(edge.lower == GeometryPoint{0.0, -1.0});
    CHECK(edge.upper == GeometryPoint{1.0, 0.0});
    CHECK(edge.lambda == 1.0);

    CHECK_THROWS_AS(geometry_xyl({1.5, 0.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(geometry_xyl({0.0, -1.5}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(geometry_xyl({0.0, 0.0}, 0.0), std::invalid_argument);
}

TEST_CASE("geometry reconstructs the point on random inputs") {
    std::mt19937_64 rng(53);
    for (int t = 0; t < 1000; ++t) {
        const double m = 0.1 + 3.0 * unit_uniform(rng);
        const GeometryPoint p{m - 2.0 * m * unit_uniform(rng), -m + 2.0 * m * unit_uniform(rng)};
        const auto g = geometry_xyl(p, m);
        CHECK(g.d >= 0.0);
        CHECK(g.lambda >= 0.0);
        CHECK(g.lambda <= 1.0);
        CHECK(g.lower.y == -m);
        CHECK(g.lower.x <= m);
        CHECK(g.upper.x == m);
        CHECK(g.upper.y >= -m);
        CHECK(g.upper.x - g.lower.x == doctest::Approx(g.d).epsilon(1e-14));
        CHECK(g.upper.y - g.lower.y == doctest::Approx(g.d).epsilon(1e-14));
        CHECK(std::abs(g.lambda * g.upper.x + (1 - g.lambda) * g.lower.x - p.x) <= 1e-12);
        CHECK(std::abs(g.lambda * g.upper.y + (1 - g.lambda) * g.lower.y - p.y) <= 1e-12);
    }
}

TEST_CASE("geometry is exact when lambda is dyadic") {
    // d = 2 + y - x is a power of two for these offsets.
    for (double x : {-1.0, -0.5, 0.0, 0.25, 0.75}) {
        for (double off : {-1.5, -1.0, 0.0, 2.0}) {
            const double y = x + off;
            if (y < -1.0) continue;
            const auto g = geometry_xyl({x, y}, 1.0);
            CHECK(g.lambda * g.upper.x + (1 - g.lambda) * g.lower.x == x);
            CHECK(g.lambda * g.upper.y + (1 - g.lambda) * g.lower.y == y);
        }
    }
}

TEST_CASE("corner set membership") {
    CHECK(in_commonotone_corner({-3.0, -1.0}, 1.0));
    CHECK(in_commonotone_corner({1.0, 4.0}, 1.0));
    CHECK_FALSE(in_commonotone_corner({0.0, 0.0}, 1.0));
    CHECK_FALSE(in_commonotone_corner({1.5, -1.0}, 1.0));
}

TEST_CASE("find_b examples") {
    const auto s = OutcomeSpace::uniform(8);
    const auto f = halves(8);
    const ConditionalUtility mean(DistortionFunction::expectation(), s, f);
    const auto g2 = build_uniform_grid(s, f, 2);
    const auto half = find_b(mean, g2, RandomVariable::constant(8, 0.5));
    CHECK(half.level == std::vector<std::size_t>{1, 1});
    CHECK(half.b == g2.level_sets[1]);
    CHECK(half.lambda_achieved == RandomVariable::constant(8, 0.5));

    const ConditionalUtility es(DistortionFunction::es(Rational(1, 2)), s, f);
    const auto g4 = build_uniform_grid(s, f, 4);
    const auto three = find_b(es, g4, RandomVariable::constant(8, 0.5));
    CHECK(three.level == std::vector<std::size_t>{3, 3});
    CHECK(three.lambda_achieved == RandomVariable::constant(8, 0.5));

    const auto zero = find_b(es, g4, RandomVariable::constant(8, 0.0));
    CHECK(zero.level == std::vector<std::size_t>{0, 0});
    CHECK(zero.b == EventSet::empty(8));

    const ConditionalUtility scen(ScenarioSet{{std::vector<double>(8, 0.125)}}, s, f);
    CHECK_THROWS_WITH_AS(find_b(scen, g4, RandomVariable::constant(8, 0.5)), doctest::Contains("non-distortion base"),
                         std::invalid_argument);
}

TEST_CASE("golden lift on eight outcomes") {
    const auto s = OutcomeSpace::uniform(8);
    const auto f = halves(8);
    const ConditionalUtility cu(DistortionFunction::expectation(), s, f);
    const auto grid = build_uniform_grid(s, f, 4);
    const auto res = lift_pair(cu, grid, blockwise(0.0, 1.0, 8), blockwise(0.0, -1.0, 8));
    const auto& p = res.pair;
    CHECK(p.m == 1.0);
    CHECK(p.lambda_target == blockwise(0.5, 0.0, 8));
    CHECK(p.lambda_achieved == blockwise(0.5, 0.0, 8));
    CHECK(p.xi == RandomVariable{1, 1, -1, -1, 1, 1, 1, 1});
    CHECK(p.eta == RandomVariable{1, 1, -1, -1, -1, -1, -1, -1});
    CHECK(res.diagnostics.snap_error == 0.0);
    CHECK(res.diagnostics.resolution_used == 4);
    CHECK(conditional_eval(cu, p.xi) == blockwise(0.0, 1.0, 8));
    CHECK(conditional_eval(cu, p.eta) == blockwise(0.0, -1.0, 8));
    CHECK(conditional_eval(cu, p.xi + p.eta) == blockwise(0.0, 0.0, 8));
    CHECK(is_commonotone_pair(p.xi, p.eta, s).commonotone);
}

TEST_CASE("degenerate lambda path") {
    const auto s = OutcomeSpace::uniform(8);
    const auto f = halves(8);
    const ConditionalUtility cu(DistortionFunction::expectation(), s, f);
    const auto res = lift_pair(cu, build_uniform_grid(s, f, 4), blockwise(1.0, 0.0, 8), blockwise(0.0, -1.0, 8));
    CHECK(res.pair.lambda_target == blockwise(1.0, 0.0, 8));
    CHECK(res.pair.b == EventSet::of(8, std::vector<std::size_t>{0, 1, 2, 3}));
    CHECK(res.pair.xi == blockwise(1.0, 0.0, 8));
    CHECK(res.pair.eta == blockwise(0.0, -1.0, 8));
}

TEST_CASE("zero inputs give zero lift") {
    const auto s = OutcomeSpace::uniform(8);
    const auto f = halves(8);
    const ConditionalUtility cu(DistortionFunction::es(Rational(1, 2)), s, f);
    const auto z = RandomVariable::constant(8, 0.0);
    const auto res = lift_pair(cu, build_uniform_grid(s, f, 4), z, z);
    CHECK(res.pair.xi == z);
    CHECK(res.pair.eta == z);
}

TEST_CASE("lift contracts on random inputs") {
    std::mt19937_64 rng(59);
    const auto s = OutcomeSpace::uniform(16);
    const Filtration f = Filtration::two_period(16, Partition({{0, 1, 2, 3, 4, 5, 6, 7}, {8, 9, 10, 11}, {12, 13, 14, 15}}));
    const auto grid = build_uniform_grid(s, f, 4);
    for (const auto& psi : {DistortionFunction::expectation(), DistortionFunction::es(Rational(1, 2)),
                            DistortionFunction::power(0.5)}) {
        const ConditionalUtility cu(psi, s, f);
        for (int t = 0; t < 100; ++t) {
            const auto fv = conditional_expectation(RandomVariable(oracle::draw(rng, 16, -2.0, 2.0)), f.f1, s);
            const auto gv = conditional_expectation(RandomVariable(oracle::draw(rng, 16, -2.0, 2.0)), f.f1, s);
            const auto res = lift_pair(cu, grid, fv, gv);
            const auto& p = res.pair;
            CHECK(is_commonotone_pair(p.xi, p.eta, s).commonotone);
            CHECK(p.xi.sup_norm() <= 3.0 * p.m + 1e-12);
            CHECK(p.eta.sup_norm() <= 3.0 * p.m + 1e-12);
            const auto ux = conditional_eval(cu, p.xi);
            const auto uy = conditional_eval(cu, p.eta);
            const auto us = conditional_eval(cu, p.xi + p.eta);
            for (std::size_t b = 0; b < f.f1.block_count(); ++b) {
                const std::size_t i = f.f1.block(b).front();
                for (std::size_t j : f.f1.block(b)) CHECK(in_commonotone_corner({p.xi[j], p.eta[j]}, p.m));
                const auto& geo = res.geometry[b];
                CHECK(std::abs(ux[i] - (geo.lower.x + geo.d * p.lambda_achieved[i])) <= 1e-9);
                CHECK(std::abs(uy[i] - (geo.lower.y + geo.d * p.lambda_achieved[i])) <= 1e-9);
                CHECK(std::abs(us[i] - ux[i] - uy[i]) <= 1e-9);
                const double bound = geo.d * std::abs(p.lambda_target[i] - p.lambda_achieved[i]) + 1e-9;
                CHECK(std::abs(ux[i] - fv[i]) <= bound);
                CHECK(std::abs(uy[i] - gv[i]) <= bound);
                CHECK(res.diagnostics.err_f[b] == doctest::Approx(std::abs(ux[i] - fv[i])).epsilon(1e-9));
                CHECK(std::abs(p.lambda_target[i] - p.lambda_achieved[i]) <= res.diagnostics.snap_error + 1e-15);
            }
        }
    }
}

TEST_CASE("lift rejects scenario bases and non-measurable inputs") {
    const auto s = OutcomeSpace::uniform(8);
    const auto f = halves(8);
    const auto grid = build_uniform_grid(s, f, 4);
    const ConditionalUtility scen(ScenarioSet{{std::vector<double>(8, 0.125)}}, s, f);
    CHECK_THROWS_AS(lift_pair(scen, grid, blockwise(1, 0, 8), blockwise(0, 1, 8)), std::invalid_argument);
    const ConditionalUtility mean(DistortionFunction::expectation(), s, f);
    CHECK_THROWS_AS(lift_pair(mean, grid, RandomVariable{0, 1, 0, 0, 0, 0, 0, 0}, blockwise(0, 1, 8)),
                    std::invalid_argument);
}

TEST_CASE("additivity probe") {
    const auto s = OutcomeSpace::uniform(12);
    const auto f = halves(12);
    const auto grid = build_uniform_grid(s, f, 6);
    const ConditionalUtility es(DistortionFunction::es(Rational(1, 2)), s, f);
    const auto probe = additivity_probe(es, grid, blockwise(1, 0, 12), blockwise(0, 1, 12));
    CHECK(probe.commonotone);
    CHECK(probe.u01_f == 0.0);
    CHECK(probe.u01_g == 0.0);
    CHECK(probe.u01_fg == 1.0);
    CHECK(probe.a_direct == 1.0);
    CHECK(probe.a_lift == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(probe.lift.diagnostics.snap_error == 0.0);

    const auto same = additivity_probe(es, grid, blockwise(0.5, 1, 12), blockwise(0.25, 2, 12));
    CHECK(std::abs(same.a_direct) <= 1e-12);

    std::mt19937_64 rng(61);
    const ConditionalUtility mean(DistortionFunction::expectation(), s, f);
    for (int t = 0; t < 100; ++t) {
        const auto d = oracle::draw(rng, 4);
        const auto p = additivity_probe(mean, grid, blockwise(d[0], d[1], 12), blockwise(d[2], d[3], 12));
        CHECK(std::abs(p.a_direct) <= 1e-9);
        CHECK(std::abs(p.a_lift) <= 1e-9);
    }
}

TEST_CASE("additivity probe: anti-monotone families under es") {
    const auto s = OutcomeSpace::uniform(12);
    const auto f = halves(12);
    const auto grid = build_uniform_grid(s, f, 6);
    for (const auto& alpha : {Rational(1, 3), Rational(1, 2), Rational(5, 6)}) {
        const ConditionalUtility es(DistortionFunction::es(alpha), s, f);
        for (double a : {0.5, 1.0, 2.0}) {
            const auto probe = additivity_probe(es, grid, blockwise(a, 0, 12), blockwise(0, a, 12));
            CHECK(probe.a_direct > 0.0);
        }
    }
}

}  // TEST_SUITE
