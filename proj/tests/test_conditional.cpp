#include "doctest.h"

#include "oracles.hpp"
#include "riskcal/conditional.hpp"
#include "riskcal/probes.hpp"

using namespace riskcal;

namespace {

Filtration halves(std::size_t n) {
    std::vector<std::size_t> a, b;
    for (std::size_t i = 0; i < n; ++i) (i < n / 2 ? a : b).push_back(i);
    return Filtration::two_period(n, Partition({a, b}));
}

ConditionalUtility four(const CoherentUtility& u) { return ConditionalUtility(u, OutcomeSpace::uniform(4), halves(4)); }

}  // namespace

TEST_SUITE("conditional") {

TEST_CASE("worked example under es(1/2)") {
    const auto cu = four(DistortionFunction::es(Rational(1, 2)));
    const RandomVariable x{0.0, 1.0, 2.0, 4.0};
    CHECK(conditional_eval(cu, x) == RandomVariable{0.0, 0.0, 2.0, 2.0});
    CHECK(evaluate(cu.base(), RandomVariable{0.0, 0.0, 2.0, 2.0}, cu.space()) == 0.0);
    CHECK(unconditional_eval(cu, x) == 0.5);
    CHECK(recompose(cu, x) == 0.0);
    const std::vector<RandomVariable> probes{x};
    const auto rep = tc_gap(cu, probes);
    CHECK(rep.max_gap == 0.5);
    CHECK(rep.witness == x);
}

TEST_CASE("expectation base is the conditional expectation and time consistent") {
    const auto cu = four(DistortionFunction::expectation());
    const auto probes = default_probes(cu.space(), cu.filtration());
    for (const auto& x : probes) {
        const auto c = conditional_eval(cu, x);
        const auto e = conditional_expectation(x, cu.filtration().f1, cu.space());
        for (std::size_t i = 0; i < 4; ++i) CHECK(c[i] == doctest::Approx(e[i]).epsilon(1e-14));
        CHECK(recompose(cu, x) == doctest::Approx(cu.space().expectation(x)).epsilon(1e-14));
    }
    CHECK(tc_gap(cu, probes).max_gap <= 1e-12);
}

TEST_CASE("F1-measurable probes have no gap") {
    const auto cu = four(DistortionFunction::es(Rational(1, 2)));
    const RandomVariable x{3.0, 3.0, -1.0, -1.0};
    CHECK(conditional_eval(cu, x) == x);
    CHECK(recompose(cu, x) == unconditional_eval(cu, x));
}

TEST_CASE("conditional axioms") {
    std::mt19937_64 rng(41);
    const OutcomeSpace s({Rational(1, 8), Rational(1, 8), Rational(1, 4), Rational(1, 16), Rational(3, 16),
                          Rational(1, 8), Rational(1, 8)});
    const Filtration f = Filtration::two_period(7, Partition({{0, 3}, {1, 2, 4}, {5, 6}}));
    const std::vector<CoherentUtility> bases = {
        DistortionFunction::es(Rational(1, 3)), DistortionFunction::power(0.5),
        ScenarioSet{{{0.125, 0.125, 0.25, 0.0625, 0.1875, 0.125, 0.125}, {0.5, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0}}}};
    for (const auto& base : bases) {
        const ConditionalUtility cu(base, s, f);
        for (int t = 0; t < 100; ++t) {
            const RandomVariable x(oracle::draw(rng, 7));
            const RandomVariable y(oracle::draw(rng, 7));
            const RandomVariable bump(oracle::draw(rng, 7, 0.0, 1.0));
            const auto a = conditional_expectation(RandomVariable(oracle::draw(rng, 7)), f.f1, s);
            const auto lam = conditional_expectation(RandomVariable(oracle::draw(rng, 7, 0.0, 2.0)), f.f1, s);
            const auto ux = conditional_eval(cu, x);
            CHECK(is_measurable(ux, f.f1));
            const auto shifted = conditional_eval(cu, x + a);
            const auto scaled = conditional_eval(cu, hadamard(lam, x));
            const auto bumped = conditional_eval(cu, x + bump);
            const auto sum = conditional_eval(cu, x + y);
            const auto uy = conditional_eval(cu, y);
            for (std::size_t i = 0; i < 7; ++i) {
                CHECK(shifted[i] == doctest::Approx(ux[i] + a[i]).epsilon(1e-12));
                CHECK(scaled[i] == doctest::Approx(lam[i] * ux[i]).epsilon(1e-12));
                CHECK(bumped[i] >= ux[i] - 1e-12);
                CHECK(sum[i] >= ux[i] + uy[i] - 1e-12);
            }
        }
    }
}

TEST_CASE("scenario measures that vanish on a block are skipped") {
    const ScenarioSet s{{{0.5, 0.5, 0.0, 0.0}, {0.25, 0.25, 0.25, 0.25}}};
    const auto cu = four(s);
    const auto v = conditional_eval(cu, RandomVariable{0.0, 2.0, 5.0, 7.0});
    CHECK(v == RandomVariable{1.0, 1.0, 6.0, 6.0});
    CHECK(fallback_blocks(cu).empty());

    const auto only = four(ScenarioSet{{{0.5, 0.5, 0.0, 0.0}}});
    CHECK(fallback_blocks(only) == std::vector<std::size_t>{1});
}

TEST_CASE("product base is rejected") {
    CHECK_THROWS_AS(four(ProductExample{2, 2}), std::invalid_argument);
}

TEST_CASE("es yields a positive gap on the crafted family") {
    for (std::size_t n : {4u, 6u, 8u, 12u}) {
        // ES equals essinf when alpha is at most the atom mass; stay above it.
        for (const auto& alpha : {Rational(1, 10), Rational(1, 5), Rational(1, 3), Rational(1, 2), Rational(2, 3),
                                  Rational(3, 4), Rational(9, 10), Rational(99, 100)}) {
            if (alpha <= Rational(1, static_cast<long>(n))) continue;
            const ConditionalUtility cu(DistortionFunction::es(alpha), OutcomeSpace::uniform(n), halves(n));
            const auto probes = crafted_probes(cu.space(), cu.filtration());
            CHECK(tc_gap(cu, probes).max_gap > 1e-6);
        }
    }
}

TEST_CASE("tc_gap rejects an empty probe list") {
    const auto cu = four(DistortionFunction::expectation());
    CHECK_THROWS_AS(tc_gap(cu, std::vector<RandomVariable>{}), std::invalid_argument);
}

TEST_CASE("cone decomposition: infeasible for the centered es witness") {
    const auto cu = four(DistortionFunction::es(Rational(1, 2)));
    const RandomVariable x = RandomVariable{0.0, 1.0, 2.0, 4.0} - 0.5;
    CHECK(unconditional_eval(cu, x) == 0.0);
    const auto dec = cone_decompose(cu, x);
    CHECK_FALSE(dec.feasible);
    CHECK(dec.certificate_value > 0.0);
    CHECK_FALSE(dec.eta.has_value());
}

TEST_CASE("cone decomposition: expectation base is always feasible") {
    std::mt19937_64 rng(43);
    const auto cu = ConditionalUtility(DistortionFunction::expectation(), OutcomeSpace::uniform(8), halves(8));
    for (int t = 0; t < 50; ++t) {
        RandomVariable x(oracle::draw(rng, 8));
        x = x - unconditional_eval(cu, x) + 0.1 * riskcal::unit_uniform(rng);
        const auto dec = cone_decompose(cu, x);
        REQUIRE(dec.feasible);
        CHECK(is_measurable(*dec.eta, cu.filtration().f1));
        CHECK(dec.u01_eta >= -1e-9);
        CHECK(dec.min_block_u02_zeta >= -1e-9);
        const auto back = *dec.eta + *dec.zeta;
        for (std::size_t i = 0; i < 8; ++i) CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-12));
    }
}

TEST_CASE("cone decomposition: F1-measurable acceptable positions") {
    const auto cu = four(DistortionFunction::es(Rational(1, 2)));
    const auto dec = cone_decompose(cu, RandomVariable{1.0, 1.0, 0.5, 0.5});
    REQUIRE(dec.feasible);
    CHECK(dec.u01_eta >= -1e-9);
    CHECK(dec.min_block_u02_zeta >= -1e-9);
}

TEST_CASE("cone decomposition: scenario base and error paths") {
    const auto cu = four(ScenarioSet{{{0.25, 0.25, 0.25, 0.25}, {0.5, 0.0, 0.5, 0.0}}});
    const auto dec = cone_decompose(cu, RandomVariable{1.0, 2.0, 1.0, 0.0});
    CHECK(dec.dual_vertices == 2);
    CHECK_THROWS_AS(cone_decompose(cu, RandomVariable{-1.0, -1.0, -1.0, -1.0}), NotAcceptable);
    const ConditionalUtility big(DistortionFunction::es(Rational(1, 2)), OutcomeSpace::uniform(10), halves(10));
    CHECK_THROWS_WITH_AS(cone_decompose(big, RandomVariable::constant(10, 1.0)), doctest::Contains("space too large"),
                         std::invalid_argument);
}

TEST_CASE("conditional commonotone additivity") {
    std::mt19937_64 rng(47);
    const ConditionalUtility cu(DistortionFunction::es(Rational(1, 3)), OutcomeSpace::uniform(8), halves(8));
    for (int t = 0; t < 50; ++t) {
        const auto z = oracle::draw(rng, 8);
        std::vector<double> x(8), y(8);
        for (std::size_t i = 0; i < 8; ++i) {
            x[i] = z[i] * z[i] * z[i];
            y[i] = std::max(z[i], 0.2);
        }
        const auto chk = conditional_commonotone_additivity_check(cu, RandomVariable(x), RandomVariable(y));
        CHECK(chk.additive);
        CHECK(chk.gap.size() == 2);
    }
    const RandomVariable x(oracle::draw(rng, 8));
    CHECK(conditional_commonotone_additivity_check(cu, x, RandomVariable::constant(8, 2.0)).additive);
    CHECK(conditional_commonotone_additivity_check(cu, x, x).additive);
    CHECK_THROWS_AS(conditional_commonotone_additivity_check(cu, RandomVariable{0, 1, 2, 3, 4, 5, 6, 7},
                                                             RandomVariable{7, 6, 5, 4, 3, 2, 1, 0}),
                    std::invalid_argument);
}

}  // TEST_SUITE
