#include "doctest.h"

#include "riskcal/simplex.hpp"

using namespace riskcal::lp;

TEST_SUITE("simplex") {

TEST_CASE("standard form optimum") {
    // min -x - y  s.t. x + 2y + s1 = 4, 3x + y + s2 = 6.
    const Matrix a = {{1, 2, 1, 0}, {3, 1, 0, 1}};
    const auto r = solve_standard_form(a, {4, 6}, {-1, -1, 0, 0});
    REQUIRE(r.status == Status::optimal);
    CHECK(r.objective == doctest::Approx(-2.8));
    CHECK(r.z[0] == doctest::Approx(1.6));
    CHECK(r.z[1] == doctest::Approx(1.2));
}

TEST_CASE("infeasible and unbounded standard forms") {
    CHECK(solve_standard_form({{1, 1}}, {-1}, {0, 0}).status == Status::infeasible);
    CHECK(solve_standard_form({{1, -1}}, {0}, {-1, 0}).status == Status::unbounded);
}

TEST_CASE("redundant equality rows") {
    const Matrix a = {{1, 1, 1}, {2, 2, 2}};
    const auto r = solve_standard_form(a, {1, 2}, {1, 2, 3});
    REQUIRE(r.status == Status::optimal);
    CHECK(r.objective == doctest::Approx(1.0));
}

TEST_CASE("degenerate problem terminates") {
    const Matrix a = {{1, 1, 1, 0, 0}, {1, -1, 0, 1, 0}, {1, 0, 0, 0, 1}};
    const auto r = solve_standard_form(a, {0, 0, 0}, {-1, -1, 0, 0, 0});
    REQUIRE(r.status == Status::optimal);
    CHECK(r.objective == doctest::Approx(0.0));
}

TEST_CASE("feasible inequality system returns a point") {
    // y1 >= 1, y2 >= -1, y1 + y2 <= 3.
    const Matrix g = {{1, 0}, {0, 1}, {-1, -1}};
    const std::vector<double> h = {1, -1, -3};
    const auto r = solve_inequalities(g, h);
    REQUIRE(r.feasible);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(g[i][0] * r.point[0] + g[i][1] * r.point[1] >= h[i] - 1e-9);
}

TEST_CASE("infeasible inequality system returns a Farkas certificate") {
    // y >= 1 and -y >= 0.
    const Matrix g = {{1}, {-1}};
    const std::vector<double> h = {1, 0};
    const auto r = solve_inequalities(g, h);
    REQUIRE_FALSE(r.feasible);
    REQUIRE(r.certificate.size() == 2);
    double gtw = 0.0, sum = 0.0, hw = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(r.certificate[i] >= 0.0);
        gtw += g[i][0] * r.certificate[i];
        sum += r.certificate[i];
        hw += h[i] * r.certificate[i];
    }
    CHECK(gtw == doctest::Approx(0.0));
    CHECK(sum == doctest::Approx(1.0));
    CHECK(hw > 0.0);
    CHECK(r.certificate_value == doctest::Approx(hw));
}

}  // TEST_SUITE
