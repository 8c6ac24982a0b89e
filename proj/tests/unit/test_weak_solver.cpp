#include <doctest.h>

#include <cmath>

#include "pxlap/function_spec.hpp"
#include "pxlap/weak_solver.hpp"

using namespace pxlap;

namespace {

DirichletProblem problem(const Domain& d, const ScalarField& g, const ExponentSpec& p) {
    return DirichletProblem{GridFunction::sample(d, g), make_exponent(p, d), "test"};
}

}  // namespace

TEST_CASE("delta ladder") {
    const auto l = delta_ladder(SolverConfig{});
    REQUIRE(l.size() == 7);
    CHECK(l.front() == doctest::Approx(1e-2));
    CHECK(l.back() == doctest::Approx(1e-8));
}

TEST_CASE("affine functions have zero nodal residual for any exponent") {
    const Domain d = Domain::box({0.0, 0.0}, {1.0, 1.0}, {17, 13});
    const auto u = GridFunction::sample(d, [](const Point& x) { return 0.3 + 1.5 * x[0] - 0.7 * x[1]; });
    ExponentConfig e;
    e.kind = "sine";
    e.base = 1.75;
    e.amplitude = 0.25;
    e.frequency = 2.0;
    const ExponentField p = make_exponent_field(e, d);
    for (double delta : {0.0, 1e-4}) {
        const GridFunction r = nodal_residual(u, p, delta);
        for (std::size_t k : u.interior_nodes()) CHECK(std::abs(r[k]) < 1e-11);
    }
}

TEST_CASE("weak solver reproduces affine data") {
    const Domain d = Domain::line(0.0, 1.0, 64);
    const auto prob = problem(d, [](const Point& x) { return 2.0 * x[0] - 1.0; },
                              ExponentSpec::affine_field(1.2, {0.3}));
    const auto res = solve(prob);
    CHECK(sup_difference(res.u, prob.data) < 1e-10);
    CHECK(res.weak_residual < 1e-10);
}

TEST_CASE("p = 2 reduces to the discrete Laplace equation") {
    const Domain d = Domain::box({0.0, 0.0}, {1.0, 1.0}, {15, 15});
    const auto prob = problem(d, [](const Point& x) { return std::exp(x[0]) * std::cos(x[1]); },
                              ExponentSpec::constant_value(2.0));
    const auto res = solve(prob);
    const GridFunction harm = harmonic_extension(prob);
    CHECK(sup_difference(res.u, harm) < 1e-9);
    // exact harmonic data: second-order error
    CHECK(sup_difference(res.u, prob.data) < 0.05 * d.spacing(0) * d.spacing(0));
}

TEST_CASE("weak residual against a hat equals h^N times the nodal residual") {
    const Domain d = Domain::box({0.0, 0.0}, {1.0, 1.0}, {9, 9});
    const auto u = GridFunction::sample(d, [](const Point& x) { return x[0] * x[0] + std::sin(x[1]) + 0.5 * x[0]; });
    const ExponentField p = make_exponent(ExponentSpec::affine_field(2.5, {0.5, -0.3}), d);
    const GridFunction r = nodal_residual(u, p, 0.0);
    const double vol = d.spacing(0) * d.spacing(1);
    for (std::size_t k : {d.flat({3, 4}), d.flat({1, 1}), d.flat({9, 5})}) {
        const auto phi = test_function(u, TestFamily::hat, k);
        REQUIRE(phi);
        CHECK(discrete_weak_residual(u, p, *phi) == doctest::Approx(vol * r[k]).epsilon(1e-10));
    }
    GridFunction bad(d);
    bad[0] = 1.0;
    CHECK_THROWS_WITH_AS(discrete_weak_residual(u, p, bad), "test function must vanish on boundary nodes",
                         std::invalid_argument);
}

TEST_CASE("hat norm in one dimension") {
    const Domain d = Domain::line(0.0, 1.0, 9);
    const GridFunction like(d);
    const auto phi = test_function(like, TestFamily::hat, 4);
    REQUIRE(phi);
    // sum h|phi| = h, two edges with |dphi|/h * h = 1 each
    CHECK(test_function_norm(*phi) == doctest::Approx(d.spacing(0) + 2.0));
    CHECK_FALSE(test_function(like, TestFamily::bump, 1));
}

TEST_CASE("kink residual is the flux jump") {
    const Domain d = Domain::line(0.0, 1.0, 63);
    const auto u = GridFunction::sample(d, [](const Point& x) { return std::abs(x[0] - 0.5); });
    const ExponentField p = make_exponent(ExponentSpec::constant_value(2.0), d);
    const auto rep = audit_supersolution(u, p, TestFamily::hat, 1e-12);
    const double h = d.spacing(0);
    CHECK(rep.min_value == doctest::Approx(-2.0 / (h + 2.0)));
    CHECK(rep.violations == 1);
    CHECK(rep.max_value <= 1e-12);
}
