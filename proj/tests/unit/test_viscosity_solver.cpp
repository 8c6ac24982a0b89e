#include <doctest.h>

#include <cmath>

#include "pxlap/viscosity_solver.hpp"

using namespace pxlap;

TEST_CASE("explicit step size") {
    const Domain d = Domain::box({0.0, 0.0}, {1.0, 1.0}, {9, 9});
    const ExponentField p = make_exponent(ExponentSpec::affine_field(3.0, {1.0, 0.0}), d);
    const double h = d.spacing(0);
    CHECK(relaxation_step(d, p, 0.9) == doctest::Approx(0.9 * h * h / (2.0 * (2.0 + 2.0))));
    const ExponentField q = make_exponent(ExponentSpec::constant_value(1.5), d);
    CHECK(relaxation_step(d, q, 0.9) == doctest::Approx(0.9 * h * h / 4.0));
}

TEST_CASE("p = 2 step is the explicit heat step") {
    const Domain d = Domain::box({0.0, 0.0}, {1.0, 1.0}, {11, 11});
    const auto u = GridFunction::sample(d, [](const Point& x) { return std::sin(2.0 * x[0]) + x[1] * x[1] * x[0]; });
    const ExponentField p = make_exponent(ExponentSpec::constant_value(2.0), d);
    const double tau = relaxation_step(d, p, 0.9);
    const GridFunction v = relax_step(u, p, 1e-8, tau);
    for (std::size_t k : u.interior_nodes()) {
        const NodeIndex i = d.unflat(k);
        const Matrix X = hessian_centered(u, i);
        CHECK(v[k] == doctest::Approx(u[k] + tau * (X(0, 0) + X(1, 1))).epsilon(1e-13));
    }
}

TEST_CASE("relaxation reproduces affine data") {
    const Domain d = Domain::line(0.0, 1.0, 32);
    const auto g = GridFunction::sample(d, [](const Point& x) { return 1.0 - 3.0 * x[0]; });
    const DirichletProblem prob{g, make_exponent(ExponentSpec::affine_field(1.5, {2.0}), d), "affine"};
    const auto res = relax(prob);
    CHECK(sup_difference(res.u, g) < 1e-10);
}

TEST_CASE("viscosity residual examples") {
    const Domain d = Domain::box({-1.0, -1.0}, {1.0, 1.0}, {15, 15});
    const auto u = GridFunction::sample(d, [](const Point& x) { return x.squaredNorm(); });
    const ExponentField p = make_exponent(ExponentSpec::constant_value(2.0), d);
    const auto rep = viscosity_residual(u, p, 0.1);
    REQUIRE_FALSE(rep.values.empty());
    for (double v : rep.values) CHECK(v == doctest::Approx(-4.0));
    CHECK(rep.super_defect == doctest::Approx(4.0));
    CHECK(rep.sub_defect == 0.0);
    // the centre node has zero gradient and is skipped
    CHECK(rep.skipped >= 1);
    CHECK_THROWS(viscosity_residual(u, p, 0.0));

    // |x|^2 with p = 4: tr X = 4, <X eta, eta>/|eta|^2 = 2, F = -(4 + 2 * 2)
    const ExponentField p4 = make_exponent(ExponentSpec::constant_value(4.0), d);
    for (double v : viscosity_residual(u, p4, 0.1).values) CHECK(v == doctest::Approx(-8.0));
}
