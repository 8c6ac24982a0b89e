#include <doctest.h>

#include <cmath>

#include "pxlap/experiments.hpp"
#include "pxlap/infconv.hpp"

using namespace pxlap;

namespace {

GridFunction sampled(const Domain& d, double (*f)(double, double)) {
    return GridFunction::sample(d, [f](const Point& x) { return f(x[0], x.size() > 1 ? x[1] : 0.0); });
}

double absx(double x, double) { return std::abs(x); }
double wave(double x, double y) { return std::sin(3.0 * x) * std::cos(2.0 * y); }

}  // namespace

TEST_CASE("penalty and search radius") {
    const InfConvConfig c = make_infconv_config(0.1, 3.0, 2.0);
    CHECK(c.penalty(0.0) == 0.0);
    CHECK(c.penalty(0.2) == doctest::Approx(std::pow(0.2, 3.0) / (3.0 * 0.01)));
    // the penalty at r(eps) equals the oscillation
    CHECK(c.penalty(c.r_eps) == doctest::Approx(2.0));
    CHECK_THROWS_AS(make_infconv_config(0.0, 2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_infconv_config(0.1, 1.5, 1.0), std::invalid_argument);
}

TEST_CASE("q = 2 envelope of |x| is the Huber function") {
    const Domain d = Domain::line(-1.0, 1.0, 399);
    const GridFunction u = sampled(d, absx);
    for (double eps : {0.1, 0.05, 0.025}) {
        const InfConvResult r = inf_convolve(u, eps, 2.0);
        double gap_far = 0.0;
        for (std::size_t k : u.interior_nodes()) {
            const double x = d.point(k)[0];
            CHECK(r.u_eps[k] == doctest::Approx(huber(x, eps)).epsilon(1e-12));
            if (std::abs(x) >= eps) gap_far = std::max(gap_far, std::abs(u[k] - r.u_eps[k]));
        }
        CHECK(gap_far == doctest::Approx(eps / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("ball search agrees with a brute-force global minimum") {
    const Domain d = Domain::box({0.0, 0.0}, {1.0, 1.0}, {23, 23});
    const GridFunction u = sampled(d, wave);
    for (double q : {2.0, 3.0}) {
        const InfConvResult r = inf_convolve(u, 0.05, q);
        for (std::size_t k = 0; k < u.size(); ++k) {
            double best = 1e300;
            for (std::size_t y = 0; y < u.size(); ++y) {
                best = std::min(best, u[y] + r.config.penalty((d.point(k) - d.point(y)).norm()));
            }
            CHECK(r.u_eps[k] == doctest::Approx(best).epsilon(1e-14));
        }
    }
}

TEST_CASE("envelopes increase as epsilon decreases") {
    const Domain d = Domain::box({0.0, 0.0}, {1.0, 1.0}, {31, 31});
    const GridFunction u = sampled(d, wave);
    const auto a = inf_convolve(u, 0.1, 2.0).u_eps;
    const auto b = inf_convolve(u, 0.05, 2.0).u_eps;
    for (std::size_t k = 0; k < u.size(); ++k) {
        CHECK(a[k] <= b[k]);
        CHECK(b[k] <= u[k]);
    }
}

TEST_CASE("degenerate cases") {
    const Domain d = Domain::line(0.0, 1.0, 20);
    const auto c = GridFunction::sample(d, [](const Point&) { return 2.0; });
    const auto rc = inf_convolve(c, 0.1, 2.0);
    CHECK(rc.warnings.empty());
    CHECK(sup_difference(rc.u_eps, c) == 0.0);

    // r(eps) below h: nothing to search
    const GridFunction u = sampled(d, absx);
    const auto ru = inf_convolve(u, 1e-6, 2.0);
    REQUIRE(ru.warnings.size() == 1);
    CHECK(ru.warnings[0] == "grid cannot resolve search radius");
    CHECK(sup_difference(ru.u_eps, u) == 0.0);

    const ExponentField p = make_exponent(ExponentSpec::constant_value(2.0), d);
    CHECK_THROWS_WITH_AS(supersolution_defect(c, p, 0.1, 2.0), "no admissible probe points", std::runtime_error);
}

TEST_CASE("inset nodes stay away from the boundary") {
    const Domain d = Domain::line(0.0, 1.0, 19);
    const GridFunction u(d);
    const auto in = inset_nodes(u, 0.2);
    REQUIRE_FALSE(in.empty());
    for (std::size_t k : in) {
        const double x = d.point(k)[0];
        CHECK(x > 0.2);
        CHECK(x < 0.8);
    }
    CHECK(inset_nodes(u, 0.6).empty());
}

TEST_CASE("properties hold on a smooth base") {
    const Domain d = Domain::box({0.0, 0.0}, {1.0, 1.0}, {47, 47});
    const GridFunction u = sampled(d, wave);
    for (double eps : {0.1, 0.05}) {
        const auto rep = verify_properties(u, inf_convolve(u, eps, 2.0));
        INFO(rep.to_json().dump());
        CHECK(rep.passed());
        CHECK(rep.max_excess <= 0.0);
        CHECK(rep.max_offset <= rep.r_eps * (1.0 + 1e-12));
    }
}

TEST_CASE("sampled modulus") {
    const Domain d = Domain::line(0.0, 1.0, 9);
    const auto u = GridFunction::sample(d, [](const Point& x) { return 3.0 * x[0]; });
    CHECK(sampled_modulus(u, 0.1) == doctest::Approx(0.3));
    CHECK(sampled_modulus(u, 0.25) == doctest::Approx(0.6));
}
