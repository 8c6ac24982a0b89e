#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "pxlap/exponent.hpp"
#include "pxlap/function_spec.hpp"
#include "pxlap/infconv.hpp"

using namespace pxlap;

namespace {

// Dense scan of an exponent over a box, independent of the certifier.
std::pair<double, double> scan(const ExponentField& p, const Domain& d, int m) {
    double lo = 1e300, hi = -1e300;
    Point x(d.dim());
    for (int j = 0; j <= (d.dim() == 2 ? m : 0); ++j) {
        for (int i = 0; i <= m; ++i) {
            x[0] = d.lower(0) + (d.upper(0) - d.lower(0)) * i / m;
            if (d.dim() == 2) x[1] = d.lower(1) + (d.upper(1) - d.lower(1)) * j / m;
            lo = std::min(lo, p(x));
            hi = std::max(hi, p(x));
        }
    }
    return {lo, hi};
}

}  // namespace

TEST_CASE("affine exponent has exact bounds") {
    const Domain d = Domain::box({0.0, 0.0}, {1.0, 1.0}, {8, 8});
    const ExponentField p = make_exponent(ExponentSpec::affine_field(1.2, {0.3, 0.2}), d);
    CHECK(p.p_minus() == doctest::Approx(1.2));
    CHECK(p.p_plus() == doctest::Approx(1.7));
    Point x(2);
    x << 0.5, 0.25;
    CHECK(p.gradient(x)[0] == doctest::Approx(0.3));
    CHECK(p.gradient(x)[1] == doctest::Approx(0.2));
}

TEST_CASE("closure bounds enclose a dense scan") {
    const Domain d = Domain::box({0.0, 0.0}, {1.0, 1.0}, {16, 16});
    ExponentConfig e;
    e.kind = "sine";
    e.base = 1.75;
    e.amplitude = 0.25;
    e.frequency = 2.0;
    const ExponentField p = make_exponent_field(e, d);
    const auto [lo, hi] = scan(p, d, 2000);
    CHECK(p.p_minus() <= lo);
    CHECK(p.p_plus() >= hi);
    CHECK(lo - p.p_minus() < 0.01);
    CHECK(p.p_plus() - hi < 0.01);
}

TEST_CASE("exponents touching 1 are rejected") {
    const Domain d = Domain::line(0.0, 1.0, 8);
    CHECK_THROWS_AS(make_exponent(ExponentSpec::affine_field(1.0, {0.5}), d), std::invalid_argument);
    CHECK_THROWS_AS(make_exponent(ExponentSpec::constant_value(0.9), d), std::invalid_argument);
}

TEST_CASE("mollification reproduces affine exponents and keeps bounds") {
    const Domain d = Domain::box({0.0, 0.0}, {1.0, 1.0}, {8, 8});
    const ExponentField p = make_exponent(ExponentSpec::affine_field(2.0, {0.5, -0.25}), d);
    const MollifiedExponent m(p, 0.1);
    Point x(2);
    x << 0.4, 0.6;
    CHECK(m.eval(x) == doctest::Approx(p(x)).epsilon(1e-12));
    CHECK(m.gradient(x)[0] == doctest::Approx(0.5).epsilon(1e-12));

    ExponentConfig k;
    k.kind = "kink";
    k.base = 2.0;
    k.slope = 0.5;
    k.center = {0.5, 0.5};
    const ExponentField pk = make_exponent_field(k, d);
    const MollifiedExponent mk(pk, 0.05);
    x << 0.5, 0.3;
    CHECK(mk.eval(x) > pk(x));
    CHECK(mk.eval(x) <= pk.p_plus());
}

TEST_CASE("q_min threshold") {
    CHECK(q_min(1.5) == doctest::Approx(3.0));
    CHECK(q_min(2.0) == 2.0);
    CHECK(q_min(4.0) == 2.0);
    // p- - 2 + (q-2)/(q-1) vanishes at q_min
    const double q = q_min(1.25);
    CHECK(1.25 - 2.0 + (q - 2.0) / (q - 1.0) == doctest::Approx(0.0).epsilon(1e-14));
}
