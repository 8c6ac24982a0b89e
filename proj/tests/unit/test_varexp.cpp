#include <doctest.h>

#include <cmath>
#include <random>

#include "pxlap/varexp.hpp"

using namespace pxlap;

namespace {

// Independent Luxemburg norm: bisection in log(lambda) on the weighted sum.
double reference_norm(const GridFunction& u, const ExponentField& p) {
    const Domain& d = u.domain();
    auto rho = [&](double lam) {
        double s = 0.0;
        for (std::size_t k = 0; k < u.size(); ++k) {
            s += quadrature_weight(d, k) * std::pow(std::abs(u[k]) / lam, p(d.point(k)));
        }
        return s;
    };
    double lo = -60.0, hi = 60.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (rho(std::exp(mid)) > 1.0 ? lo : hi) = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

}  // namespace

TEST_CASE("constant function norm is c |Omega|^{1/p}") {
    const Domain d = Domain::box({0.0, 0.0}, {2.0, 1.5}, {10, 10});
    const ExponentField p = make_exponent(ExponentSpec::constant_value(3.0), d);
    const auto u = GridFunction::sample(d, [](const Point&) { return -0.7; });
    CHECK(modular(u, p) == doctest::Approx(std::pow(0.7, 3.0) * 3.0).epsilon(1e-13));
    CHECK(luxemburg_norm(u, p) == doctest::Approx(0.7 * std::cbrt(3.0)).epsilon(1e-11));
}

TEST_CASE("variable exponent norm matches a scalar root finder") {
    const Domain d = Domain::box({0.0, 0.0}, {1.0, 1.0}, {12, 12});
    const ExponentField p = make_exponent(ExponentSpec::affine_field(1.5, {1.0, 0.5}), d);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    for (int t = 0; t < 5; ++t) {
        GridFunction u(d);
        for (std::size_t k = 0; k < u.size(); ++k) u[k] = U(rng);
        const double n = luxemburg_norm(u, p);
        CHECK(n == doctest::Approx(reference_norm(u, p)).epsilon(1e-10));
        GridFunction s = u;
        for (std::size_t k = 0; k < s.size(); ++k) s[k] /= n;
        CHECK(modular(s, p) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("norm-modular bracket and Hoelder pairing") {
    const Domain d = Domain::box({0.0, 0.0}, {1.0, 1.0}, {10, 10});
    const ExponentField p = make_exponent(ExponentSpec::affine_field(1.3, {1.2, 0.8}), d);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (double scale : {0.01, 1.0, 50.0}) {
        GridFunction u(d), v(d);
        for (std::size_t k = 0; k < u.size(); ++k) {
            u[k] = scale * U(rng);
            v[k] = U(rng) / scale;
        }
        const ModularReport m = check_norm_modular(u, p);
        CHECK_FALSE(m.violated);
        CHECK(m.norm >= m.lower_bound * (1.0 - 1e-9));
        CHECK(m.norm <= m.upper_bound * (1.0 + 1e-9));
        const HolderPair h = holder_pairing(u, v, p);
        CHECK(h.lhs <= h.rhs);
    }
}

TEST_CASE("zero function") {
    const Domain d = Domain::line(0.0, 1.0, 5);
    const ExponentField p = make_exponent(ExponentSpec::constant_value(2.0), d);
    const GridFunction z(d);
    CHECK(luxemburg_norm(z, p) == 0.0);
    CHECK(check_norm_modular(z, p).degenerate);
}
