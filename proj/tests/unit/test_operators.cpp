#include <doctest.h>

#include <cmath>
#include <random>

#include "pxlap/operators.hpp"

using namespace pxlap;

namespace {

Vector vec(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

OperatorSample sample(const Vector& eta, const Matrix& X, double p, const Vector& dp) {
    OperatorSample s;
    s.x = Vector::Zero(eta.size());
    s.jet = {eta, X};
    s.p = p;
    s.dp = dp;
    return s;
}

// -div(|Du|^{p(y)-2} Du) + |Du|^{p-2} log|Du| Du.Dp at y = 0 by centered
// differences of the flux of the quadratic with this jet and the affine p.
double fd_strong_operator(const OperatorSample& s) {
    auto grad = [&](const Vector& y) { Vector g = s.jet.eta + s.jet.hess * y; return g; };
    auto pat = [&](const Vector& y) { return s.p + s.dp.dot(y); };
    auto flux = [&](const Vector& y) {
        const Vector g = grad(y);
        return Vector(std::pow(g.norm(), pat(y) - 2.0) * g);
    };
    const double h = 1e-5;
    double div = 0.0;
    for (int a = 0; a < 2; ++a) {
        Vector e = Vector::Zero(2);
        e[a] = h;
        div += (flux(e)[a] - flux(-e)[a]) / (2.0 * h);
    }
    return -div + log_drift(s.jet.eta, s.p, s.dp);
}

}  // namespace

TEST_CASE("normalized operator at p = 2 is minus the trace") {
    Matrix X(2, 2);
    X << 1.0, 0.3, 0.3, -4.0;
    CHECK(normalized_pxlap(sample(vec(0.2, 0.7), X, 2.0, vec(0, 0))) == doctest::Approx(3.0));
    CHECK_THROWS_AS(normalized_pxlap(sample(vec(0, 0), X, 2.0, vec(0, 0))), std::domain_error);
}

TEST_CASE("normalized operator on a one-dimensional direction") {
    // X = e1 e1^T, eta along e1: F = -(1 + (p - 2)) = 1 - p
    Matrix X = Matrix::Zero(2, 2);
    X(0, 0) = 1.0;
    CHECK(normalized_pxlap(sample(vec(3.0, 0.0), X, 3.5, vec(0, 0))) == doctest::Approx(-2.5));
}

TEST_CASE("a_matrix examples") {
    const AMatrix a = a_matrix(vec(1.0, 0.0), 3.0);
    CHECK(a.entries(0, 0) == doctest::Approx(2.0));
    CHECK(a.entries(1, 1) == doctest::Approx(1.0));
    CHECK(a.entries(0, 1) == doctest::Approx(0.0));
    CHECK(a.min_eigenvalue() == doctest::Approx(1.0));
    // p - 1 times |eta|^2 along eta when p < 2
    CHECK(a_matrix(vec(0.0, 2.0), 1.5).min_eigenvalue() == doctest::Approx(2.0));
}

TEST_CASE("log drift examples") {
    const double e = std::exp(1.0);
    CHECK(log_drift(vec(e, 0.0), 3.0, vec(1.0, 0.0)) == doctest::Approx(e * e));
    CHECK(log_drift(vec(0.0, 0.0), 1.5, vec(1.0, 1.0)) == 0.0);
    CHECK(log_drift(vec(0.6, 0.8), 1.7, vec(2.0, -3.0)) == doctest::Approx(0.0));
}

TEST_CASE("strong and normalized forms agree with a finite-difference divergence") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::uniform_real_distribution<double> P(1.2, 4.0);
    for (int t = 0; t < 50; ++t) {
        Matrix X(2, 2);
        const double off = U(rng);
        X << U(rng), off, off, U(rng);
        Vector eta = vec(U(rng), U(rng));
        if (eta.norm() < 0.2) eta *= 0.2 / eta.norm() + 1.0;
        const auto s = sample(eta, X, P(rng), vec(U(rng), U(rng)));
        const Pair id = strong_nondivergence_identity(s);
        const double fd = fd_strong_operator(s);
        const double scale = std::max(1.0, std::abs(fd));
        CHECK(std::abs(id.second - fd) <= 1e-6 * scale);
        CHECK(std::abs(id.first - fd) <= 1e-6 * scale);
    }
}

TEST_CASE("trace form equals -|eta|^2 F") {
    Matrix X(2, 2);
    X << 0.5, -0.2, -0.2, 1.5;
    const auto s = sample(vec(0.3, -1.1), X, 2.7, vec(0, 0));
    const Pair t = trace_form_identity(s);
    CHECK(t.first == doctest::Approx(t.second));
    CHECK(t.first == doctest::Approx(-s.jet.eta.squaredNorm() * normalized_pxlap(s)));
}

TEST_CASE("regularized operator tends to the strong operator") {
    Matrix X(2, 2);
    X << 1.0, 0.2, 0.2, -0.5;
    const auto s0 = sample(vec(0.8, 0.4), X, 1.6, vec(0, 0));
    auto s = s0;
    s.delta = 1e-12;
    const double strong = -std::pow(s0.jet.eta.norm(), s0.p - 2.0) * normalized_pxlap(s0);
    CHECK(regularized_op(s) == doctest::Approx(strong).epsilon(1e-9));
    auto z = sample(vec(0, 0), X, 1.6, vec(0, 0));
    CHECK_THROWS_AS(regularized_op(z), std::domain_error);
}

TEST_CASE("vector inequalities: equality cases") {
    const Vector a = vec(0.3, -0.4);
    for (double p : {1.3, 2.0, 3.5}) {
        CHECK(monotonicity_gap(a, a, p).first == 0.0);
        CHECK(continuity_gap(a, a, p).first == 0.0);
    }
    const Vector b = vec(-1.0, 2.0);
    const Pair m = monotonicity_gap(a, b, 2.0);
    CHECK(m.first == doctest::Approx((a - b).squaredNorm()));
    CHECK(m.second == doctest::Approx(m.first));
}

TEST_CASE("printed p >= 2 continuity constant fails on a simple pair") {
    // a = (1,0), b = 0, p = 3: lhs = 1, rhs = 1/2 * (1 + 0) * 1
    const Pair c = continuity_gap(vec(1.0, 0.0), vec(0.0, 0.0), 3.0);
    CHECK(c.first == doctest::Approx(1.0));
    CHECK(c.second == doctest::Approx(0.5));
    const Pair mv = continuity_gap_mean_value(vec(1.0, 0.0), vec(0.0, 0.0), 3.0);
    CHECK(mv.first <= mv.second);
}

TEST_CASE("log inequalities on a parameter sweep") {
    for (double a : {1e-8, 0.01, 0.5, 1.0, 3.0, 1e4}) {
        for (double s : {0.05, 0.5, 2.0}) {
            for (int n : {2, 3}) {
                const auto r = log_inequalities(a, s, n);
                CHECK(r.dimensional_holds);
                CHECK(r.half_holds);
            }
        }
    }
    CHECK_THROWS(log_inequalities(0.0, 1.0, 2));
}
