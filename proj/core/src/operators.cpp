#include "pxlap/operators.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace pxlap {

namespace {

void require_p(double p) {
    if (!(p > 1.0)) throw std::invalid_argument("exponent must satisfy p > 1");
}

}  // namespace

double AMatrix::min_eigenvalue() const {
    if (entries.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(entries, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double normalized_pxlap(const OperatorSample& s) {
    const Vector& eta = s.jet.eta;
    const double n2 = eta.squaredNorm();
    if (n2 == 0.0) throw std::domain_error("gradient vanishes; F undefined");
    const Matrix& X = s.jet.hess;
    return -(X.trace() + (s.p - 2.0) / n2 * eta.dot(X * eta));
}

Vector strong_flux(const Vector& eta, double p) {
    require_p(p);
    const double n = eta.norm();
    if (n == 0.0) return Vector::Zero(eta.size());
    return std::pow(n, p - 2.0) * eta;
}

double log_drift(const Vector& eta, double p, const Vector& dp) {
    require_p(p);
    const double n = eta.norm();
    if (n == 0.0) return 0.0;
    return std::pow(n, p - 2.0) * std::log(n) * eta.dot(dp);
}

Pair strong_nondivergence_identity(const OperatorSample& s) {
    const Vector& eta = s.jet.eta;
    const Matrix& X = s.jet.hess;
    const double n = eta.norm();
    if (n == 0.0) throw std::domain_error("gradient vanishes; identity undefined");
    const double w = std::pow(n, s.p - 2.0);

    Pair out;
    out.first = w * normalized_pxlap(s);

    // Jacobian of the flux field y -> |Du(y)|^{p(y)-2} Du(y) at x, by the
    // product rule on |Du|^{p-2} = exp((p-2) log|Du|).
    const Vector x_eta = X * eta;
    const Matrix jac = w * (X + (s.p - 2.0) / (n * n) * eta * x_eta.transpose() +
                            std::log(n) * eta * s.dp.transpose());
    out.second = -jac.trace() + log_drift(eta, s.p, s.dp);
    return out;
}

double regularized_op(const OperatorSample& s) {
    const Vector& eta = s.jet.eta;
    const double m = s.delta + eta.squaredNorm();
    if (m == 0.0) throw std::domain_error("regularized operator needs delta > 0 or eta != 0");
    const Matrix& X = s.jet.hess;
    return std::pow(m, 0.5 * (s.p - 2.0)) * (X.trace() + (s.p - 2.0) / m * eta.dot(X * eta));
}

AMatrix a_matrix(const Vector& eta, double p) {
    const auto n = eta.size();
    AMatrix a;
    a.entries = eta.squaredNorm() * Matrix::Identity(n, n) + (p - 2.0) * eta * eta.transpose();
    return a;
}

Pair trace_form_identity(const OperatorSample& s) {
    const Vector& eta = s.jet.eta;
    const Matrix& X = s.jet.hess;
    Pair out;
    out.first = (a_matrix(eta, s.p).entries * X).trace();
    out.second = eta.squaredNorm() * X.trace() + (s.p - 2.0) * eta.dot(X * eta);
    return out;
}

Pair monotonicity_gap(const Vector& a, const Vector& b, double p) {
    require_p(p);
    const Vector diff = a - b;
    Pair out;
    out.first = (strong_flux(a, p) - strong_flux(b, p)).dot(diff);
    const double d = diff.norm();
    if (p < 2.0) {
        out.second = (p - 1.0) * d * d *
                     std::pow(1.0 + a.squaredNorm() + b.squaredNorm(), 0.5 * (p - 2.0));
    } else {
        out.second = std::pow(2.0, 2.0 - p) * std::pow(d, p);
    }
    return out;
}

Pair continuity_gap(const Vector& a, const Vector& b, double p) {
    require_p(p);
    Pair out;
    out.first = (strong_flux(a, p) - strong_flux(b, p)).norm();
    const double d = (a - b).norm();
    if (p < 2.0) {
        out.second = std::pow(2.0, 2.0 - p) * std::pow(d, p - 1.0);
    } else {
        out.second = 0.5 * (std::pow(a.norm(), p - 2.0) + std::pow(b.norm(), p - 2.0)) * d;
    }
    return out;
}

Pair continuity_gap_mean_value(const Vector& a, const Vector& b, double p) {
    require_p(p);
    Pair out = continuity_gap(a, b, p);
    if (p >= 2.0) {
        out.second = (p - 1.0) * (std::pow(a.norm(), p - 2.0) + std::pow(b.norm(), p - 2.0)) *
                     (a - b).norm();
    }
    return out;
}

LogInequalityCheck log_inequalities(double a, double s, int n) {
    if (!(a > 0.0) || !(s > 0.0)) throw std::invalid_argument("log inequalities need a, s > 0");
    if (n < 2) throw std::invalid_argument("log inequalities need n >= 2");
    LogInequalityCheck c;
    const double as = std::pow(a, s);
    const double la = std::log(a);
    c.dimensional_lhs = as * la;
    c.dimensional_rhs = n * std::pow(a, s + 1.0 / n) + 1.0 / s;
    c.half_lhs = as * std::abs(la);
    c.half_rhs = std::pow(a, s + 0.5) + 1.0 / s;
    auto holds = [](double lhs, double rhs) { return lhs <= rhs + 1e-12 * std::max(1.0, rhs); };
    c.dimensional_holds = holds(c.dimensional_lhs, c.dimensional_rhs);
    c.half_holds = holds(c.half_lhs, c.half_rhs);
    return c;
}

}  // namespace pxlap
