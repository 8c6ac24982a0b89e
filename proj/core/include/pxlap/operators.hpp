#pragma once

// Pointwise operators of the normalized and strong p(x)-Laplacians and the
// algebraic inequalities behind the equivalence of their solutions.
//
// Sign convention: an equation residual is always -(operator). Concretely
//   normalized_pxlap  returns F(x, eta, X) = -(tr X + (p-2)/|eta|^2 <X eta, eta>),
//                     so a supersolution has F >= 0;
//   regularized_op    returns the operator itself, without the minus;
//   trace_form        returns tr(A X), which equals -|eta|^2 F.
//
// "scale" in tolerances is max(1, the magnitudes of the terms being
// compared); each function documents its own.

#include <string>

#include "pxlap/grid.hpp"

namespace pxlap {

struct OperatorSample {
    Point x;
    Jet jet;
    double p = 2.0;
    Vector dp;
    double delta = 0.0;
};

struct AMatrix {
    Matrix entries;
    double min_eigenvalue() const;
};

struct Pair {
    double first = 0.0;
    double second = 0.0;
};

/// F(x, eta, X). Throws std::domain_error when eta = 0.
double normalized_pxlap(const OperatorSample& s);

/// |eta|^{p-2} eta, extended by 0 at eta = 0.
Vector strong_flux(const Vector& eta, double p);

/// |eta|^{p-2} log|eta| (eta . dp), extended by 0 at eta = 0.
double log_drift(const Vector& eta, double p, const Vector& dp);

/// first  = -|eta|^{p-2} * (normalized operator), i.e. |eta|^{p-2} F;
/// second = -(expanded divergence of |Du|^{p-2} Du) + log_drift.
/// Both built from (eta, X, p, dp); they agree when eta != 0.
Pair strong_nondivergence_identity(const OperatorSample& s);

/// (delta + |eta|^2)^{(p-2)/2} (tr X + (p-2)/(delta + |eta|^2) <X eta, eta>).
/// Throws std::domain_error when delta = 0 and eta = 0.
double regularized_op(const OperatorSample& s);

/// |eta|^2 I + (p-2) eta (x) eta.
AMatrix a_matrix(const Vector& eta, double p);

/// first = tr(A(eta) X), second = |eta|^2 tr X + (p-2) <X eta, eta>.
Pair trace_form_identity(const OperatorSample& s);

/// first  = (|a|^{p-2} a - |b|^{p-2} b) . (a - b)
/// second = (p-1)|a-b|^2 (1+|a|^2+|b|^2)^{(p-2)/2}  if p < 2
///          2^{2-p} |a-b|^p                          otherwise
/// Scale: max(1, |a|^p + |b|^p).
Pair monotonicity_gap(const Vector& a, const Vector& b, double p);

/// first  = | |a|^{p-2} a - |b|^{p-2} b |
/// second = 2^{2-p} |a-b|^{p-1}                      if p < 2
///          2^{-1} (|a|^{p-2} + |b|^{p-2}) |a-b|     otherwise
/// Scale: max(1, |a|^{p-1} + |b|^{p-1}).
Pair continuity_gap(const Vector& a, const Vector& b, double p);

/// The p >= 2 branch of continuity_gap with the constant (p-1) in place of
/// 2^{-1}, which is what the mean value theorem gives. Diagnostic only.
Pair continuity_gap_mean_value(const Vector& a, const Vector& b, double p);

struct LogInequalityCheck {
    // a^s log a <= n a^{s + 1/n} + 1/s
    double dimensional_lhs = 0.0;
    double dimensional_rhs = 0.0;
    bool dimensional_holds = true;
    // a^s |log a| <= a^{s + 1/2} + 1/s
    double half_lhs = 0.0;
    double half_rhs = 0.0;
    bool half_holds = true;
};

/// Requires a > 0, s > 0, n >= 2. Comparison slack 1e-12 * max(1, rhs).
LogInequalityCheck log_inequalities(double a, double s, int n);

}  // namespace pxlap
