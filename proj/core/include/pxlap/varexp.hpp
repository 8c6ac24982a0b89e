#pragma once

// Variable-exponent Lebesgue quantities on grid functions: the modular
// int |u|^p(x), the Luxemburg norm, the norm-modular bracket and the
// Hoelder pairing. All integrals use the trapezoidal rule of grid.hpp, so
// every statement here is about the discrete (quadrature) measure.

#include <functional>

#include "pxlap/exponent.hpp"
#include "pxlap/grid.hpp"

namespace pxlap {

struct ModularReport {
    double modular = 0.0;
    double norm = 0.0;
    double lower_bound = 0.0;
    double upper_bound = 0.0;
    /// True when the norm escapes [lower_bound, upper_bound] by more than 1e-9.
    bool violated = false;
    /// Zero modular: all fields zero.
    bool degenerate = false;
};

struct HolderPair {
    double lhs = 0.0;
    double rhs = 0.0;
};

double modular(const GridFunction& u, const ExponentField& p);

/// inf{lambda > 0 : modular(u / lambda) <= 1} by bisection; relative bracket
/// width below 1e-12 on exit. Returns 0 for u == 0.
double luxemburg_norm(const GridFunction& u, const ExponentField& p);

/// Same, for an exponent given pointwise (used for the conjugate p').
double luxemburg_norm(const GridFunction& u, const std::function<double(const Point&)>& p);

ModularReport check_norm_modular(const GridFunction& u, const ExponentField& p);

/// lhs = int |u||v|, rhs = 2 ||u||_{p} ||v||_{p'} with p' = p/(p-1).
HolderPair holder_pairing(const GridFunction& u, const GridFunction& v, const ExponentField& p);

}  // namespace pxlap
