#pragma once

// Divergence-form solver for
//     -div(|Du|^{p-2} Du) + |Du|^{p-2} log|Du| Du.Dp = 0
// with Dirichlet data, and the weak-residual auditor.
//
// Scheme. Fluxes live on grid edges: the edge gradient takes the plain
// difference along the edge and, in 2D, the average of the two nodal
// centered differences across it. The coefficient is
//     c_e = (delta + |g_e|^2)^{(p(x_e)-2)/2},  x_e the edge midpoint.
// The drift is collocated at nodes through a discrete chain rule,
//     b_k = [m^{(p(x + h_k e_k/2)-2)/2} - m^{(p(x - h_k e_k/2)-2)/2}] / h_k,
//     m = delta + |Du(x)|^2 (centered),
// multiplied by the centered difference of u along axis k. For affine u all
// gradients coincide and the flux differences cancel the drift exactly, so
// affine data are reproduced up to rounding for every exponent.
//
// Nodal residual (the sign convention is -(operator)):
//     R_i = sum_k [ -c_+ (u_+ - u_i) + c_- (u_i - u_-) ] / h_k^2 + sum_k b_k D_k u.
// With delta = 0 this is the weak residual against the hat at node i divided
// by the cell volume h^N.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pxlap/exponent.hpp"
#include "pxlap/fuzz.hpp"
#include "pxlap/grid.hpp"

namespace pxlap {

struct DirichletProblem {
    /// Values at every node (interior values are ignored; boundary and
    /// exterior nodes carry the data). Node kinds define the domain.
    GridFunction data;
    ExponentField p;
    std::string label;

    const Domain& domain() const { return data.domain(); }
};

struct SolverConfig {
    double delta_initial = 1e-2;
    double delta_final = 1e-8;
    double delta_factor = 10.0;
    /// Stopping tolerance on the sup-change at the final delta.
    double picard_tol = 1e-10;
    /// Looser stopping tolerance for the intermediate delta levels.
    double level_tol = 1e-6;
    /// Picard iterations allowed per delta level.
    int max_iters = 400;
    double damping = 0.7;
    bool upwind_drift = false;
    int threads = 1;
};

struct HistoryRow {
    int iteration = 0;
    double delta = 0.0;
    double sup_change = 0.0;
    double residual = 0.0;
};

struct WeakSolveResult {
    GridFunction u;
    std::vector<HistoryRow> history;
    std::vector<std::string> warnings;
    /// sup of |nodal residual| at delta = 0 after each delta level.
    std::vector<double> level_residuals;
    /// max normalized hat residual of the final answer (delta = 0).
    double weak_residual = 0.0;
    int iterations = 0;
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double last_residual)
        : std::runtime_error(what), last_residual_(last_residual) {}
    double last_residual() const { return last_residual_; }

private:
    double last_residual_;
};

/// Delta ladder delta_initial, delta_initial/factor, ..., delta_final.
std::vector<double> delta_ladder(const SolverConfig& cfg);

/// Discrete harmonic extension of the boundary data.
GridFunction harmonic_extension(const DirichletProblem& problem);

WeakSolveResult solve(const DirichletProblem& problem, const SolverConfig& cfg = {});

/// Nodal residual R_i (zero off the interior) of the regularized scheme.
GridFunction nodal_residual(const GridFunction& u, const ExponentField& p, double delta,
                            bool upwind = false);

/// sum over edges h^N flux_e . (dphi)_e + sum over nodes h^N drift_i phi_i
/// with delta = 0. Throws std::invalid_argument when phi is nonzero off the
/// interior.
double discrete_weak_residual(const GridFunction& u, const ExponentField& p, const GridFunction& phi);

/// Discrete W^{1,1} norm: sum h^N |phi| + sum over edges h^N |dphi| / h.
double test_function_norm(const GridFunction& phi);

enum class TestFamily { hat, bump };

std::string to_string(TestFamily family);

/// Non-negative test function of the family centred at interior node k.
/// Bumps are the tensor product of the weights (1/4, 1, 1/4); nodes whose
/// support leaves the interior get no bump.
std::optional<GridFunction> test_function(const GridFunction& like, TestFamily family, std::size_t k);

struct WeakResidualReport {
    TestFamily family = TestFamily::hat;
    std::vector<std::size_t> centers;
    /// Weak residual divided by the test-function norm.
    std::vector<double> residuals;
    double tolerance = 0.0;
    double max_abs = 0.0;
    double min_value = 0.0;
    double max_value = 0.0;
    /// residuals < -tolerance (supersolution sign violations)
    std::size_t violations = 0;
    /// residuals > tolerance
    std::size_t strictly_positive = 0;

    Json to_json(bool include_values = false) const;
};

/// Residuals of u against every test function in the family, normalized.
/// Uses linearity: the weak residual of phi equals h^N sum_i phi_i R_i.
WeakResidualReport audit_supersolution(const GridFunction& u, const ExponentField& p,
                                       TestFamily family, double tolerance);

}  // namespace pxlap
