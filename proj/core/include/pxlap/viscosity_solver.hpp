#pragma once

// Pseudo-time relaxation for the normalized equation
//     -(tr D^2u + (p-2) <D^2u Du, Du> / |Du|^2) = 0
// and the jet-based viscosity residual probe.

#include <string>
#include <vector>

#include "pxlap/fuzz.hpp"
#include "pxlap/weak_solver.hpp"

namespace pxlap {

struct RelaxationConfig {
    double delta = 1e-8;
    double tau_factor = 0.9;
    double tol = 1e-8;
    long max_steps = 2000000;
    /// In-place sweeps; single threaded and order dependent.
    bool gauss_seidel = false;
    int threads = 1;
    /// Residual history is sampled every this many steps.
    long record_every = 100;
};

struct RelaxStep {
    long step = 0;
    double residual = 0.0;
};

struct RelaxResult {
    GridFunction u;
    long steps = 0;
    double residual = 0.0;
    double tau = 0.0;
    std::vector<RelaxStep> history;
};

/// tau_factor * h_min^2 / (2 (N + max(p+ - 2, 0))).
double relaxation_step(const Domain& domain, const ExponentField& p, double tau_factor);

/// G(u) = tr X + (p-2)/(delta + |eta|^2) <X eta, eta> at interior nodes, zero elsewhere.
GridFunction regularized_normalized_operator(const GridFunction& u, const ExponentField& p, double delta);

/// One Jacobi step u + tau G(u).
GridFunction relax_step(const GridFunction& u, const ExponentField& p, double delta, double tau);

/// Relaxes from the harmonic extension until sup |G| < tol. Throws
/// SolverError when sup |u| doubles or max_steps is reached.
RelaxResult relax(const DirichletProblem& problem, const RelaxationConfig& cfg = {});

struct ViscosityResidualReport {
    double gamma = 0.0;
    std::vector<std::size_t> nodes;
    /// F(x, eta, X) at probe nodes.
    std::vector<double> values;
    std::size_t skipped = 0;
    double min_value = 0.0;
    double max_value = 0.0;
    /// max(0, -min F): supersolutions need F >= 0.
    double super_defect = 0.0;
    /// max(0, max F): subsolutions need F <= 0.
    double sub_defect = 0.0;

    double worst() const { return std::max(super_defect, sub_defect); }
    Json to_json(bool include_values = false) const;
};

/// Evaluates F from discrete jets at interior nodes with |eta| > gamma and
/// counts the rest as skipped.
ViscosityResidualReport viscosity_residual(const GridFunction& u, const ExponentField& p, double gamma);

}  // namespace pxlap
