#pragma once

// Experiment drivers: equivalence studies over grid ladders, inf-convolution
// epsilon ladders, the supersolution-defect probe, the Rado audit and the
// inequality fuzz. Reports serialize to JSON and CSV; no timings are
// recorded so identical inputs give identical bytes.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pxlap/config.hpp"
#include "pxlap/infconv.hpp"

namespace pxlap {

/// Receives (name, grid function) for every solution an experiment produces.
using SolutionSink = std::function<void(const std::string&, const GridFunction&)>;

struct EquivalenceRow {
    int n = 0;
    double h = 0.0;
    double sup_difference = 0.0;
    std::optional<double> weak_error;
    std::optional<double> viscosity_error;
    int weak_iterations = 0;
    long viscosity_steps = 0;
    /// worst |F| of the weak solution at viscosity probes
    double viscosity_residual_of_weak = 0.0;
    std::size_t viscosity_probes = 0;
    /// max normalized hat residual of the viscosity solution
    double weak_residual_of_viscosity = 0.0;
    std::size_t weak_probes = 0;
    /// diagnostic: max |D_h u(x) - D_h u(y)| / |x - y|^{1/2} over neighbouring
    /// inner nodes of the weak solution; bounded under refinement for C^{1,alpha}
    double gradient_holder = 0.0;
    bool cross_pass = false;
};

struct EquivalenceTolerances {
    double cross_viscosity_c = 0.0;
    double cross_weak_c = 0.0;
    double weak_error_c = 0.0;
    double viscosity_error_c = 0.0;
    double min_order = 1.0;
};

struct EquivalenceReport {
    ProblemSpec problem;
    double gamma = 0.0;
    double margin = 0.0;
    std::vector<EquivalenceRow> rows;
    std::vector<double> difference_orders;
    std::vector<double> weak_orders;
    std::vector<double> viscosity_orders;
    std::vector<std::string> warnings;
    bool monotone = false;
    bool cross_pass = false;
    /// exact problems: errors <= C h on every grid and orders >= min_order
    std::optional<bool> error_pass;

    bool passed() const { return monotone && cross_pass && error_pass.value_or(true); }
    Json to_json() const;
    void write_csv(const std::string& path) const;
};

/// Observed orders log(e_i / e_{i+1}) / log(h_i / h_{i+1}).
std::vector<double> observed_orders(const std::vector<double>& h, const std::vector<double>& e);

/// Solves with both solvers on every grid of the problem's ladder. Solver
/// failures are rethrown as SolverError naming the problem and grid.
EquivalenceReport run_equivalence(const ProblemSpec& problem, const ExperimentConfig& cfg,
                                  const EquivalenceTolerances& tol, const SolutionSink& sink = {});

struct InfConvStudyRow {
    double epsilon = 0.0;
    double q = 2.0;
    double r_eps = 0.0;
    double sup_gap = 0.0;
    std::optional<double> defect;
    /// abs bases with q = 2: max |u_eps - Huber| over interior nodes
    std::optional<double> huber_error;
    InfConvPropertyReport properties;
};

struct InfConvStudyReport {
    std::string base;
    int grid = 0;
    double h = 0.0;
    std::vector<InfConvStudyRow> rows;
    /// sup |u - u_eps| non-increasing as epsilon decreases
    bool gap_decay = false;
    bool properties_pass = false;

    Json to_json() const;
    /// Columns: epsilon, q, r_eps, sup_gap, defect.
    void write_csv(const std::string& path) const;
};

InfConvStudyReport run_infconv_study(const InfConvBaseSpec& base, double q, const std::vector<double>& epsilons,
                                     const InfConvPropertyOptions& options, int threads = 1);

/// Closed-form q = 2 envelope of scale |t|: t^2/(2 eps) for |t| < scale eps,
/// scale |t| - scale^2 eps / 2 otherwise.
double huber(double t, double epsilon, double scale = 1.0);

struct DefectProbeReport {
    std::string problem;
    int grid = 0;
    double h = 0.0;
    double q = 2.0;
    double perturbation = 0.0;
    /// viscosity residual of the base supersolution before inf-convolution
    double base_min_F = 0.0;
    std::vector<DefectReport> rows;
    double tolerance = 0.0;
    bool non_increasing = false;
    bool final_small = false;
    /// every epsilon had admissible probe points
    bool all_probed = false;
    std::vector<std::string> notes;

    bool passed() const { return all_probed && non_increasing && final_small; }
    Json to_json() const;
    void write_csv(const std::string& path) const;
};

/// Builds u_h - c |x - x0|^2 from the converged weak solution and probes the
/// defect over the epsilon ladder. Non-increasing within `tolerance`; the
/// last value must be <= max(ratio * first, tolerance).
DefectProbeReport run_defect_probe(const DefectProbeConfig& probe, const SolverConfig& weak, double tol_c,
                                   double ratio, int threads = 1, const SolutionSink& sink = {});

struct RadoReport {
    std::string name;
    std::string expect;
    double band = 0.0;
    double h = 0.0;
    std::size_t on_count = 0;
    std::size_t off_count = 0;
    double on_max = 0.0;
    double off_max = 0.0;
    double ratio = 1.0;
    bool degenerate = false;
    std::vector<std::string> notes;
    std::optional<bool> passed;

    Json to_json() const;
};

/// Splits hat test functions into those whose 3^N stencil meets {|u| <= band}
/// and the rest, and reports the max normalized weak residual of each class.
/// ratio = (on_max + floor) / (off_max + floor).
RadoReport run_rado_audit(const GridFunction& u, const ExponentField& p, double band, double floor);

FuzzReport run_fuzz(const FuzzOptions& options);

}  // namespace pxlap
