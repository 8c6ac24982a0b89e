#pragma once

// Inf-convolution with a q-power penalty,
//     u_eps(x) = min_y { u(y) + |x - y|^q / (q eps^{q-1}) },
// taken over grid nodes of the closed domain, together with checks of its
// standard properties and the supersolution-defect probe.

#include <string>
#include <vector>

#include "pxlap/exponent.hpp"
#include "pxlap/fuzz.hpp"
#include "pxlap/grid.hpp"

namespace pxlap {

struct InfConvConfig {
    double epsilon = 0.1;
    double q = 2.0;
    /// Search radius (q eps^{q-1} osc)^{1/q}: minimizers never lie farther away.
    double r_eps = 0.0;
    double osc = 0.0;

    double penalty(double distance) const;
};

InfConvConfig make_infconv_config(double epsilon, double q, double osc);

/// Smallest q with p- - 2 + (q-2)/(q-1) >= 0: p-/(p- - 1) when p- < 2, else 2.
double q_min(double p_minus);

struct InfConvResult {
    GridFunction u_eps;
    InfConvConfig config;
    /// x_eps - x per node (zero for exterior nodes).
    std::vector<std::array<double, 2>> minimizer_offset;
    std::vector<std::size_t> minimizer;
    std::vector<std::string> warnings;
};

/// Exhaustive minimum over closure nodes in the ball B_{r(eps)}(x). Ties go
/// to the nearest candidate. Exterior nodes keep u.
InfConvResult inf_convolve(const GridFunction& u, double epsilon, double q, int threads = 1);

/// Interior nodes whose distance to every non-interior node (and to the box
/// edge) exceeds `margin`: the discrete inner region Omega_margin.
std::vector<std::size_t> inset_nodes(const GridFunction& u, double margin);

/// max |u(y) - u(z)| over closure-node pairs with |y - z| <= t.
double sampled_modulus(const GridFunction& u, double t);

struct InfConvPropertyOptions {
    /// Gradient threshold for jet probes; <= 0 means 10 h.
    double gamma = 0.0;
    /// Tolerance constants, multiplied by the quantities documented below.
    double semiconcavity_c = 1.0;  // eig slack  c * h * max(1, K) / min(eps, 1)
    double jet_eta_c = 2.0;        // |eta - eta_pred| <= c * h * L, L = (q-1) (r+h)^{q-2} / eps^{q-1}
    double jet_bound_c = 1.0;      // same slack as semiconcavity
};

struct InfConvPropertyReport {
    double epsilon = 0.0;
    double q = 2.0;
    double r_eps = 0.0;
    std::size_t probe_nodes = 0;
    std::size_t jet_probes = 0;

    double sup_gap = 0.0;              // sup |u - u_eps|
    double max_excess = 0.0;           // (i)  max(u_eps - u), must be <= 0
    double max_offset = 0.0;           // (ii) max |x_eps - x| over probe nodes
    double semiconcavity_excess = 0.0; // (iii) max(lambda_max(D^2 u_eps) - K), K = (q-1) r^{q-2} / eps^{q-1}
    double semiconcavity_tol = 0.0;
    double attainment_error = 0.0;     // (iv) |u_eps(x) - u(x_eps) - penalty|
    double eta_error = 0.0;            // (v) |eta - eta_pred|
    double eta_tol = 0.0;
    double jet_bound_excess = 0.0;     // (v) max(lambda_max(X) - (q-1)/eps |eta|^{(q-2)/(q-1)})
    double offset_bound_excess = 0.0;  // |x_eps - x| - (q eps^{q-1} omega(r))^{1/q}, diagnostic
    double h = 0.0;

    bool pass_i = true;
    bool pass_ii = true;
    bool pass_iii = true;
    bool pass_iv = true;
    bool pass_v = true;
    std::vector<std::string> notes;

    bool passed() const { return pass_i && pass_ii && pass_iii && pass_iv && pass_v; }
    Json to_json() const;
};

InfConvPropertyReport verify_properties(const GridFunction& u, const InfConvResult& result,
                                        const InfConvPropertyOptions& options = {});

struct DefectOptions {
    double gamma = 0.0;  // <= 0 means 10 h
    int threads = 1;
};

struct DefectReport {
    double epsilon = 0.0;
    double q = 2.0;
    double r_eps = 0.0;
    /// max(0, -min over probes of |eta|^{min(p-2,0)} F(x, eta, X)).
    double defect = 0.0;
    double min_value = 0.0;
    std::size_t probes = 0;
    std::size_t skipped = 0;
    double sup_gap = 0.0;
};

/// Probes the inf-convolution of a (purported) supersolution with discrete
/// jets on the inner region Omega_{r(eps)}. Throws std::runtime_error("no
/// admissible probe points") when no node passes the gradient threshold.
DefectReport supersolution_defect(const GridFunction& u, const ExponentField& p, double epsilon,
                                  double q, const DefectOptions& options = {});

/// Same probe on an inf-convolution computed beforehand from u.
DefectReport supersolution_defect(const GridFunction& u, const InfConvResult& result, const ExponentField& p,
                                  const DefectOptions& options = {});

}  // namespace pxlap
