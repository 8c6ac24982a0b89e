#pragma once

// Declarative descriptions of domains, exponents and scalar functions, as
// read from experiment configs, and their realisation on a grid.

#include <string>
#include <vector>

#include "pxlap/exponent.hpp"
#include "pxlap/fuzz.hpp"
#include "pxlap/weak_solver.hpp"

namespace pxlap {

/// line:    [lower, upper] with n interior nodes
/// box:     [lower, upper]^2 with n x n interior nodes
/// annulus: r_in < |x - center| < r_out inside the box center +- r_out
struct DomainSpec {
    std::string kind = "box";
    std::vector<double> lower{0.0, 0.0};
    std::vector<double> upper{1.0, 1.0};
    std::vector<double> center{0.0, 0.0};
    double r_in = 0.5;
    double r_out = 1.5;

    int dim() const { return kind == "line" ? 1 : 2; }
    Json to_json() const;
};

/// constant: value
/// affine:   value + gradient . x
/// sine:     base + amplitude sin(pi frequency x_axis)
/// bilinear: base + coefficient x_0 x_1
/// kink:     base + slope |x_axis - center_axis|
struct ExponentConfig {
    std::string kind = "constant";
    double value = 2.0;
    std::vector<double> gradient;
    double base = 2.0;
    double amplitude = 0.0;
    double frequency = 1.0;
    double coefficient = 0.0;
    double slope = 1.0;
    int axis = 0;
    std::vector<double> center{0.0, 0.0};

    Json to_json() const;
};

/// constant:     value
/// affine:       value + gradient . x
/// affine_sine:  value + gradient . x + amplitude prod_k sin(pi x_k)
/// radial_power: scale |x - center|^power + shift
/// exp_cos:      scale e^{x_0} cos(x_1)
/// abs:          scale |x_axis - center_axis| + shift
/// sine:         amplitude sin(pi frequency x_axis) + shift
struct FunctionSpec {
    std::string kind = "affine";
    double value = 0.0;
    std::vector<double> gradient;
    std::vector<double> center{0.0, 0.0};
    double power = 1.0;
    double scale = 1.0;
    double shift = 0.0;
    double amplitude = 0.0;
    double frequency = 1.0;
    int axis = 0;

    Json to_json() const;
};

struct ProblemSpec {
    std::string name = "problem";
    DomainSpec domain;
    ExponentConfig exponent;
    FunctionSpec boundary;
    /// The boundary function solves the equation in the whole domain, so
    /// solutions can be compared with it.
    bool exact = false;
    std::vector<int> grids{64};

    Json to_json() const;
};

Domain make_domain(const DomainSpec& spec, int n);
/// Applies the annulus restriction (no-op for line and box).
void apply_domain_kinds(const DomainSpec& spec, GridFunction& u);

ExponentField make_exponent_field(const ExponentConfig& spec, const Domain& region);
ScalarField make_function(const FunctionSpec& spec);

/// f sampled on every node of the grid, with the domain's node kinds.
GridFunction sample_on(const DomainSpec& domain, int n, const FunctionSpec& f);

DirichletProblem make_problem(const ProblemSpec& spec, int n);

}  // namespace pxlap
