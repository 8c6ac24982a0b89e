#pragma once

// Experiment configuration: a YAML document (JSON is accepted as the same
// schema in flow syntax). Missing sections keep their built-in defaults;
// lists given in a file replace the default list. The built-in default is
// itself a YAML text, see default_config_text().

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pxlap/function_spec.hpp"
#include "pxlap/fuzz.hpp"
#include "pxlap/viscosity_solver.hpp"
#include "pxlap/weak_solver.hpp"

namespace pxlap {

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& source, int line, const std::string& field, const std::string& message);
    int line() const { return line_; }
    const std::string& field() const { return field_; }

private:
    int line_;
    std::string field_;
};

struct AffineSuiteConfig {
    std::vector<ExponentConfig> exponents;
    int grid = 64;
    FunctionSpec data_line;
    FunctionSpec data_box;
};

struct EquivalenceConfig {
    /// Gradient threshold of the viscosity audits.
    double gamma = 0.1;
    /// Both cross audits use only nodes in the inner region Omega_margin.
    double margin = 0.1;
    std::vector<ProblemSpec> problems;
};

struct InfConvBaseSpec {
    std::string name;
    DomainSpec domain;
    FunctionSpec function;
    int grid = 64;
    /// When given, the study also reports the supersolution defect for it.
    std::optional<ExponentConfig> exponent;
};

struct DefectProbeConfig {
    ProblemSpec problem;
    int grid = 64;
    /// The supersolution is u_h - perturbation |x - center|^2.
    double perturbation = 0.01;
    std::vector<double> center{0.5, 0.5};
    std::vector<double> epsilons;
    /// 0 selects max(2, q_min(p-)).
    double q = 0.0;
};

struct InfConvStudyConfig {
    double q = 2.0;
    std::vector<double> epsilons;
    std::vector<InfConvBaseSpec> bases;
    DefectProbeConfig probe;
};

struct RadoCandidate {
    std::string name;
    DomainSpec domain;
    ExponentConfig exponent;
    FunctionSpec function;
    int grid = 64;
    /// "kink" candidates must show a large on/off ratio, "global" ones a small one.
    std::string expect = "global";
};

struct RadoConfig {
    /// Band half-width in units of h.
    double band_factor = 2.0;
    std::vector<RadoCandidate> candidates;
};

struct VarexpConfig {
    std::size_t samples = 1000;
    int grid = 24;
    ExponentConfig exponent;
    std::vector<double> constant_exponents;
};

struct ExperimentConfig {
    std::uint64_t seed = 0;
    int threads = 1;
    std::string output = "pxlab-out";
    ProblemSpec problem;
    SolverConfig weak;
    RelaxationConfig viscosity;
    AffineSuiteConfig affine;
    EquivalenceConfig equivalence;
    InfConvStudyConfig infconv;
    RadoConfig rado;
    FuzzOptions fuzz;
    VarexpConfig varexp;

    Json to_json() const;
};

const std::string& default_config_text();
ExperimentConfig default_config();

/// Parses a document on top of the defaults. `source` names it in errors.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");

/// "default" selects the built-in configuration; anything else is a path.
ExperimentConfig load_config(const std::string& path_or_default);

}  // namespace pxlap
