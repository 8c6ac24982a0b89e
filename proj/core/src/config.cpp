#include "pxlap/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace pxlap {

namespace {

const std::string kDefaultText = R"(# pxlab experiment configuration (built-in default)
seed: 0
threads: 1
output: pxlab-out

# Problem for solve-weak / solve-visc.
problem:
  name: affine_box
  domain: {kind: box, lower: [0, 0], upper: [1, 1]}
  exponent: {kind: sine, base: 2.5, amplitude: 0.5, axis: 0}
  boundary: {kind: affine, value: 0.25, gradient: [1.0, -0.5]}
  exact: true
  grids: [64]

weak_solver:
  delta_initial: 1.0e-2
  delta_final: 1.0e-8
  delta_factor: 10
  picard_tol: 1.0e-10
  level_tol: 1.0e-6
  max_iters: 400
  damping: 0.7
  upwind_drift: false

viscosity_solver:
  delta: 1.0e-8
  tau_factor: 0.9
  tol: 1.0e-8
  max_steps: 2000000
  gauss_seidel: false

# Affine data under five exponents, on a line and on a box.
affine:
  grid: 64
  data_line: {kind: affine, value: 0, gradient: [1]}
  data_box: {kind: affine, value: 0.25, gradient: [1.0, -0.5]}
  exponents:
    - {kind: affine, value: 1.2, gradient: [0.3, 0.2]}
    - {kind: sine, base: 1.75, amplitude: 0.25, frequency: 2, axis: 0}
    - {kind: kink, base: 2, slope: 0.5, axis: 0, center: [0.5, 0.5]}
    - {kind: constant, value: 3}
    - {kind: affine, value: 4, gradient: [0.5, 0.25]}

equivalence:
  gamma: 0.1
  # Cross audits probe only nodes farther than this from the boundary.
  margin: 0.1
  problems:
    - name: annulus_p4
      domain: {kind: annulus, center: [0, 0], r_in: 0.5, r_out: 1.5}
      exponent: {kind: constant, value: 4}
      boundary: {kind: radial_power, center: [0, 0], power: 0.6666666666666666}
      exact: true
      grids: [32, 64, 128]
    - name: sine_exponent
      domain: {kind: box, lower: [0, 0], upper: [1, 1]}
      exponent: {kind: sine, base: 2.5, amplitude: 0.5, axis: 0}
      boundary: {kind: exp_cos}
      grids: [16, 32, 64]
    - name: singular_exponent
      domain: {kind: box, lower: [0, 0], upper: [1, 1]}
      exponent: {kind: bilinear, base: 1.5, coefficient: 0.4}
      boundary: {kind: radial_power, center: [-0.5, -0.5], power: 1.5}
      grids: [16, 32, 64]

infconv:
  q: 2
  epsilons: [0.1, 0.05, 0.025]
  bases:
    - name: constant
      domain: {kind: line, lower: [-1], upper: [1]}
      function: {kind: constant, value: 1}
      grid: 399
    - name: abs
      domain: {kind: line, lower: [-1], upper: [1]}
      function: {kind: abs, center: [0]}
      grid: 399
    - name: sine
      domain: {kind: line, lower: [-1], upper: [2]}
      function: {kind: sine, amplitude: 1}
      grid: 599
    - name: annulus_exact
      domain: {kind: annulus, center: [0, 0], r_in: 0.5, r_out: 1.5}
      function: {kind: radial_power, center: [0, 0], power: 0.6666666666666666}
      exponent: {kind: constant, value: 4}
      grid: 128
  # Supersolution defect of (converged weak solution) - perturbation |x - center|^2.
  probe:
    problem:
      name: sine_exponent
      domain: {kind: box, lower: [0, 0], upper: [1, 1]}
      exponent: {kind: sine, base: 2.5, amplitude: 0.5, axis: 0}
      boundary: {kind: exp_cos}
    grid: 64
    perturbation: 0.01
    center: [0.5, 0.5]
    epsilons: [0.0125, 0.003125, 0.00078125, 0.0001953125]
    q: 0

rado:
  band_factor: 2
  candidates:
    - name: kink
      domain: {kind: line, lower: [0], upper: [1]}
      exponent: {kind: constant, value: 2}
      function: {kind: abs, center: [0.5]}
      grid: 63
      expect: kink
    - name: line_affine
      domain: {kind: line, lower: [0], upper: [1]}
      exponent: {kind: affine, value: 2, gradient: [0.5]}
      function: {kind: affine, value: -0.5, gradient: [1]}
      grid: 63
      expect: global
    - name: annulus_global
      domain: {kind: annulus, center: [0, 0], r_in: 0.5, r_out: 1.5}
      exponent: {kind: constant, value: 4}
      function: {kind: radial_power, center: [0, 0], power: 0.6666666666666666, shift: -1}
      grid: 64
      expect: global

fuzz:
  inequality_samples: 100000
  identity_samples: 10000
  tolerance: 1.0e-12

varexp:
  samples: 1000
  grid: 24
  exponent: {kind: bilinear, base: 1.5, coefficient: 2.0}
  constant_exponents: [1.5, 2, 3, 4.5]
)";

class Reader {
public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const YAML::Node& node, const std::string& field, const std::string& msg) const {
        const int line = node.IsDefined() ? node.Mark().line + 1 : 0;
        throw ConfigError(source_, line, field, msg);
    }

    void expect_map(const YAML::Node& node, const std::string& path,
                    std::initializer_list<const char*> allowed) const {
        if (!node.IsMap()) fail(node, path, "expected a mapping");
        std::set<std::string> ok(allowed.begin(), allowed.end());
        for (const auto& kv : node) {
            const auto key = kv.first.as<std::string>();
            if (!ok.count(key)) fail(kv.first, join(path, key), "unknown field");
        }
    }

    template <class T>
    bool get(const YAML::Node& map, const std::string& path, const char* key, T& out) const {
        const YAML::Node n = map[key];
        if (!n.IsDefined() || n.IsNull()) return false;
        try {
            out = n.as<T>();
        } catch (const YAML::Exception&) {
            fail(n, join(path, key), "cannot convert value '" + scalar_text(n) + "'");
        }
        return true;
    }

    double positive(const YAML::Node& map, const std::string& path, const char* key, double& out) const {
        if (get(map, path, key, out) && !(out > 0.0)) fail(map[key], join(path, key), "must be positive");
        return out;
    }

    void positive_int(const YAML::Node& map, const std::string& path, const char* key, int& out) const {
        if (get(map, path, key, out) && out < 1) fail(map[key], join(path, key), "must be positive");
    }

    static std::string join(const std::string& path, const std::string& key) {
        return path.empty() ? key : path + "." + key;
    }

    static std::string scalar_text(const YAML::Node& n) {
        if (n.IsScalar()) return n.Scalar();
        return n.IsSequence() ? "<list>" : "<mapping>";
    }

    DomainSpec domain(const YAML::Node& n, const std::string& path) const {
        expect_map(n, path, {"kind", "lower", "upper", "center", "r_in", "r_out"});
        DomainSpec d;
        get(n, path, "kind", d.kind);
        if (d.kind != "line" && d.kind != "box" && d.kind != "annulus") {
            fail(n["kind"], join(path, "kind"), "unknown domain kind '" + d.kind + "' (line, box, annulus)");
        }
        if (d.kind == "line") {
            d.lower = {0.0};
            d.upper = {1.0};
        }
        get(n, path, "lower", d.lower);
        get(n, path, "upper", d.upper);
        get(n, path, "center", d.center);
        get(n, path, "r_in", d.r_in);
        get(n, path, "r_out", d.r_out);
        const std::size_t need = d.kind == "line" ? 1 : 2;
        if (d.kind != "annulus") {
            if (d.lower.size() != need) fail(n["lower"], join(path, "lower"), "expected " + std::to_string(need) + " entries");
            if (d.upper.size() != need) fail(n["upper"], join(path, "upper"), "expected " + std::to_string(need) + " entries");
            for (std::size_t a = 0; a < need; ++a) {
                if (!(d.upper[a] > d.lower[a])) fail(n, path, "upper must exceed lower on every axis");
            }
        } else {
            if (d.center.size() != 2) fail(n["center"], join(path, "center"), "expected 2 entries");
            if (!(d.r_in > 0.0 && d.r_out > d.r_in)) fail(n, path, "annulus needs 0 < r_in < r_out");
        }
        return d;
    }

    ExponentConfig exponent(const YAML::Node& n, const std::string& path) const {
        expect_map(n, path, {"kind", "value", "gradient", "base", "amplitude", "frequency", "coefficient",
                             "slope", "axis", "center"});
        ExponentConfig e;
        get(n, path, "kind", e.kind);
        static const std::set<std::string> kinds{"constant", "affine", "sine", "bilinear", "kink"};
        if (!kinds.count(e.kind)) {
            fail(n["kind"], join(path, "kind"),
                 "unknown exponent kind '" + e.kind + "' (constant, affine, sine, bilinear, kink)");
        }
        get(n, path, "value", e.value);
        get(n, path, "gradient", e.gradient);
        get(n, path, "base", e.base);
        get(n, path, "amplitude", e.amplitude);
        get(n, path, "frequency", e.frequency);
        get(n, path, "coefficient", e.coefficient);
        get(n, path, "slope", e.slope);
        get(n, path, "axis", e.axis);
        get(n, path, "center", e.center);
        if (e.axis < 0 || e.axis > 1) fail(n["axis"], join(path, "axis"), "must be 0 or 1");
        return e;
    }

    FunctionSpec function(const YAML::Node& n, const std::string& path) const {
        expect_map(n, path, {"kind", "value", "gradient", "center", "power", "scale", "shift", "amplitude",
                             "frequency", "axis"});
        FunctionSpec f;
        get(n, path, "kind", f.kind);
        static const std::set<std::string> kinds{"constant", "affine", "affine_sine", "radial_power",
                                                 "exp_cos", "abs", "sine"};
        if (!kinds.count(f.kind)) {
            fail(n["kind"], join(path, "kind"),
                 "unknown function kind '" + f.kind +
                     "' (constant, affine, affine_sine, radial_power, exp_cos, abs, sine)");
        }
        get(n, path, "value", f.value);
        get(n, path, "gradient", f.gradient);
        get(n, path, "center", f.center);
        get(n, path, "power", f.power);
        get(n, path, "scale", f.scale);
        get(n, path, "shift", f.shift);
        get(n, path, "amplitude", f.amplitude);
        get(n, path, "frequency", f.frequency);
        get(n, path, "axis", f.axis);
        if (f.axis < 0 || f.axis > 1) fail(n["axis"], join(path, "axis"), "must be 0 or 1");
        return f;
    }

    std::vector<int> grids(const YAML::Node& map, const std::string& path, const char* key,
                           std::vector<int> fallback) const {
        std::vector<int> g = std::move(fallback);
        if (!get(map, path, key, g)) return g;
        const std::string field = join(path, key);
        if (g.empty()) fail(map[key], field, "grid ladder must not be empty");
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g[i] < 1) fail(map[key], field, "grid sizes must be positive");
            if (i > 0 && g[i] <= g[i - 1]) fail(map[key], field, "grid ladder must be increasing");
        }
        return g;
    }

    std::vector<double> epsilons(const YAML::Node& map, const std::string& path, const char* key,
                                 std::vector<double> fallback) const {
        std::vector<double> e = std::move(fallback);
        if (!get(map, path, key, e)) return e;
        const std::string field = join(path, key);
        if (e.empty()) fail(map[key], field, "epsilon ladder must not be empty");
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (!(e[i] > 0.0)) fail(map[key], field, "epsilons must be positive");
            if (i > 0 && !(e[i] < e[i - 1])) fail(map[key], field, "epsilon ladder must be decreasing");
        }
        return e;
    }

    void check_dims(const YAML::Node& n, const std::string& path, const DomainSpec& d,
                    const ExponentConfig* e, const FunctionSpec* f) const {
        const int dim = d.dim();
        if (e && e->axis >= dim) fail(n, path, "exponent axis exceeds the domain dimension");
        if (e && e->kind == "bilinear" && dim != 2) fail(n, path, "bilinear exponent needs a 2D domain");
        if (f && f->axis >= dim) fail(n, path, "function axis exceeds the domain dimension");
    }

    ProblemSpec problem(const YAML::Node& n, const std::string& path, const ProblemSpec& base) const {
        expect_map(n, path, {"name", "domain", "exponent", "boundary", "exact", "grids"});
        ProblemSpec p = base;
        get(n, path, "name", p.name);
        if (n["domain"]) p.domain = domain(n["domain"], join(path, "domain"));
        if (n["exponent"]) p.exponent = exponent(n["exponent"], join(path, "exponent"));
        if (n["boundary"]) p.boundary = function(n["boundary"], join(path, "boundary"));
        get(n, path, "exact", p.exact);
        p.grids = grids(n, path, "grids", p.grids);
        check_dims(n, path, p.domain, &p.exponent, &p.boundary);
        return p;
    }

    const std::string& source() const { return source_; }

private:
    std::string source_;
};

void read_weak(const Reader& r, const YAML::Node& n, SolverConfig& c) {
    const std::string path = "weak_solver";
    r.expect_map(n, path, {"delta_initial", "delta_final", "delta_factor", "picard_tol", "level_tol",
                           "max_iters", "damping", "upwind_drift"});
    r.positive(n, path, "delta_initial", c.delta_initial);
    r.positive(n, path, "delta_final", c.delta_final);
    r.positive(n, path, "picard_tol", c.picard_tol);
    r.positive(n, path, "level_tol", c.level_tol);
    r.positive_int(n, path, "max_iters", c.max_iters);
    if (r.get(n, path, "delta_factor", c.delta_factor) && !(c.delta_factor > 1.0)) {
        r.fail(n["delta_factor"], path + ".delta_factor", "must exceed 1");
    }
    if (r.get(n, path, "damping", c.damping) && !(c.damping > 0.0 && c.damping <= 1.0)) {
        r.fail(n["damping"], path + ".damping", "must lie in (0, 1]");
    }
    r.get(n, path, "upwind_drift", c.upwind_drift);
    if (c.delta_final > c.delta_initial) r.fail(n, path, "delta_final must not exceed delta_initial");
}

void read_viscosity(const Reader& r, const YAML::Node& n, RelaxationConfig& c) {
    const std::string path = "viscosity_solver";
    r.expect_map(n, path, {"delta", "tau_factor", "tol", "max_steps", "gauss_seidel"});
    r.positive(n, path, "delta", c.delta);
    r.positive(n, path, "tol", c.tol);
    if (r.get(n, path, "tau_factor", c.tau_factor) && !(c.tau_factor > 0.0 && c.tau_factor <= 1.0)) {
        r.fail(n["tau_factor"], path + ".tau_factor", "must lie in (0, 1]");
    }
    if (r.get(n, path, "max_steps", c.max_steps) && c.max_steps < 1) {
        r.fail(n["max_steps"], path + ".max_steps", "must be positive");
    }
    r.get(n, path, "gauss_seidel", c.gauss_seidel);
}

void read_affine(const Reader& r, const YAML::Node& n, AffineSuiteConfig& c) {
    const std::string path = "affine";
    r.expect_map(n, path, {"grid", "data_line", "data_box", "exponents"});
    r.positive_int(n, path, "grid", c.grid);
    if (n["data_line"]) c.data_line = r.function(n["data_line"], path + ".data_line");
    if (n["data_box"]) c.data_box = r.function(n["data_box"], path + ".data_box");
    if (n["exponents"]) {
        const auto list = n["exponents"];
        if (!list.IsSequence() || list.size() == 0) r.fail(list, path + ".exponents", "expected a non-empty list");
        c.exponents.clear();
        for (std::size_t i = 0; i < list.size(); ++i) {
            c.exponents.push_back(r.exponent(list[i], path + ".exponents[" + std::to_string(i) + "]"));
            if (c.exponents.back().kind == "bilinear") {
                r.fail(list[i], path + ".exponents[" + std::to_string(i) + "]",
                       "bilinear exponents cannot be used on the line");
            }
        }
    }
}

void read_equivalence(const Reader& r, const YAML::Node& n, EquivalenceConfig& c) {
    const std::string path = "equivalence";
    r.expect_map(n, path, {"gamma", "margin", "problems"});
    r.positive(n, path, "gamma", c.gamma);
    r.positive(n, path, "margin", c.margin);
    if (n["problems"]) {
        const auto list = n["problems"];
        if (!list.IsSequence() || list.size() == 0) r.fail(list, path + ".problems", "expected a non-empty list");
        c.problems.clear();
        for (std::size_t i = 0; i < list.size(); ++i) {
            c.problems.push_back(r.problem(list[i], path + ".problems[" + std::to_string(i) + "]", ProblemSpec{}));
        }
    }
}

void read_infconv(const Reader& r, const YAML::Node& n, InfConvStudyConfig& c) {
    const std::string path = "infconv";
    r.expect_map(n, path, {"q", "epsilons", "bases", "probe"});
    if (r.get(n, path, "q", c.q) && !(c.q >= 2.0)) r.fail(n["q"], path + ".q", "must be >= 2");
    c.epsilons = r.epsilons(n, path, "epsilons", c.epsilons);
    if (n["bases"]) {
        const auto list = n["bases"];
        if (!list.IsSequence() || list.size() == 0) r.fail(list, path + ".bases", "expected a non-empty list");
        c.bases.clear();
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string p = path + ".bases[" + std::to_string(i) + "]";
            const auto b = list[i];
            r.expect_map(b, p, {"name", "domain", "function", "grid", "exponent"});
            InfConvBaseSpec s;
            r.get(b, p, "name", s.name);
            if (!b["domain"]) r.fail(b, p, "missing field 'domain'");
            if (!b["function"]) r.fail(b, p, "missing field 'function'");
            s.domain = r.domain(b["domain"], p + ".domain");
            s.function = r.function(b["function"], p + ".function");
            r.positive_int(b, p, "grid", s.grid);
            if (b["exponent"]) s.exponent = r.exponent(b["exponent"], p + ".exponent");
            r.check_dims(b, p, s.domain, s.exponent ? &*s.exponent : nullptr, &s.function);
            c.bases.push_back(s);
        }
    }
    if (n["probe"]) {
        const std::string p = path + ".probe";
        const auto b = n["probe"];
        r.expect_map(b, p, {"problem", "grid", "perturbation", "center", "epsilons", "q"});
        auto& pr = c.probe;
        if (b["problem"]) pr.problem = r.problem(b["problem"], p + ".problem", pr.problem);
        r.positive_int(b, p, "grid", pr.grid);
        r.get(b, p, "perturbation", pr.perturbation);
        if (pr.perturbation < 0.0) r.fail(b["perturbation"], p + ".perturbation", "must be non-negative");
        r.get(b, p, "center", pr.center);
        pr.epsilons = r.epsilons(b, p, "epsilons", pr.epsilons);
        if (r.get(b, p, "q", pr.q) && pr.q != 0.0 && !(pr.q >= 2.0)) {
            r.fail(b["q"], p + ".q", "must be 0 (automatic) or >= 2");
        }
    }
}

void read_rado(const Reader& r, const YAML::Node& n, RadoConfig& c) {
    const std::string path = "rado";
    r.expect_map(n, path, {"band_factor", "candidates"});
    r.positive(n, path, "band_factor", c.band_factor);
    if (n["candidates"]) {
        const auto list = n["candidates"];
        if (!list.IsSequence() || list.size() == 0) r.fail(list, path + ".candidates", "expected a non-empty list");
        c.candidates.clear();
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string p = path + ".candidates[" + std::to_string(i) + "]";
            const auto b = list[i];
            r.expect_map(b, p, {"name", "domain", "exponent", "function", "grid", "expect"});
            RadoCandidate s;
            r.get(b, p, "name", s.name);
            for (const char* req : {"domain", "exponent", "function"}) {
                if (!b[req]) r.fail(b, p, std::string("missing field '") + req + "'");
            }
            s.domain = r.domain(b["domain"], p + ".domain");
            s.exponent = r.exponent(b["exponent"], p + ".exponent");
            s.function = r.function(b["function"], p + ".function");
            r.positive_int(b, p, "grid", s.grid);
            r.get(b, p, "expect", s.expect);
            if (s.expect != "kink" && s.expect != "global") r.fail(b["expect"], p + ".expect", "must be 'kink' or 'global'");
            r.check_dims(b, p, s.domain, &s.exponent, &s.function);
            c.candidates.push_back(s);
        }
    }
}

void read_fuzz(const Reader& r, const YAML::Node& n, FuzzOptions& c) {
    const std::string path = "fuzz";
    r.expect_map(n, path, {"inequality_samples", "identity_samples", "tolerance"});
    r.get(n, path, "inequality_samples", c.inequality_samples);
    r.get(n, path, "identity_samples", c.identity_samples);
    r.positive(n, path, "tolerance", c.tolerance);
}

void read_varexp(const Reader& r, const YAML::Node& n, VarexpConfig& c) {
    const std::string path = "varexp";
    r.expect_map(n, path, {"samples", "grid", "exponent", "constant_exponents"});
    r.get(n, path, "samples", c.samples);
    r.positive_int(n, path, "grid", c.grid);
    if (n["exponent"]) c.exponent = r.exponent(n["exponent"], path + ".exponent");
    if (r.get(n, path, "constant_exponents", c.constant_exponents)) {
        for (double p : c.constant_exponents) {
            if (!(p > 1.0)) r.fail(n["constant_exponents"], path + ".constant_exponents", "exponents must exceed 1");
        }
    }
}

ExperimentConfig parse_onto(ExperimentConfig cfg, const std::string& text, const std::string& source) {
    const Reader r(source);
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(source, e.mark.line + 1, "", e.msg);
    }
    if (root.IsNull()) return cfg;
    r.expect_map(root, "", {"seed", "threads", "output", "problem", "weak_solver", "viscosity_solver", "affine",
                            "equivalence", "infconv", "rado", "fuzz", "varexp"});
    r.get(root, "", "seed", cfg.seed);
    r.positive_int(root, "", "threads", cfg.threads);
    r.get(root, "", "output", cfg.output);
    if (root["problem"]) cfg.problem = r.problem(root["problem"], "problem", cfg.problem);
    if (root["weak_solver"]) read_weak(r, root["weak_solver"], cfg.weak);
    if (root["viscosity_solver"]) read_viscosity(r, root["viscosity_solver"], cfg.viscosity);
    if (root["affine"]) read_affine(r, root["affine"], cfg.affine);
    if (root["equivalence"]) read_equivalence(r, root["equivalence"], cfg.equivalence);
    if (root["infconv"]) read_infconv(r, root["infconv"], cfg.infconv);
    if (root["rado"]) read_rado(r, root["rado"], cfg.rado);
    if (root["fuzz"]) read_fuzz(r, root["fuzz"], cfg.fuzz);
    if (root["varexp"]) read_varexp(r, root["varexp"], cfg.varexp);
    cfg.fuzz.seed = cfg.seed;
    return cfg;
}

Json function_list(const std::vector<ExponentConfig>& v) {
    Json out = Json::array();
    for (const auto& e : v) out.push_back(e.to_json());
    return out;
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& field, const std::string& message)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " +
                         (field.empty() ? std::string() : "field '" + field + "': ") + message),
      line_(line),
      field_(field) {}

const std::string& default_config_text() { return kDefaultText; }

ExperimentConfig default_config() {
    static const ExperimentConfig cfg = parse_onto(ExperimentConfig{}, kDefaultText, "<default>");
    return cfg;
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
    return parse_onto(default_config(), text, source);
}

ExperimentConfig load_config(const std::string& path_or_default) {
    if (path_or_default == "default") return default_config();
    std::ifstream in(path_or_default);
    if (!in) throw ConfigError(path_or_default, 0, "", "cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path_or_default);
}

Json ExperimentConfig::to_json() const {
    Json j;
    j["seed"] = seed;
    j["threads"] = threads;
    j["problem"] = problem.to_json();
    j["weak_solver"] = {{"delta_initial", weak.delta_initial}, {"delta_final", weak.delta_final},
                        {"delta_factor", weak.delta_factor},   {"picard_tol", weak.picard_tol},
                        {"level_tol", weak.level_tol},         {"max_iters", weak.max_iters},
                        {"damping", weak.damping},             {"upwind_drift", weak.upwind_drift}};
    j["viscosity_solver"] = {{"delta", viscosity.delta},         {"tau_factor", viscosity.tau_factor},
                             {"tol", viscosity.tol},             {"max_steps", viscosity.max_steps},
                             {"gauss_seidel", viscosity.gauss_seidel}};
    j["affine"] = {{"grid", affine.grid},
                   {"data_line", affine.data_line.to_json()},
                   {"data_box", affine.data_box.to_json()},
                   {"exponents", function_list(affine.exponents)}};
    Json probs = Json::array();
    for (const auto& p : equivalence.problems) probs.push_back(p.to_json());
    j["equivalence"] = {{"gamma", equivalence.gamma}, {"margin", equivalence.margin}, {"problems", probs}};
    Json bases = Json::array();
    for (const auto& b : infconv.bases) {
        Json jb{{"name", b.name}, {"domain", b.domain.to_json()}, {"function", b.function.to_json()},
                {"grid", b.grid}};
        if (b.exponent) jb["exponent"] = b.exponent->to_json();
        bases.push_back(std::move(jb));
    }
    const auto& pr = infconv.probe;
    j["infconv"] = {{"q", infconv.q},
                    {"epsilons", infconv.epsilons},
                    {"bases", bases},
                    {"probe",
                     {{"problem", pr.problem.to_json()},
                      {"grid", pr.grid},
                      {"perturbation", pr.perturbation},
                      {"center", pr.center},
                      {"epsilons", pr.epsilons},
                      {"q", pr.q}}}};
    Json cands = Json::array();
    for (const auto& c : rado.candidates) {
        cands.push_back({{"name", c.name},
                         {"domain", c.domain.to_json()},
                         {"exponent", c.exponent.to_json()},
                         {"function", c.function.to_json()},
                         {"grid", c.grid},
                         {"expect", c.expect}});
    }
    j["rado"] = {{"band_factor", rado.band_factor}, {"candidates", cands}};
    j["fuzz"] = {{"seed", fuzz.seed},
                 {"inequality_samples", fuzz.inequality_samples},
                 {"identity_samples", fuzz.identity_samples},
                 {"tolerance", fuzz.tolerance}};
    j["varexp"] = {{"samples", varexp.samples},
                   {"grid", varexp.grid},
                   {"exponent", varexp.exponent.to_json()},
                   {"constant_exponents", varexp.constant_exponents}};
    return j;
}

}  // namespace pxlap
