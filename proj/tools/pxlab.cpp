// pxlab: command-line front end for the solvers and experiment suites.
//
// Exit codes: 0 pass, 1 tolerance failure, 2 solver failure, 3 config error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pxlap/config.hpp"
#include "pxlap/experiments.hpp"
#include "pxlap/grid_io.hpp"
#include "pxlap/suite.hpp"
#include "pxlap/tolerances.hpp"
#include "pxlap/viscosity_solver.hpp"
#include "pxlap/weak_solver.hpp"

namespace fs = std::filesystem;
using namespace pxlap;

namespace {

enum Exit { kPass = 0, kTolerance = 1, kSolver = 2, kConfig = 3 };

struct Options {
    std::string config = "default";
    std::optional<std::string> out;
    std::optional<int> grid;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
};

struct Context {
    ExperimentConfig cfg;
    fs::path out;
    std::optional<int> grid;
};

Context prepare(const Options& o) {
    Context c{load_config(o.config), {}, o.grid};
    if (o.seed) {
        c.cfg.seed = *o.seed;
        c.cfg.fuzz.seed = *o.seed;
    }
    if (o.threads) {
        if (*o.threads < 1) throw ConfigError("--threads", 0, "threads", "must be >= 1");
        c.cfg.threads = *o.threads;
    }
    if (o.grid && *o.grid < 2) throw ConfigError("--grid", 0, "grid", "must be >= 2");
    c.out = o.out ? *o.out : c.cfg.output;
    fs::create_directories(c.out);
    return c;
}

void write_json(const fs::path& path, const Json& j) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << j.dump(2) << '\n';
}

SolutionSink dump_to(const fs::path& dir) {
    fs::create_directories(dir);
    return [dir](const std::string& name, const GridFunction& u) {
        write_csv((dir / (name + ".csv")).string(), u);
        write_binary((dir / (name + ".pxgf")).string(), u);
    };
}

int verdict(bool ok) { return ok ? kPass : kTolerance; }

const char* word(bool ok) { return ok ? "PASS" : "FAIL"; }

int solve_weak_cmd(const Context& c) {
    const ProblemSpec& ps = c.cfg.problem;
    const int n = c.grid.value_or(ps.grids.back());
    const DirichletProblem prob = make_problem(ps, n);
    SolverConfig wcfg = c.cfg.weak;
    wcfg.threads = c.cfg.threads;
    const WeakSolveResult res = solve(prob, wcfg);

    dump_to(c.out)("weak_solution", res.u);
    std::ofstream hist(c.out / "weak_history.csv");
    hist << "iteration,delta,sup_change,residual\n";
    for (const auto& h : res.history) {
        hist << h.iteration << ',' << format_number(h.delta) << ',' << format_number(h.sup_change) << ','
             << format_number(h.residual) << '\n';
    }
    const bool ok = res.weak_residual <= tol::kSolveWeakResidual;
    Json j{{"problem", ps.to_json()},
           {"grid", n},
           {"iterations", res.iterations},
           {"weak_residual", res.weak_residual},
           {"tolerance", tol::kSolveWeakResidual},
           {"level_residuals", res.level_residuals},
           {"warnings", res.warnings},
           {"passed", ok}};
    if (ps.exact) j["sup_error"] = sup_difference(res.u, prob.data);
    write_json(c.out / "weak_summary.json", j);
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << word(ok) << " solve-weak " << ps.name << " n=" << n << " residual "
              << format_number(res.weak_residual) << " iterations " << res.iterations << '\n';
    return verdict(ok);
}

int solve_visc_cmd(const Context& c) {
    const ProblemSpec& ps = c.cfg.problem;
    const int n = c.grid.value_or(ps.grids.back());
    const DirichletProblem prob = make_problem(ps, n);
    RelaxationConfig vcfg = c.cfg.viscosity;
    vcfg.threads = c.cfg.threads;
    const RelaxResult res = relax(prob, vcfg);

    dump_to(c.out)("viscosity_solution", res.u);
    std::ofstream hist(c.out / "viscosity_history.csv");
    hist << "step,residual\n";
    for (const auto& h : res.history) hist << h.step << ',' << format_number(h.residual) << '\n';
    const bool ok = res.residual <= vcfg.tol;
    Json j{{"problem", ps.to_json()}, {"grid", n},           {"steps", res.steps},
           {"residual", res.residual}, {"tolerance", vcfg.tol}, {"tau", res.tau},
           {"passed", ok}};
    if (ps.exact) j["sup_error"] = sup_difference(res.u, prob.data);
    write_json(c.out / "viscosity_summary.json", j);
    std::cout << word(ok) << " solve-visc " << ps.name << " n=" << n << " residual " << format_number(res.residual)
              << " steps " << res.steps << '\n';
    return verdict(ok);
}

int equivalence_cmd(Context& c) {
    if (c.grid) {
        const int n = *c.grid;
        for (auto& p : c.cfg.equivalence.problems) p.grids = {std::max(2, n / 4), std::max(3, n / 2), n};
    }
    const auto sink = dump_to(c.out / "solutions");
    bool ok = true;
    Json all = Json::array();
    for (const auto& p : c.cfg.equivalence.problems) {
        const EquivalenceReport rep = run_equivalence(p, c.cfg, suite_equivalence_tolerances(), sink);
        rep.write_csv((c.out / ("equivalence_" + p.name + ".csv")).string());
        write_json(c.out / ("equivalence_" + p.name + ".json"), rep.to_json());
        all.push_back({{"problem", p.name}, {"passed", rep.passed()}});
        ok = ok && rep.passed();
        std::cout << word(rep.passed()) << " equivalence " << p.name << " final sup difference "
                  << format_number(rep.rows.back().sup_difference) << '\n';
    }
    write_json(c.out / "equivalence_summary.json", {{"problems", all}, {"passed", ok}});
    return verdict(ok);
}

int infconv_cmd(Context& c) {
    if (c.grid) {
        for (auto& b : c.cfg.infconv.bases) b.grid = *c.grid;
        c.cfg.infconv.probe.grid = *c.grid;
    }
    Suite suite(c.cfg, dump_to(c.out / "solutions"));
    const CriterionResult props = suite.run(4);
    const CriterionResult defect = suite.run(5);
    for (const auto& b : props.details["bases"]) {
        const std::string name = b["base"];
        write_json(c.out / ("infconv_" + name + ".json"), b);
        std::ofstream os(c.out / ("infconv_" + name + ".csv"));
        os << "epsilon,q,r_eps,sup_gap,defect\n";
        for (const auto& r : b["rows"]) {
            os << format_number(r["epsilon"].get<double>()) << ',' << format_number(r["q"].get<double>()) << ','
               << format_number(r["r_eps"].get<double>()) << ',' << format_number(r["sup_gap"].get<double>())
               << ',' << (r["defect"].is_null() ? std::string() : format_number(r["defect"].get<double>()))
               << '\n';
        }
    }
    write_json(c.out / "defect_probe.json", defect.details);
    std::ofstream os(c.out / "defect_probe.csv");
    os << "epsilon,r_eps,defect,min_value,probes\n";
    if (defect.details.contains("rows")) {
        for (const auto& r : defect.details["rows"]) {
            os << format_number(r["epsilon"].get<double>()) << ',' << format_number(r["r_eps"].get<double>()) << ','
               << format_number(r["defect"].get<double>()) << ',' << format_number(r["min_value"].get<double>())
               << ',' << r["probes"].get<std::size_t>() << '\n';
        }
    }
    std::cout << word(props.passed) << " infconv " << props.summary << '\n';
    std::cout << word(defect.passed) << " defect " << defect.summary << '\n';
    if (props.solver_failure || defect.solver_failure) return kSolver;
    return verdict(props.passed && defect.passed);
}

int single_criterion(Context& c, int id, const std::string& file) {
    Suite suite(c.cfg);
    const CriterionResult r = suite.run(id);
    write_json(c.out / file, r.details);
    std::cout << word(r.passed) << ' ' << r.name << ": " << r.summary << '\n';
    if (r.solver_failure) return kSolver;
    return verdict(r.passed);
}

int rado_cmd(Context& c) {
    if (c.grid) {
        for (auto& cand : c.cfg.rado.candidates) cand.grid = *c.grid;
    }
    return single_criterion(c, 8, "rado.json");
}

int verify_cmd(const Context& c) {
    Suite suite(c.cfg);
    const auto results = suite.run_all();
    write_json(c.out / "verify_report.json", suite_json(c.cfg, results));
    bool ok = true, solver = false;
    for (const auto& r : results) {
        std::cout << word(r.passed) << " [" << r.id << "] " << r.name << ": " << r.summary << '\n';
        ok = ok && r.passed;
        solver = solver || r.solver_failure;
    }
    if (solver) return kSolver;
    return verdict(ok);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pxlab: variable-exponent p-Laplacian solvers and property checks"};
    app.require_subcommand(1, 1);
    Options o;
    auto add_common = [&o](CLI::App* sub) {
        sub->add_option("--config", o.config, "config file, or 'default' for the built-in one");
        sub->add_option("--out", o.out, "output directory (overrides the config)");
        sub->add_option("--grid", o.grid, "interior nodes per axis");
        sub->add_option("--seed", o.seed, "random seed (overrides the config)");
        sub->add_option("--threads", o.threads, "worker threads; 1 is the reproducible reference mode");
        return sub;
    };
    auto* s_weak = add_common(app.add_subcommand("solve-weak", "solve the configured problem in divergence form"));
    auto* s_visc = add_common(app.add_subcommand("solve-visc", "solve the configured problem by relaxation"));
    auto* s_inf = add_common(app.add_subcommand("infconv", "inf-convolution properties and defect decay"));
    auto* s_eq = add_common(app.add_subcommand("equivalence", "weak/viscosity equivalence studies"));
    auto* s_rado = add_common(app.add_subcommand("rado", "zero-set removability audit"));
    auto* s_fuzz = add_common(app.add_subcommand("fuzz", "pointwise inequality fuzz"));
    auto* s_ver = add_common(app.add_subcommand("verify", "run the full property suite"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfig;
    }

    try {
        Context c = prepare(o);
        if (s_weak->parsed()) return solve_weak_cmd(c);
        if (s_visc->parsed()) return solve_visc_cmd(c);
        if (s_inf->parsed()) return infconv_cmd(c);
        if (s_eq->parsed()) return equivalence_cmd(c);
        if (s_rado->parsed()) return rado_cmd(c);
        if (s_fuzz->parsed()) return single_criterion(c, 6, "fuzz.json");
        if (s_ver->parsed()) return verify_cmd(c);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << " (last residual " << format_number(e.last_residual())
                  << ")\n";
        return kSolver;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kSolver;
    }
    return kConfig;
}
