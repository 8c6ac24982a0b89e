#include "pxlap/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "pxlap/grid_io.hpp"
#include "pxlap/tolerances.hpp"
#include "pxlap/viscosity_solver.hpp"

namespace pxlap {

namespace {

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::ofstream open_csv(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    return os;
}

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::string grid_tag(const std::string& name, int n) { return name + "_n" + std::to_string(n); }

double gradient_holder(const GridFunction& u, const std::vector<char>& inner) {
    const Domain& d = u.domain();
    double q = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (!inner[k]) continue;
        const Vector g = gradient_centered(u, d.unflat(k));
        for (int a = 0; a < d.dim(); ++a) {
            const std::size_t y = k + static_cast<std::size_t>(d.stride(a));
            if (y >= u.size() || !inner[y]) continue;
            const Vector gy = gradient_centered(u, d.unflat(y));
            q = std::max(q, (g - gy).norm() / std::sqrt(d.spacing(a)));
        }
    }
    return q;
}

}  // namespace

std::vector<double> observed_orders(const std::vector<double>& h, const std::vector<double>& e) {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < std::min(h.size(), e.size()); ++i) {
        if (e[i] <= 0.0 || e[i + 1] <= 0.0) {
            out.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        out.push_back(std::log(e[i] / e[i + 1]) / std::log(h[i] / h[i + 1]));
    }
    return out;
}

Json EquivalenceReport::to_json() const {
    Json j;
    j["problem"] = problem.to_json();
    j["gamma"] = gamma;
    j["margin"] = margin;
    Json rows_j = Json::array();
    for (const auto& r : rows) {
        rows_j.push_back({{"n", r.n},
                          {"h", r.h},
                          {"sup_difference", r.sup_difference},
                          {"weak_error", opt(r.weak_error)},
                          {"viscosity_error", opt(r.viscosity_error)},
                          {"weak_iterations", r.weak_iterations},
                          {"viscosity_steps", r.viscosity_steps},
                          {"viscosity_residual_of_weak", r.viscosity_residual_of_weak},
                          {"viscosity_probes", r.viscosity_probes},
                          {"weak_residual_of_viscosity", r.weak_residual_of_viscosity},
                          {"weak_probes", r.weak_probes},
                          {"gradient_holder", r.gradient_holder},
                          {"cross_pass", r.cross_pass}});
    }
    j["rows"] = rows_j;
    auto finite = [](const std::vector<double>& v) {
        Json a = Json::array();
        for (double x : v) a.push_back(std::isfinite(x) ? Json(x) : Json(nullptr));
        return a;
    };
    j["difference_orders"] = finite(difference_orders);
    j["weak_orders"] = finite(weak_orders);
    j["viscosity_orders"] = finite(viscosity_orders);
    j["warnings"] = warnings;
    j["monotone"] = monotone;
    j["cross_pass"] = cross_pass;
    j["error_pass"] = error_pass ? Json(*error_pass) : Json(nullptr);
    j["passed"] = passed();
    return j;
}

void EquivalenceReport::write_csv(const std::string& path) const {
    auto os = open_csv(path);
    os << "n,h,sup_difference,weak_error,viscosity_error,viscosity_residual_of_weak,weak_residual_of_viscosity\n";
    for (const auto& r : rows) {
        os << r.n << ',' << format_number(r.h) << ',' << format_number(r.sup_difference) << ','
           << cell(r.weak_error) << ',' << cell(r.viscosity_error) << ','
           << format_number(r.viscosity_residual_of_weak) << ',' << format_number(r.weak_residual_of_viscosity)
           << '\n';
    }
}

EquivalenceReport run_equivalence(const ProblemSpec& spec, const ExperimentConfig& cfg,
                                  const EquivalenceTolerances& tol, const SolutionSink& sink) {
    EquivalenceReport rep;
    rep.problem = spec;
    rep.gamma = cfg.equivalence.gamma;
    rep.margin = cfg.equivalence.margin;
    SolverConfig wcfg = cfg.weak;
    wcfg.threads = cfg.threads;
    RelaxationConfig vcfg = cfg.viscosity;
    vcfg.threads = cfg.threads;

    std::vector<double> hs, diffs, werr, verr;
    for (int n : spec.grids) {
        const DirichletProblem prob = make_problem(spec, n);
        const std::string tag = grid_tag(spec.name, n);
        const WeakSolveResult weak = [&] {
            try {
                return solve(prob, wcfg);
            } catch (const SolverError& e) {
                throw SolverError(tag + " weak: " + e.what(), e.last_residual());
            }
        }();
        const RelaxResult visc = [&] {
            try {
                return relax(prob, vcfg);
            } catch (const SolverError& e) {
                throw SolverError(tag + " viscosity: " + e.what(), e.last_residual());
            }
        }();
        for (const auto& w : weak.warnings) rep.warnings.push_back(tag + ": " + w);
        if (sink) {
            sink(tag + "_weak", weak.u);
            sink(tag + "_viscosity", visc.u);
        }

        EquivalenceRow row;
        row.n = n;
        row.h = prob.domain().min_spacing();
        row.sup_difference = sup_difference(weak.u, visc.u);
        row.weak_iterations = weak.iterations;
        row.viscosity_steps = visc.steps;
        if (spec.exact) {
            row.weak_error = sup_difference(weak.u, prob.data);
            row.viscosity_error = sup_difference(visc.u, prob.data);
            werr.push_back(*row.weak_error);
            verr.push_back(*row.viscosity_error);
        }
        // Boundary layers of the two schemes differ at grid scale (staircase
        // and box corners), so both audits stay in the inner region.
        std::vector<char> inner(weak.u.size(), 0);
        for (std::size_t k : inset_nodes(weak.u, rep.margin)) inner[k] = 1;
        const auto vr = viscosity_residual(weak.u, prob.p, rep.gamma);
        for (std::size_t i = 0; i < vr.nodes.size(); ++i) {
            if (!inner[vr.nodes[i]]) continue;
            ++row.viscosity_probes;
            row.viscosity_residual_of_weak = std::max(row.viscosity_residual_of_weak, std::abs(vr.values[i]));
        }
        row.gradient_holder = gradient_holder(weak.u, inner);
        const auto wr = audit_supersolution(visc.u, prob.p, TestFamily::hat, 0.0);
        for (std::size_t i = 0; i < wr.centers.size(); ++i) {
            if (!inner[wr.centers[i]]) continue;
            ++row.weak_probes;
            row.weak_residual_of_viscosity = std::max(row.weak_residual_of_viscosity, std::abs(wr.residuals[i]));
        }
        row.cross_pass = row.viscosity_residual_of_weak <= tol.cross_viscosity_c * row.h &&
                         row.weak_residual_of_viscosity <= tol.cross_weak_c * row.h;
        if (row.viscosity_probes == 0 || row.weak_probes == 0) {
            row.cross_pass = false;
            rep.warnings.push_back(tag + ": no audit probes in the inner region");
        }
        hs.push_back(row.h);
        diffs.push_back(row.sup_difference);
        rep.rows.push_back(row);
    }

    rep.difference_orders = observed_orders(hs, diffs);
    rep.monotone = true;
    for (std::size_t i = 0; i + 1 < diffs.size(); ++i) {
        if (!(diffs[i + 1] < diffs[i] * (1.0 + tol::kMonotoneSlack))) rep.monotone = false;
    }
    rep.cross_pass = std::all_of(rep.rows.begin(), rep.rows.end(), [](const auto& r) { return r.cross_pass; });
    if (spec.exact) {
        rep.weak_orders = observed_orders(hs, werr);
        rep.viscosity_orders = observed_orders(hs, verr);
        bool ok = true;
        for (const auto& r : rep.rows) {
            ok = ok && *r.weak_error <= tol.weak_error_c * r.h && *r.viscosity_error <= tol.viscosity_error_c * r.h;
        }
        for (double o : rep.weak_orders) ok = ok && o >= tol.min_order;
        for (double o : rep.viscosity_orders) ok = ok && o >= tol.min_order;
        rep.error_pass = ok;
    }
    return rep;
}

double huber(double t, double epsilon, double scale) {
    const double a = std::abs(t);
    if (a < scale * epsilon) return t * t / (2.0 * epsilon);
    return scale * a - scale * scale * epsilon / 2.0;
}

Json InfConvStudyReport::to_json() const {
    Json j;
    j["base"] = base;
    j["grid"] = grid;
    j["h"] = h;
    Json rows_j = Json::array();
    for (const auto& r : rows) {
        rows_j.push_back({{"epsilon", r.epsilon},
                          {"q", r.q},
                          {"r_eps", r.r_eps},
                          {"sup_gap", r.sup_gap},
                          {"defect", opt(r.defect)},
                          {"huber_error", opt(r.huber_error)},
                          {"properties", r.properties.to_json()}});
    }
    j["rows"] = rows_j;
    j["gap_decay"] = gap_decay;
    j["properties_pass"] = properties_pass;
    return j;
}

void InfConvStudyReport::write_csv(const std::string& path) const {
    auto os = open_csv(path);
    os << "epsilon,q,r_eps,sup_gap,defect\n";
    for (const auto& r : rows) {
        os << format_number(r.epsilon) << ',' << format_number(r.q) << ',' << format_number(r.r_eps) << ','
           << format_number(r.sup_gap) << ',' << cell(r.defect) << '\n';
    }
}

InfConvStudyReport run_infconv_study(const InfConvBaseSpec& base, double q, const std::vector<double>& epsilons,
                                     const InfConvPropertyOptions& options, int threads) {
    const GridFunction u = sample_on(base.domain, base.grid, base.function);
    const Domain& d = u.domain();
    std::optional<ExponentField> p;
    if (base.exponent) p = make_exponent_field(*base.exponent, d);

    InfConvStudyReport rep;
    rep.base = base.name;
    rep.grid = base.grid;
    rep.h = d.min_spacing();
    rep.gap_decay = true;
    rep.properties_pass = true;
    const bool huber_case = base.function.kind == "abs" && q == 2.0;

    for (double eps : epsilons) {
        const InfConvResult res = inf_convolve(u, eps, q, threads);
        InfConvStudyRow row;
        row.epsilon = eps;
        row.q = q;
        row.r_eps = res.config.r_eps;
        row.properties = verify_properties(u, res, options);
        row.sup_gap = row.properties.sup_gap;
        if (p) {
            try {
                row.defect = supersolution_defect(u, res, *p, {options.gamma, threads}).defect;
            } catch (const std::runtime_error& e) {
                row.properties.notes.push_back(std::string("defect: ") + e.what());
            }
        }
        if (huber_case) {
            const int ax = base.function.axis;
            double err = 0.0;
            for (std::size_t k : u.interior_nodes()) {
                const double t = d.point(k)[ax] - base.function.center[ax];
                const double ref = huber(t, eps, base.function.scale) + base.function.shift;
                err = std::max(err, std::abs(res.u_eps[k] - ref));
            }
            row.huber_error = err;
        }
        if (!rep.rows.empty() && row.sup_gap > rep.rows.back().sup_gap + tol::kGapSlack) rep.gap_decay = false;
        rep.properties_pass = rep.properties_pass && row.properties.passed();
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

Json DefectProbeReport::to_json() const {
    Json j;
    j["problem"] = problem;
    j["grid"] = grid;
    j["h"] = h;
    j["q"] = q;
    j["perturbation"] = perturbation;
    j["base_min_F"] = base_min_F;
    Json rows_j = Json::array();
    for (const auto& r : rows) {
        rows_j.push_back({{"epsilon", r.epsilon},
                          {"r_eps", r.r_eps},
                          {"defect", r.defect},
                          {"min_value", r.min_value},
                          {"probes", r.probes},
                          {"skipped", r.skipped},
                          {"sup_gap", r.sup_gap}});
    }
    j["rows"] = rows_j;
    j["tolerance"] = tolerance;
    j["non_increasing"] = non_increasing;
    j["final_small"] = final_small;
    j["all_probed"] = all_probed;
    j["notes"] = notes;
    j["passed"] = passed();
    return j;
}

void DefectProbeReport::write_csv(const std::string& path) const {
    auto os = open_csv(path);
    os << "epsilon,q,r_eps,defect,min_value,probes\n";
    for (const auto& r : rows) {
        os << format_number(r.epsilon) << ',' << format_number(r.q) << ',' << format_number(r.r_eps) << ','
           << format_number(r.defect) << ',' << format_number(r.min_value) << ',' << r.probes << '\n';
    }
}

DefectProbeReport run_defect_probe(const DefectProbeConfig& probe, const SolverConfig& weak, double tol_c,
                                   double ratio, int threads, const SolutionSink& sink) {
    const DirichletProblem prob = make_problem(probe.problem, probe.grid);
    SolverConfig wcfg = weak;
    wcfg.threads = threads;
    const WeakSolveResult sol = solve(prob, wcfg);

    GridFunction us = sol.u;
    const Domain& d = us.domain();
    for (std::size_t k = 0; k < us.size(); ++k) {
        const Point x = d.point(k);
        double r2 = 0.0;
        for (int a = 0; a < d.dim(); ++a) {
            const double c = a < static_cast<int>(probe.center.size()) ? probe.center[a] : 0.0;
            r2 += (x[a] - c) * (x[a] - c);
        }
        us[k] -= probe.perturbation * r2;
    }
    if (sink) {
        sink(grid_tag(probe.problem.name, probe.grid) + "_weak", sol.u);
        sink(grid_tag(probe.problem.name, probe.grid) + "_supersolution", us);
    }

    DefectProbeReport rep;
    rep.problem = probe.problem.name;
    rep.grid = probe.grid;
    rep.h = d.min_spacing();
    rep.q = probe.q > 0.0 ? probe.q : std::max(2.0, q_min(prob.p.p_minus()));
    rep.perturbation = probe.perturbation;
    rep.tolerance = tol_c * rep.h;
    rep.base_min_F = viscosity_residual(us, prob.p, 10.0 * rep.h).min_value;

    rep.all_probed = !probe.epsilons.empty();
    for (double eps : probe.epsilons) {
        const InfConvResult ic = inf_convolve(us, eps, rep.q, threads);
        try {
            rep.rows.push_back(supersolution_defect(us, ic, prob.p, {0.0, threads}));
        } catch (const std::runtime_error& e) {
            rep.all_probed = false;
            rep.notes.push_back("epsilon " + format_number(eps) + ": " + e.what());
            DefectReport empty;
            empty.epsilon = eps;
            empty.q = rep.q;
            empty.r_eps = ic.config.r_eps;
            rep.rows.push_back(empty);
        }
    }

    rep.non_increasing = true;
    for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i) {
        if (rep.rows[i + 1].defect > rep.rows[i].defect + rep.tolerance) rep.non_increasing = false;
    }
    rep.final_small = !rep.rows.empty() &&
                      rep.rows.back().defect <= std::max(ratio * rep.rows.front().defect, rep.tolerance);
    return rep;
}

Json RadoReport::to_json() const {
    Json j;
    j["name"] = name;
    j["expect"] = expect;
    j["band"] = band;
    j["h"] = h;
    j["on_count"] = on_count;
    j["off_count"] = off_count;
    j["on_max"] = on_max;
    j["off_max"] = off_max;
    j["ratio"] = ratio;
    j["degenerate"] = degenerate;
    j["notes"] = notes;
    j["passed"] = passed ? Json(*passed) : Json(nullptr);
    return j;
}

RadoReport run_rado_audit(const GridFunction& u, const ExponentField& p, double band, double floor) {
    const Domain& d = u.domain();
    const WeakResidualReport w = audit_supersolution(u, p, TestFamily::hat, 0.0);
    RadoReport rep;
    rep.band = band;
    rep.h = d.min_spacing();
    const int dj = d.dim() == 2 ? 1 : 0;
    for (std::size_t c = 0; c < w.centers.size(); ++c) {
        const NodeIndex idx = d.unflat(w.centers[c]);
        bool on = false;
        for (int j = -dj; j <= dj && !on; ++j) {
            for (int i = -1; i <= 1 && !on; ++i) {
                const std::size_t y = d.flat({idx[0] + i, idx[1] + j});
                on = u.in_closure(y) && std::abs(u[y]) <= band;
            }
        }
        const double r = std::abs(w.residuals[c]);
        if (on) {
            ++rep.on_count;
            rep.on_max = std::max(rep.on_max, r);
        } else {
            ++rep.off_count;
            rep.off_max = std::max(rep.off_max, r);
        }
    }
    if (rep.on_count == 0) {
        rep.degenerate = true;
        rep.notes.emplace_back("zero set does not meet the band: plain residual audit");
    }
    if (rep.off_count == 0) rep.notes.emplace_back("every test function meets the band");
    rep.ratio = (rep.on_max + floor) / (rep.off_max + floor);
    return rep;
}

FuzzReport run_fuzz(const FuzzOptions& options) { return run_inequality_fuzz(options); }

}  // namespace pxlap
