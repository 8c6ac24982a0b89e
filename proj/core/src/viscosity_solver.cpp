#include "pxlap/viscosity_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pxlap/grid_io.hpp"
#include "pxlap/operators.hpp"
#include "pxlap/parallel.hpp"

namespace pxlap {

namespace {

double g_at(const Domain& d, std::span<const double> v, std::size_t k, double p, double delta) {
    double eta[2];
    double hess[4];
    detail::jet_at(d, v, k, eta, hess);
    const int n = d.dim();
    double tr = 0.0;
    double m = delta;
    double q = 0.0;
    for (int a = 0; a < n; ++a) {
        tr += hess[a * n + a];
        m += eta[a] * eta[a];
        for (int b = 0; b < n; ++b) q += hess[a * n + b] * eta[a] * eta[b];
    }
    if (m == 0.0) return tr;
    return tr + (p - 2.0) / m * q;
}

std::vector<double> nodal_exponent(const GridFunction& u, const ExponentField& p,
                                   const std::vector<std::size_t>& nodes) {
    std::vector<double> out(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) out[i] = p(u.domain().point(nodes[i]));
    return out;
}

}  // namespace

double relaxation_step(const Domain& domain, const ExponentField& p, double tau_factor) {
    if (!(tau_factor > 0.0 && tau_factor <= 1.0)) throw std::invalid_argument("tau_factor must lie in (0, 1]");
    const double h = domain.min_spacing();
    return tau_factor * h * h / (2.0 * (domain.dim() + std::max(p.p_plus() - 2.0, 0.0)));
}

GridFunction regularized_normalized_operator(const GridFunction& u, const ExponentField& p, double delta) {
    GridFunction g(u.domain());
    g.copy_kinds(u);
    const auto nodes = u.interior_nodes();
    const auto pv = nodal_exponent(u, p, nodes);
    for (std::size_t i = 0; i < nodes.size(); ++i) g[nodes[i]] = g_at(u.domain(), u.values(), nodes[i], pv[i], delta);
    return g;
}

GridFunction relax_step(const GridFunction& u, const ExponentField& p, double delta, double tau) {
    const GridFunction g = regularized_normalized_operator(u, p, delta);
    GridFunction out = u;
    for (std::size_t k : u.interior_nodes()) out[k] = u[k] + tau * g[k];
    return out;
}

RelaxResult relax(const DirichletProblem& problem, const RelaxationConfig& cfg) {
    if (!(cfg.delta > 0.0) || !(cfg.tol > 0.0) || cfg.max_steps < 1) {
        throw std::invalid_argument("relaxation needs delta, tol and max_steps positive");
    }
    const Domain& d = problem.domain();
    RelaxResult res{harmonic_extension(problem), 0, 0.0, relaxation_step(d, problem.p, cfg.tau_factor), {}};
    GridFunction& u = res.u;
    const auto nodes = u.interior_nodes();
    const auto pv = nodal_exponent(u, problem.p, nodes);
    const double limit = 2.0 * std::max(u.sup_norm(), 1e-300);
    const int threads = cfg.gauss_seidel ? 1 : cfg.threads;

    std::vector<double> g(nodes.size());
    auto v = u.values();
    const long every = std::max(1L, cfg.record_every);
    for (long step = 0;; ++step) {
        double sup = 0.0;
        if (cfg.gauss_seidel) {
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                const double gi = g_at(d, v, nodes[i], pv[i], cfg.delta);
                sup = std::max(sup, std::abs(gi));
                g[i] = gi;
                v[nodes[i]] += res.tau * gi;
            }
        } else {
            parallel_for(nodes.size(), threads, [&](std::size_t b, std::size_t e) {
                for (std::size_t i = b; i < e; ++i) g[i] = g_at(d, v, nodes[i], pv[i], cfg.delta);
            });
            for (double gi : g) sup = std::max(sup, std::abs(gi));
        }
        res.residual = sup;
        res.steps = step;
        if (step % every == 0) res.history.push_back({step, sup});
        if (!std::isfinite(sup)) throw SolverError("relaxation produced non-finite values", sup);
        if (sup < cfg.tol) {
            if (cfg.gauss_seidel) {
                // the sweep already moved u; undo it so the returned state is the checked one
                for (std::size_t i = 0; i < nodes.size(); ++i) v[nodes[i]] -= res.tau * g[i];
            }
            break;
        }
        if (step >= cfg.max_steps) {
            throw SolverError("relaxation did not reach tol within " + std::to_string(cfg.max_steps) +
                                  " steps (last residual " + format_number(sup) + ")",
                              sup);
        }
        if (!cfg.gauss_seidel) {
            for (std::size_t i = 0; i < nodes.size(); ++i) v[nodes[i]] += res.tau * g[i];
        }
        if (u.sup_norm() > limit) throw SolverError("relaxation diverged: sup |u| doubled", sup);
    }
    if (res.history.empty() || res.history.back().step != res.steps) res.history.push_back({res.steps, res.residual});
    return res;
}

Json ViscosityResidualReport::to_json(bool include_values) const {
    Json j;
    j["gamma"] = gamma;
    j["probes"] = values.size();
    j["skipped"] = skipped;
    j["min_F"] = min_value;
    j["max_F"] = max_value;
    j["super_defect"] = super_defect;
    j["sub_defect"] = sub_defect;
    if (include_values) {
        j["nodes"] = nodes;
        j["values"] = values;
    }
    return j;
}

ViscosityResidualReport viscosity_residual(const GridFunction& u, const ExponentField& p, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    ViscosityResidualReport rep;
    rep.gamma = gamma;
    const Domain& d = u.domain();
    const int n = d.dim();
    double eta[2];
    double hess[4];
    rep.min_value = std::numeric_limits<double>::infinity();
    rep.max_value = -std::numeric_limits<double>::infinity();
    for (std::size_t k : u.interior_nodes()) {
        detail::jet_at(d, u.values(), k, eta, hess);
        OperatorSample s;
        s.x = d.point(k);
        s.jet.eta = Vector(n);
        s.jet.hess = Matrix(n, n);
        for (int a = 0; a < n; ++a) {
            s.jet.eta[a] = eta[a];
            for (int b = 0; b < n; ++b) s.jet.hess(a, b) = hess[a * n + b];
        }
        if (!(s.jet.eta.norm() > gamma)) {
            ++rep.skipped;
            continue;
        }
        s.p = p(s.x);
        const double f = normalized_pxlap(s);
        rep.nodes.push_back(k);
        rep.values.push_back(f);
        rep.min_value = std::min(rep.min_value, f);
        rep.max_value = std::max(rep.max_value, f);
    }
    if (rep.values.empty()) {
        rep.min_value = rep.max_value = 0.0;
    }
    rep.super_defect = std::max(0.0, -rep.min_value);
    rep.sub_defect = std::max(0.0, rep.max_value);
    return rep;
}

}  // namespace pxlap
