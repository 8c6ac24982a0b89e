#include "pxlap/infconv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pxlap/operators.hpp"
#include "pxlap/parallel.hpp"

namespace pxlap {

namespace {

struct Offset {
    int di = 0;
    int dj = 0;
    double dist = 0.0;
};

// Integer offsets with physical length <= radius, nearest first.
std::vector<Offset> ball_offsets(const Domain& d, double radius) {
    const double slack = radius * (1.0 + 1e-12);
    const int mi = static_cast<int>(std::floor(slack / d.spacing(0)));
    const int mj = d.dim() == 2 ? static_cast<int>(std::floor(slack / d.spacing(1))) : 0;
    std::vector<Offset> out;
    for (int j = -mj; j <= mj; ++j) {
        for (int i = -mi; i <= mi; ++i) {
            const double x = i * d.spacing(0);
            const double y = d.dim() == 2 ? j * d.spacing(1) : 0.0;
            const double r = std::hypot(x, y);
            if (r <= slack) out.push_back({i, j, r});
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Offset& a, const Offset& b) { return a.dist < b.dist; });
    return out;
}

bool shifted(const Domain& d, NodeIndex idx, const Offset& o, std::size_t& out) {
    const int i = idx[0] + o.di;
    const int j = idx[1] + o.dj;
    if (i < 0 || i >= d.node_count(0) || j < 0 || j >= d.node_count(1)) return false;
    out = d.flat({i, j});
    return true;
}

double resolved_gamma(double gamma, const Domain& d) {
    return gamma > 0.0 ? gamma : 10.0 * d.min_spacing();
}

// Grid directions used for one-sided curvature tests: axes and, in 2D,
// both diagonals.
std::vector<Offset> stencil_directions(const Domain& d) {
    std::vector<Offset> dirs{{1, 0, d.spacing(0)}};
    if (d.dim() == 2) {
        dirs.push_back({0, 1, d.spacing(1)});
        const double diag = std::hypot(d.spacing(0), d.spacing(1));
        dirs.push_back({1, 1, diag});
        dirs.push_back({1, -1, diag});
    }
    return dirs;
}

// Second difference along a direction divided by its squared length.
double directional_curvature(const Domain& d, std::span<const double> v, NodeIndex idx,
                             const Offset& o) {
    const double up = v[d.flat({idx[0] + o.di, idx[1] + o.dj})];
    const double dn = v[d.flat({idx[0] - o.di, idx[1] - o.dj})];
    return (up - 2.0 * v[d.flat(idx)] + dn) / (o.dist * o.dist);
}

// Curvature of the penalty at distance s: (q-1) s^{q-2} / eps^{q-1}.
double penalty_curvature(const InfConvConfig& c, double s) {
    if (c.q == 2.0) return 1.0 / c.epsilon;
    return (c.q - 1.0) * std::pow(s, c.q - 2.0) / std::pow(c.epsilon, c.q - 1.0);
}

}  // namespace

double InfConvConfig::penalty(double distance) const {
    if (distance == 0.0) return 0.0;
    return std::pow(distance, q) / (q * std::pow(epsilon, q - 1.0));
}

InfConvConfig make_infconv_config(double epsilon, double q, double osc) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (!(q >= 2.0)) throw std::invalid_argument("q must be >= 2");
    InfConvConfig c;
    c.epsilon = epsilon;
    c.q = q;
    c.osc = osc;
    c.r_eps = std::pow(q * std::pow(epsilon, q - 1.0) * osc, 1.0 / q);
    return c;
}

double q_min(double p_minus) {
    if (!(p_minus > 1.0)) throw std::invalid_argument("q_min needs p- > 1");
    return p_minus < 2.0 ? p_minus / (p_minus - 1.0) : 2.0;
}

InfConvResult inf_convolve(const GridFunction& u, double epsilon, double q, int threads) {
    u.check_finite();
    const Domain& d = u.domain();
    InfConvResult res{u, make_infconv_config(epsilon, q, u.oscillation()), {}, {}, {}};
    const std::size_t n = u.size();
    res.minimizer_offset.assign(n, {0.0, 0.0});
    res.minimizer.resize(n);
    for (std::size_t k = 0; k < n; ++k) res.minimizer[k] = k;

    const InfConvConfig& cfg = res.config;
    if (cfg.osc == 0.0) return res;
    if (cfg.r_eps < d.min_spacing()) {
        res.warnings.emplace_back("grid cannot resolve search radius");
        return res;
    }

    const auto ball = ball_offsets(d, cfg.r_eps);
    std::vector<double> pen(ball.size());
    for (std::size_t b = 0; b < ball.size(); ++b) pen[b] = cfg.penalty(ball[b].dist);

    const auto src = u.values();
    auto dst = res.u_eps.values();
    parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            if (!u.in_closure(k)) continue;
            const NodeIndex idx = d.unflat(k);
            double best = src[k];
            std::size_t arg = k;
            std::size_t barg = 0;
            for (std::size_t b = 1; b < ball.size(); ++b) {
                std::size_t y;
                if (!shifted(d, idx, ball[b], y) || !u.in_closure(y)) continue;
                const double val = src[y] + pen[b];
                if (val < best) {
                    best = val;
                    arg = y;
                    barg = b;
                }
            }
            dst[k] = best;
            res.minimizer[k] = arg;
            res.minimizer_offset[k] = {ball[barg].di * d.spacing(0),
                                       d.dim() == 2 ? ball[barg].dj * d.spacing(1) : 0.0};
        }
    });
    return res;
}

std::vector<std::size_t> inset_nodes(const GridFunction& u, double margin) {
    const Domain& d = u.domain();
    const auto ball = ball_offsets(d, margin);
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (!u.is_interior(k) || d.on_edge(k)) continue;
        const NodeIndex idx = d.unflat(k);
        bool ok = true;
        for (const auto& o : ball) {
            std::size_t y;
            if (!shifted(d, idx, o, y) || !u.is_interior(y)) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(k);
    }
    return out;
}

double sampled_modulus(const GridFunction& u, double t) {
    const Domain& d = u.domain();
    const auto ball = ball_offsets(d, t);
    double w = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (!u.in_closure(k)) continue;
        const NodeIndex idx = d.unflat(k);
        for (const auto& o : ball) {
            std::size_t y;
            if (!shifted(d, idx, o, y) || !u.in_closure(y)) continue;
            w = std::max(w, std::abs(u[k] - u[y]));
        }
    }
    return w;
}

Json InfConvPropertyReport::to_json() const {
    Json j;
    j["epsilon"] = epsilon;
    j["q"] = q;
    j["r_eps"] = r_eps;
    j["h"] = h;
    j["probe_nodes"] = probe_nodes;
    j["jet_probes"] = jet_probes;
    j["sup_gap"] = sup_gap;
    j["i_max_excess"] = max_excess;
    j["ii_max_offset"] = max_offset;
    j["iii_semiconcavity_excess"] = semiconcavity_excess;
    j["iii_tolerance"] = semiconcavity_tol;
    j["iv_attainment_error"] = attainment_error;
    j["v_eta_error"] = eta_error;
    j["v_eta_tolerance"] = eta_tol;
    j["v_jet_bound_excess"] = jet_bound_excess;
    j["offset_bound_excess"] = offset_bound_excess;
    j["pass"] = {{"i", pass_i}, {"ii", pass_ii}, {"iii", pass_iii}, {"iv", pass_iv}, {"v", pass_v}};
    j["passed"] = passed();
    j["notes"] = notes;
    return j;
}

InfConvPropertyReport verify_properties(const GridFunction& u, const InfConvResult& result,
                                        const InfConvPropertyOptions& opt) {
    const Domain& d = u.domain();
    const InfConvConfig& cfg = result.config;
    const auto ue = result.u_eps.values();
    InfConvPropertyReport rep;
    rep.epsilon = cfg.epsilon;
    rep.q = cfg.q;
    rep.r_eps = cfg.r_eps;
    rep.h = d.min_spacing();
    rep.notes = result.warnings;

    // (i) on the whole closed domain.
    double excess = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (!u.in_closure(k)) continue;
        excess = std::max(excess, ue[k] - u[k]);
        rep.sup_gap = std::max(rep.sup_gap, std::abs(u[k] - ue[k]));
    }
    rep.max_excess = excess;
    rep.pass_i = excess <= 0.0;

    const auto probes = inset_nodes(u, std::max(cfg.r_eps, rep.h));
    rep.probe_nodes = probes.size();
    if (probes.empty()) rep.notes.emplace_back("no nodes farther than r(eps) from the boundary");

    const double scale = std::max(1.0, u.sup_norm());
    const double hmax = d.dim() == 2 ? std::hypot(d.spacing(0), d.spacing(1)) : d.spacing(0);
    // Roundoff of a second difference of values of size `scale`.
    const double round = 64.0 * std::numeric_limits<double>::epsilon() * scale / (rep.h * rep.h);
    const double gamma = resolved_gamma(opt.gamma, d);
    const double k_r = penalty_curvature(cfg, cfg.r_eps);
    rep.semiconcavity_tol =
        opt.semiconcavity_c * (penalty_curvature(cfg, cfg.r_eps + hmax) - k_r) + round;

    const double omega = sampled_modulus(u, cfg.r_eps);
    const double offset_bound = std::pow(cfg.q * std::pow(cfg.epsilon, cfg.q - 1.0) * omega, 1.0 / cfg.q);
    rep.offset_bound_excess = -std::numeric_limits<double>::infinity();

    const auto dirs = stencil_directions(d);
    const int dim = d.dim();
    double eta[2];
    double hess[4];
    rep.semiconcavity_excess = -std::numeric_limits<double>::infinity();
    rep.jet_bound_excess = -std::numeric_limits<double>::infinity();
    for (std::size_t k : probes) {
        const NodeIndex idx = d.unflat(k);
        const auto& off = result.minimizer_offset[k];
        const double s = std::hypot(off[0], off[1]);

        // (ii)
        rep.max_offset = std::max(rep.max_offset, s);
        rep.offset_bound_excess = std::max(rep.offset_bound_excess, s - offset_bound - hmax);

        // (iv)
        const std::size_t y = result.minimizer[k];
        const double att = std::abs(ue[k] - u[y] - cfg.penalty(s));
        rep.attainment_error = std::max(rep.attainment_error, att / scale);
        if (!u.in_closure(y)) rep.attainment_error = std::numeric_limits<double>::infinity();

        // (iii) along grid directions
        for (const auto& o : dirs) {
            const double c = directional_curvature(d, ue, idx, o);
            rep.semiconcavity_excess = std::max(rep.semiconcavity_excess, c - k_r);
        }

        // (v)
        detail::jet_at(d, ue, k, eta, hess);
        double en = 0.0;
        for (int a = 0; a < dim; ++a) en += eta[a] * eta[a];
        en = std::sqrt(en);
        if (!(en > gamma)) continue;
        ++rep.jet_probes;
        // x - x_eps = -offset
        const double w = s > 0.0 ? std::pow(s, cfg.q - 2.0) / std::pow(cfg.epsilon, cfg.q - 1.0) : 0.0;
        double err = 0.0;
        for (int a = 0; a < dim; ++a) err = std::max(err, std::abs(eta[a] + off[a] * w));
        const double lip_eta = penalty_curvature(cfg, s + hmax);
        const double tol_eta = opt.jet_eta_c * hmax * lip_eta;
        if (err - tol_eta > rep.eta_error - rep.eta_tol || rep.jet_probes == 1) {
            rep.eta_error = err;
            rep.eta_tol = tol_eta;
        }
        const double bound = (cfg.q - 1.0) / cfg.epsilon * std::pow(en, (cfg.q - 2.0) / (cfg.q - 1.0));
        const double slack = opt.jet_bound_c * (penalty_curvature(cfg, s + hmax) -
                                                penalty_curvature(cfg, std::max(s - hmax, 0.0))) +
                             round;
        for (const auto& o : dirs) {
            const double c = directional_curvature(d, ue, idx, o);
            rep.jet_bound_excess = std::max(rep.jet_bound_excess, c - bound - slack);
        }
    }

    rep.pass_ii = rep.max_offset <= cfg.r_eps * (1.0 + 1e-12);
    rep.pass_iii = probes.empty() || rep.semiconcavity_excess <= rep.semiconcavity_tol;
    rep.pass_iv = rep.attainment_error <= 1e-12;
    rep.pass_v = rep.eta_error <= rep.eta_tol && !(rep.jet_bound_excess > 0.0);
    if (rep.jet_probes == 0) {
        rep.notes.emplace_back("no jet probes above the gradient threshold");
        rep.jet_bound_excess = 0.0;
    }
    if (probes.empty()) {
        rep.semiconcavity_excess = 0.0;
        rep.offset_bound_excess = 0.0;
    }
    return rep;
}

DefectReport supersolution_defect(const GridFunction& u, const ExponentField& p, double epsilon,
                                  double q, const DefectOptions& opt) {
    return supersolution_defect(u, inf_convolve(u, epsilon, q, opt.threads), p, opt);
}

DefectReport supersolution_defect(const GridFunction& u, const InfConvResult& res, const ExponentField& p,
                                  const DefectOptions& opt) {
    const Domain& d = u.domain();
    DefectReport rep;
    rep.epsilon = res.config.epsilon;
    rep.q = res.config.q;
    rep.r_eps = res.config.r_eps;
    rep.sup_gap = sup_difference(u, res.u_eps);

    const double gamma = resolved_gamma(opt.gamma, d);
    const auto probes = inset_nodes(u, std::max(res.config.r_eps, d.min_spacing()));
    const int dim = d.dim();
    const auto ue = res.u_eps.values();
    double eta[2];
    double hess[4];
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t k : probes) {
        detail::jet_at(d, ue, k, eta, hess);
        OperatorSample s;
        s.x = d.point(k);
        s.jet.eta = Vector(dim);
        s.jet.hess = Matrix(dim, dim);
        for (int a = 0; a < dim; ++a) {
            s.jet.eta[a] = eta[a];
            for (int b = 0; b < dim; ++b) s.jet.hess(a, b) = hess[a * dim + b];
        }
        const double en = s.jet.eta.norm();
        if (!(en > gamma)) {
            ++rep.skipped;
            continue;
        }
        s.p = p(s.x);
        const double val = std::pow(en, std::min(s.p - 2.0, 0.0)) * normalized_pxlap(s);
        lo = std::min(lo, val);
        ++rep.probes;
    }
    if (rep.probes == 0) throw std::runtime_error("no admissible probe points");
    rep.min_value = lo;
    rep.defect = std::max(0.0, -lo);
    return rep;
}

}  // namespace pxlap
