#include "pxlap/varexp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace pxlap {

namespace {

struct Sampled {
    std::vector<double> weight;
    std::vector<double> absval;
    std::vector<double> exponent;
};

Sampled sample(const GridFunction& u, const std::function<double(const Point&)>& p) {
    Sampled s;
    const Domain& d = u.domain();
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (!u.in_closure(k)) continue;
        s.weight.push_back(quadrature_weight(d, k));
        s.absval.push_back(std::abs(u[k]));
        s.exponent.push_back(p(d.point(k)));
    }
    return s;
}

double modular_scaled(const Sampled& s, double lambda) {
    double sum = 0.0;
    for (std::size_t i = 0; i < s.weight.size(); ++i) {
        if (s.absval[i] == 0.0) continue;
        sum += s.weight[i] * std::pow(s.absval[i] / lambda, s.exponent[i]);
    }
    return sum;
}

double norm_of(const Sampled& s, double domain_measure) {
    double umax = 0.0;
    for (double a : s.absval) {
        if (!std::isfinite(a)) throw std::invalid_argument("luxemburg norm: non-finite values");
        umax = std::max(umax, a);
    }
    if (umax == 0.0) return 0.0;
    // modular(u/hi) <= |Omega| / (1+|Omega|)^p- < 1 because p > 1
    double hi = umax * (1.0 + domain_measure);
    double lo = std::numeric_limits<double>::epsilon() * umax;
    while (modular_scaled(s, lo) <= 1.0) lo *= 0.5;
    for (int it = 0; it < 400 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (modular_scaled(s, mid) > 1.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double closure_measure(const GridFunction& u) {
    GridFunction one(u.domain());
    one.copy_kinds(u);
    for (std::size_t k = 0; k < one.size(); ++k) one[k] = 1.0;
    return integrate(one);
}

}  // namespace

double modular(const GridFunction& u, const ExponentField& p) {
    return modular_scaled(sample(u, [&p](const Point& x) { return p(x); }), 1.0);
}

double luxemburg_norm(const GridFunction& u, const std::function<double(const Point&)>& p) {
    return norm_of(sample(u, p), closure_measure(u));
}

double luxemburg_norm(const GridFunction& u, const ExponentField& p) {
    return luxemburg_norm(u, [&p](const Point& x) { return p(x); });
}

ModularReport check_norm_modular(const GridFunction& u, const ExponentField& p) {
    ModularReport r;
    r.modular = modular(u, p);
    if (r.modular == 0.0) {
        r.degenerate = true;
        return r;
    }
    r.norm = luxemburg_norm(u, p);
    const double a = std::pow(r.modular, 1.0 / p.p_minus());
    const double b = std::pow(r.modular, 1.0 / p.p_plus());
    r.lower_bound = std::min(a, b);
    r.upper_bound = std::max(a, b);
    constexpr double slack = 1e-9;
    r.violated = r.norm < r.lower_bound * (1.0 - slack) - slack ||
                 r.norm > r.upper_bound * (1.0 + slack) + slack;
    return r;
}

HolderPair holder_pairing(const GridFunction& u, const GridFunction& v, const ExponentField& p) {
    if (!(u.domain() == v.domain())) throw std::invalid_argument("holder pairing: grid mismatch");
    GridFunction prod(u.domain());
    prod.copy_kinds(u);
    for (std::size_t k = 0; k < prod.size(); ++k) prod[k] = std::abs(u[k]) * std::abs(v[k]);
    HolderPair out;
    out.lhs = integrate(prod);
    if (out.lhs == 0.0 && (u.sup_norm() == 0.0 || v.sup_norm() == 0.0)) return out;
    const double nu = luxemburg_norm(u, p);
    const double nv = luxemburg_norm(v, [&p](const Point& x) {
        const double px = p(x);
        return px / (px - 1.0);
    });
    out.rhs = 2.0 * nu * nv;
    return out;
}

}  // namespace pxlap
