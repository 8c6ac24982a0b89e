#include "pxlap/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace pxlap {

namespace {

constexpr int kScan1D = 20001;
constexpr int kScan2D = 401;
constexpr double kLipSafety = 1.1;
constexpr double kFdStep = 1e-6;

Vector centered_gradient(const ScalarField& f, const Point& x) {
    Vector g(x.size());
    for (Eigen::Index a = 0; a < x.size(); ++a) {
        Point xp = x, xm = x;
        xp[a] += kFdStep;
        xm[a] -= kFdStep;
        g[a] = (f(xp) - f(xm)) / (2.0 * kFdStep);
    }
    return g;
}

void require_above_one(double p_minus) {
    if (!(p_minus > 1.0)) throw std::invalid_argument("exponent must satisfy p- > 1");
}

// Multilinear interpolation of nodal samples, clamped to the sample box.
struct Interpolant {
    std::shared_ptr<const GridFunction> g;

    void locate(const Point& x, int a, int& i, double& t) const {
        const Domain& d = g->domain();
        const double s = std::clamp((x[a] - d.lower(a)) / d.spacing(a), 0.0,
                                    static_cast<double>(d.node_count(a) - 1));
        i = std::min(static_cast<int>(s), d.node_count(a) - 2);
        t = s - i;
    }

    double operator()(const Point& x) const {
        const Domain& d = g->domain();
        if (d.dim() == 1) {
            int i;
            double t;
            locate(x, 0, i, t);
            return (1 - t) * g->at({i, 0}) + t * g->at({i + 1, 0});
        }
        int i, j;
        double s, t;
        locate(x, 0, i, s);
        locate(x, 1, j, t);
        return (1 - s) * (1 - t) * g->at({i, j}) + s * (1 - t) * g->at({i + 1, j}) +
               (1 - s) * t * g->at({i, j + 1}) + s * t * g->at({i + 1, j + 1});
    }

    Vector gradient(const Point& x) const {
        const Domain& d = g->domain();
        Vector out(d.dim());
        if (d.dim() == 1) {
            int i;
            double t;
            locate(x, 0, i, t);
            out[0] = (g->at({i + 1, 0}) - g->at({i, 0})) / d.spacing(0);
            return out;
        }
        int i, j;
        double s, t;
        locate(x, 0, i, s);
        locate(x, 1, j, t);
        const double f00 = g->at({i, j}), f10 = g->at({i + 1, j});
        const double f01 = g->at({i, j + 1}), f11 = g->at({i + 1, j + 1});
        out[0] = ((1 - t) * (f10 - f00) + t * (f11 - f01)) / d.spacing(0);
        out[1] = ((1 - s) * (f01 - f00) + s * (f11 - f10)) / d.spacing(1);
        return out;
    }
};

}  // namespace

std::string to_string(ExponentKind kind) {
    switch (kind) {
        case ExponentKind::constant: return "constant";
        case ExponentKind::affine: return "affine";
        case ExponentKind::smooth_closure: return "smooth-closure";
        case ExponentKind::grid_sampled: return "grid-sampled";
    }
    return "unknown";
}

ExponentSpec ExponentSpec::constant_value(double p) {
    ExponentSpec s;
    s.kind = ExponentKind::constant;
    s.value = p;
    return s;
}

ExponentSpec ExponentSpec::affine_field(double p0, std::vector<double> gradient) {
    ExponentSpec s;
    s.kind = ExponentKind::affine;
    s.value = p0;
    s.gradient = std::move(gradient);
    return s;
}

ExponentSpec ExponentSpec::closure(ScalarField eval, VectorField grad, std::string label) {
    ExponentSpec s;
    s.kind = ExponentKind::smooth_closure;
    s.eval = std::move(eval);
    s.grad = std::move(grad);
    s.label = std::move(label);
    return s;
}

ExponentSpec ExponentSpec::grid(GridFunction samples) {
    ExponentSpec s;
    s.kind = ExponentKind::grid_sampled;
    s.samples = std::make_shared<const GridFunction>(std::move(samples));
    return s;
}

Vector ExponentField::gradient(const Point& x) const {
    if (grad_) return grad_(x);
    return centered_gradient(eval_, x);
}

std::optional<std::string> ExponentField::check_on(const Domain& domain) const {
    constexpr double slack = 1e-12;
    for (std::size_t k = 0; k < domain.size(); ++k) {
        const double p = eval_(domain.point(k));
        if (p < p_minus_ - slack || p > p_plus_ + slack) {
            std::ostringstream os;
            os << "p = " << p << " outside [" << p_minus_ << ", " << p_plus_ << "] at node " << k;
            return os.str();
        }
    }
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<std::size_t> pick(0, domain.size() - 1);
    for (int trial = 0; trial < 2000; ++trial) {
        const Point x = domain.point(pick(rng));
        const Point y = domain.point(pick(rng));
        const double dist = (x - y).norm();
        if (std::abs(eval_(x) - eval_(y)) > lip_ * dist + slack) {
            return std::string("Lipschitz bound violated on a sampled node pair");
        }
    }
    return std::nullopt;
}

ExponentField make_exponent(const ExponentSpec& spec, const Domain& region) {
    ExponentField f;
    f.kind_ = spec.kind;
    f.dim_ = region.dim();
    const int dim = region.dim();
    std::ostringstream desc;

    switch (spec.kind) {
        case ExponentKind::constant: {
            const double p = spec.value;
            f.eval_ = [p](const Point&) { return p; };
            f.grad_ = [dim](const Point&) { return Vector(Vector::Zero(dim)); };
            f.p_minus_ = f.p_plus_ = p;
            f.lip_ = 0.0;
            desc << "constant p=" << p;
            break;
        }
        case ExponentKind::affine: {
            if (static_cast<int>(spec.gradient.size()) != dim) {
                throw std::invalid_argument("affine exponent: gradient dimension mismatch");
            }
            Vector g(dim);
            for (int a = 0; a < dim; ++a) g[a] = spec.gradient[a];
            const double p0 = spec.value;
            f.eval_ = [p0, g](const Point& x) { return p0 + g.dot(x); };
            f.grad_ = [g](const Point&) { return g; };
            // extrema of an affine function over a box sit at corners
            double lo = p0, hi = p0;
            for (int a = 0; a < dim; ++a) {
                const double c0 = g[a] * region.lower(a), c1 = g[a] * region.upper(a);
                lo += std::min(c0, c1);
                hi += std::max(c0, c1);
            }
            f.p_minus_ = lo;
            f.p_plus_ = hi;
            f.lip_ = g.norm();
            desc << "affine p0=" << p0 << " |Dp|=" << f.lip_;
            break;
        }
        case ExponentKind::smooth_closure: {
            if (!spec.eval) throw std::invalid_argument("closure exponent without evaluator");
            f.eval_ = spec.eval;
            f.grad_ = spec.grad;
            const int m = dim == 1 ? kScan1D : kScan2D;
            double lo = INFINITY, hi = -INFINITY, gmax = 0.0;
            double hscan = 0.0;
            Point x(dim);
            const int my = dim == 1 ? 1 : m;
            for (int j = 0; j < my; ++j) {
                for (int i = 0; i < m; ++i) {
                    x[0] = region.lower(0) + (region.upper(0) - region.lower(0)) * i / (m - 1);
                    if (dim == 2) {
                        x[1] = region.lower(1) + (region.upper(1) - region.lower(1)) * j / (m - 1);
                    }
                    const double p = f.eval_(x);
                    lo = std::min(lo, p);
                    hi = std::max(hi, p);
                    if (!spec.known_lip) gmax = std::max(gmax, f.gradient(x).norm());
                }
            }
            for (int a = 0; a < dim; ++a) {
                const double ha = (region.upper(a) - region.lower(a)) / (m - 1);
                hscan += ha * ha;
            }
            hscan = std::sqrt(hscan);
            f.lip_ = spec.known_lip ? *spec.known_lip : kLipSafety * gmax;
            const double margin = 0.5 * f.lip_ * hscan;
            f.p_minus_ = lo - margin;
            f.p_plus_ = hi + margin;
            desc << (spec.label.empty() ? std::string("closure") : spec.label)
                 << "; bounds from " << m << "-point/axis scan, margin " << margin
                 << (spec.known_lip ? "; lip given" : "; lip = 1.1 * scanned max |Dp|");
            break;
        }
        case ExponentKind::grid_sampled: {
            if (!spec.samples) throw std::invalid_argument("grid exponent without samples");
            const GridFunction& g = *spec.samples;
            if (g.domain().dim() != dim) throw std::invalid_argument("grid exponent: dimension mismatch");
            Interpolant interp{spec.samples};
            f.eval_ = interp;
            f.grad_ = [interp](const Point& x) { return interp.gradient(x); };
            double lip2 = 0.0;
            double h2 = 0.0;
            for (int a = 0; a < dim; ++a) {
                const Domain& d = g.domain();
                double slope = 0.0;
                for (std::size_t k = 0; k < g.size(); ++k) {
                    const NodeIndex idx = d.unflat(k);
                    if (idx[a] + 1 >= d.node_count(a)) continue;
                    slope = std::max(slope, std::abs(g[k + d.stride(a)] - g[k]) / d.spacing(a));
                }
                lip2 += slope * slope;
                h2 += d.spacing(a) * d.spacing(a);
            }
            f.lip_ = std::sqrt(lip2);
            const double margin = 0.5 * f.lip_ * std::sqrt(h2);
            double lo = INFINITY, hi = -INFINITY;
            for (double v : g.values()) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            f.p_minus_ = lo - margin;
            f.p_plus_ = hi + margin;
            desc << "grid-sampled (multilinear), margin " << margin;
            break;
        }
    }
    require_above_one(f.p_minus_);
    f.description_ = desc.str();
    return f;
}

MollifiedExponent::MollifiedExponent(ExponentField base, double radius)
    : base_(std::move(base)), radius_(radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("mollifier radius must be positive");
    const int dim = base_.dim();
    const int m = kPointsPerAxis;
    const double step = 2.0 * radius / m;
    double total = 0.0;
    const int my = dim == 1 ? 1 : m;
    for (int j = 0; j < my; ++j) {
        for (int i = 0; i < m; ++i) {
            Vector z(dim);
            z[0] = -radius + (i + 0.5) * step;
            if (dim == 2) z[1] = -radius + (j + 0.5) * step;
            const double s2 = z.squaredNorm() / (radius * radius);
            if (s2 >= 1.0) continue;
            const double w = std::exp(-1.0 / (1.0 - s2));
            offsets_.push_back(z);
            weights_.push_back(w);
            total += w;
        }
    }
    for (double& w : weights_) w /= total;
}

double MollifiedExponent::eval(const Point& x) const {
    double s = 0.0;
    for (std::size_t j = 0; j < weights_.size(); ++j) s += weights_[j] * base_.eval(x - offsets_[j]);
    return s;
}

Vector MollifiedExponent::gradient(const Point& x) const {
    Vector g = Vector::Zero(x.size());
    for (std::size_t j = 0; j < weights_.size(); ++j) g += weights_[j] * base_.gradient(x - offsets_[j]);
    return g;
}

ExponentField MollifiedExponent::as_field() const {
    ExponentField f;
    f.kind_ = ExponentKind::smooth_closure;
    f.dim_ = base_.dim();
    auto self = std::make_shared<MollifiedExponent>(*this);
    f.eval_ = [self](const Point& x) { return self->eval(x); };
    f.grad_ = [self](const Point& x) { return self->gradient(x); };
    f.p_minus_ = base_.p_minus();
    f.p_plus_ = base_.p_plus();
    f.lip_ = base_.lip();
    std::ostringstream os;
    os << "mollified(" << base_.description() << "), bump exp(-1/(1-|z/r|^2)), r=" << radius_
       << ", " << kPointsPerAxis << "-point midpoint rule per axis";
    f.description_ = os.str();
    return f;
}

}  // namespace pxlap
