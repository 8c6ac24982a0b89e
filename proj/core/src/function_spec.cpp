#include "pxlap/function_spec.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pxlap/grid_io.hpp"

namespace pxlap {

namespace {

constexpr double kPi = std::numbers::pi;

double component(const std::vector<double>& v, int i) {
    return i < static_cast<int>(v.size()) ? v[i] : 0.0;
}

void check_axis(int axis, int dim) {
    if (axis < 0 || axis >= dim) throw std::invalid_argument("axis out of range");
}

}  // namespace

Json DomainSpec::to_json() const {
    Json j{{"kind", kind}};
    if (kind == "annulus") {
        j["center"] = center;
        j["r_in"] = r_in;
        j["r_out"] = r_out;
    } else {
        j["lower"] = lower;
        j["upper"] = upper;
    }
    return j;
}

Json ExponentConfig::to_json() const {
    Json j{{"kind", kind}};
    if (kind == "constant") {
        j["value"] = value;
    } else if (kind == "affine") {
        j["value"] = value;
        j["gradient"] = gradient;
    } else if (kind == "sine") {
        j["base"] = base;
        j["amplitude"] = amplitude;
        j["frequency"] = frequency;
        j["axis"] = axis;
    } else if (kind == "bilinear") {
        j["base"] = base;
        j["coefficient"] = coefficient;
    } else if (kind == "kink") {
        j["base"] = base;
        j["slope"] = slope;
        j["axis"] = axis;
        j["center"] = center;
    }
    return j;
}

Json FunctionSpec::to_json() const {
    Json j{{"kind", kind}};
    if (kind == "constant") {
        j["value"] = value;
    } else if (kind == "affine" || kind == "affine_sine") {
        j["value"] = value;
        j["gradient"] = gradient;
        if (kind == "affine_sine") j["amplitude"] = amplitude;
    } else if (kind == "radial_power") {
        j["center"] = center;
        j["power"] = power;
        j["scale"] = scale;
        j["shift"] = shift;
    } else if (kind == "exp_cos") {
        j["scale"] = scale;
    } else if (kind == "abs") {
        j["center"] = center;
        j["axis"] = axis;
        j["scale"] = scale;
        j["shift"] = shift;
    } else if (kind == "sine") {
        j["amplitude"] = amplitude;
        j["frequency"] = frequency;
        j["axis"] = axis;
        j["shift"] = shift;
    }
    return j;
}

Json ProblemSpec::to_json() const {
    return Json{{"name", name},
                {"domain", domain.to_json()},
                {"exponent", exponent.to_json()},
                {"boundary", boundary.to_json()},
                {"exact", exact},
                {"grids", grids}};
}

Domain make_domain(const DomainSpec& spec, int n) {
    if (n < 1) throw std::invalid_argument("grid size must be positive");
    if (spec.kind == "line") {
        return Domain::line(component(spec.lower, 0), component(spec.upper, 0), n);
    }
    if (spec.kind == "box") {
        return Domain::box({component(spec.lower, 0), component(spec.lower, 1)},
                           {component(spec.upper, 0), component(spec.upper, 1)}, {n, n});
    }
    if (spec.kind == "annulus") {
        if (!(spec.r_in > 0.0 && spec.r_out > spec.r_in)) {
            throw std::invalid_argument("annulus needs 0 < r_in < r_out");
        }
        const double cx = component(spec.center, 0);
        const double cy = component(spec.center, 1);
        return Domain::box({cx - spec.r_out, cy - spec.r_out}, {cx + spec.r_out, cy + spec.r_out}, {n, n});
    }
    throw std::invalid_argument("unknown domain kind '" + spec.kind + "'");
}

void apply_domain_kinds(const DomainSpec& spec, GridFunction& u) {
    if (spec.kind != "annulus") return;
    Point c(2);
    c << component(spec.center, 0), component(spec.center, 1);
    u.restrict_to_annulus(c, spec.r_in, spec.r_out);
}

ExponentField make_exponent_field(const ExponentConfig& s, const Domain& region) {
    const int dim = region.dim();
    if (s.kind == "constant") return make_exponent(ExponentSpec::constant_value(s.value), region);
    if (s.kind == "affine") {
        std::vector<double> g(dim, 0.0);
        for (int a = 0; a < dim; ++a) g[a] = component(s.gradient, a);
        return make_exponent(ExponentSpec::affine_field(s.value, g), region);
    }
    ExponentSpec spec;
    if (s.kind == "sine") {
        check_axis(s.axis, dim);
        const double base = s.base, amp = s.amplitude, w = kPi * s.frequency;
        const int ax = s.axis;
        spec = ExponentSpec::closure(
            [=](const Point& x) { return base + amp * std::sin(w * x[ax]); },
            [=](const Point& x) {
                Vector g = Vector::Zero(x.size());
                g[ax] = amp * w * std::cos(w * x[ax]);
                return g;
            },
            "sine(base=" + format_number(base) + ", amplitude=" + format_number(amp) + ")");
        spec.known_lip = std::abs(amp) * std::abs(w);
    } else if (s.kind == "bilinear") {
        if (dim != 2) throw std::invalid_argument("bilinear exponent needs a 2D domain");
        const double base = s.base, c = s.coefficient;
        spec = ExponentSpec::closure(
            [=](const Point& x) { return base + c * x[0] * x[1]; },
            [=](const Point& x) {
                Vector g(2);
                g << c * x[1], c * x[0];
                return g;
            },
            "bilinear(base=" + format_number(base) + ", coefficient=" + format_number(c) + ")");
    } else if (s.kind == "kink") {
        check_axis(s.axis, dim);
        const double base = s.base, slope = s.slope, c = component(s.center, s.axis);
        const int ax = s.axis;
        spec = ExponentSpec::closure(
            [=](const Point& x) { return base + slope * std::abs(x[ax] - c); },
            [=](const Point& x) {
                Vector g = Vector::Zero(x.size());
                g[ax] = x[ax] > c ? slope : (x[ax] < c ? -slope : 0.0);
                return g;
            },
            "kink(base=" + format_number(base) + ", slope=" + format_number(slope) + ")");
        spec.known_lip = std::abs(slope);
    } else {
        throw std::invalid_argument("unknown exponent kind '" + s.kind + "'");
    }
    return make_exponent(spec, region);
}

ScalarField make_function(const FunctionSpec& s) {
    const double value = s.value, scale = s.scale, shift = s.shift, amp = s.amplitude;
    const int ax = s.axis;
    if (s.kind == "constant") return [=](const Point&) { return value; };
    if (s.kind == "affine" || s.kind == "affine_sine") {
        const std::vector<double> g = s.gradient;
        const bool bump = s.kind == "affine_sine";
        return [=](const Point& x) {
            double v = value;
            for (Eigen::Index a = 0; a < x.size(); ++a) v += component(g, static_cast<int>(a)) * x[a];
            if (bump) {
                double prod = amp;
                for (Eigen::Index a = 0; a < x.size(); ++a) prod *= std::sin(kPi * x[a]);
                v += prod;
            }
            return v;
        };
    }
    if (s.kind == "radial_power") {
        const std::vector<double> c = s.center;
        const double power = s.power;
        return [=](const Point& x) {
            double r2 = 0.0;
            for (Eigen::Index a = 0; a < x.size(); ++a) {
                const double d = x[a] - component(c, static_cast<int>(a));
                r2 += d * d;
            }
            return scale * std::pow(std::sqrt(r2), power) + shift;
        };
    }
    if (s.kind == "exp_cos") {
        return [=](const Point& x) { return scale * std::exp(x[0]) * (x.size() > 1 ? std::cos(x[1]) : 1.0); };
    }
    if (s.kind == "abs") {
        const double c = component(s.center, s.axis);
        return [=](const Point& x) { return scale * std::abs(x[ax] - c) + shift; };
    }
    if (s.kind == "sine") {
        const double w = kPi * s.frequency;
        return [=](const Point& x) { return amp * std::sin(w * x[ax]) + shift; };
    }
    throw std::invalid_argument("unknown function kind '" + s.kind + "'");
}

GridFunction sample_on(const DomainSpec& domain, int n, const FunctionSpec& f) {
    const Domain d = make_domain(domain, n);
    if (f.axis < 0 || f.axis >= d.dim()) throw std::invalid_argument("function axis out of range");
    GridFunction u = GridFunction::sample(d, make_function(f));
    apply_domain_kinds(domain, u);
    return u;
}

DirichletProblem make_problem(const ProblemSpec& spec, int n) {
    GridFunction data = sample_on(spec.domain, n, spec.boundary);
    ExponentField p = make_exponent_field(spec.exponent, data.domain());
    return DirichletProblem{std::move(data), std::move(p), spec.name};
}

}  // namespace pxlap
