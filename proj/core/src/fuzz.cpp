#include "pxlap/fuzz.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "pxlap/operators.hpp"

namespace pxlap {

namespace {

constexpr std::size_t kKeepFailing = 5;

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }
    int dimension() { return std::uniform_int_distribution<int>(1, 3)(rng_); }

    Vector vec(int n, double mag_lo, double mag_hi) {
        Vector v(n);
        for (int i = 0; i < n; ++i) v[i] = std::normal_distribution<double>()(rng_);
        const double len = v.norm();
        if (len == 0.0) v[0] = 1.0;
        return v / std::max(len, 1e-300) * log_uniform(mag_lo, mag_hi);
    }

    Matrix sym(int n, double range) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) m(i, j) = m(j, i) = uniform(-range, range);
        }
        return m;
    }

    bool coin() { return std::bernoulli_distribution(0.5)(rng_); }

private:
    std::mt19937_64 rng_;
};

Json vec_json(const Vector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

Json mat_json(const Matrix& m) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        out.push_back(row);
    }
    return out;
}

FuzzCheck make_check(std::string name, std::string statement, bool diagnostic = false) {
    FuzzCheck c;
    c.name = std::move(name);
    c.statement = std::move(statement);
    c.diagnostic = diagnostic;
    return c;
}

}  // namespace

void FuzzCheck::record(double normalized_excess, const Json& sample) {
    ++samples;
    if (normalized_excess > worst_violation) {
        worst_violation = normalized_excess;
        worst_sample = sample;
    }
    if (normalized_excess > 0.0) {
        ++violations;
        if (failing_samples.size() < kKeepFailing) failing_samples.push_back(sample);
    }
}

bool FuzzReport::passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const FuzzCheck& c) { return c.diagnostic || c.passed(); });
}

const FuzzCheck* FuzzReport::find(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

Json FuzzReport::to_json() const {
    Json out;
    out["seed"] = seed;
    out["passed"] = passed();
    Json arr = Json::array();
    for (const auto& c : checks) {
        Json j;
        j["name"] = c.name;
        j["statement"] = c.statement;
        j["diagnostic"] = c.diagnostic;
        j["samples"] = c.samples;
        j["violations"] = c.violations;
        j["worst_violation"] = c.worst_violation;
        j["worst_sample"] = c.worst_sample;
        j["failing_samples"] = c.failing_samples;
        j["passed"] = c.passed();
        arr.push_back(std::move(j));
    }
    out["checks"] = std::move(arr);
    return out;
}

FuzzReport run_inequality_fuzz(const FuzzOptions& opt) {
    Sampler rng(opt.seed);
    const double tol = opt.tolerance;

    auto mono_nonneg = make_check("monotonicity_nonnegative",
                                  "(|a|^{p-2}a - |b|^{p-2}b).(a-b) >= 0");
    auto mono_lower = make_check("monotonicity_lower_bound",
                                 "gap >= (p-1)|a-b|^2(1+|a|^2+|b|^2)^{(p-2)/2} (p<2), 2^{2-p}|a-b|^p (p>=2)");
    auto cont_lt2 = make_check("continuity_upper_bound_p_below_2",
                               "||a|^{p-2}a - |b|^{p-2}b| <= 2^{2-p}|a-b|^{p-1}, p < 2");
    auto cont_ge2 = make_check("continuity_upper_bound_p_from_2",
                               "||a|^{p-2}a - |b|^{p-2}b| <= 2^{-1}(|a|^{p-2}+|b|^{p-2})|a-b|, p >= 2");
    auto cont_mv = make_check("continuity_mean_value_constant_p_from_2",
                              "||a|^{p-2}a - |b|^{p-2}b| <= (p-1)(|a|^{p-2}+|b|^{p-2})|a-b|, p >= 2",
                              true);
    auto log_dim = make_check("log_inequality_dimensional", "a^s log a <= n a^{s+1/n} + 1/s");
    auto log_half = make_check("log_inequality_half", "a^s |log a| <= a^{s+1/2} + 1/s");
    auto psd = make_check("a_matrix_psd", "min eig(|eta|^2 I + (p-2) eta(x)eta) >= 0 for p >= 1");
    auto trace = make_check("trace_form_identity", "tr(A X) = |eta|^2 tr X + (p-2)<X eta, eta> = -|eta|^2 F");
    auto strong = make_check("strong_nondivergence_identity",
                             "|Du|^{p-2} F = -div(|Du|^{p-2}Du) + |Du|^{p-2} log|Du| Du.Dp");
    auto degenerate = make_check("degenerate_equal_vectors", "a = b gives gaps exactly 0");
    auto p2 = make_check("p_equals_2_equality", "p = 2: monotonicity and continuity hold with equality");

    for (std::size_t i = 0; i < opt.inequality_samples; ++i) {
        const int n = rng.dimension();
        const Vector a = rng.vec(n, 1e-3, 1e2);
        const Vector b = rng.coin() ? Vector(rng.vec(n, 1e-3, 1e2))
                                    : Vector(a + rng.vec(n, 1e-6, 1.0) * a.norm());
        const double p = rng.uniform(1.1, 5.0);
        Json sample{{"a", vec_json(a)}, {"b", vec_json(b)}, {"p", p}};

        const double mono_scale = std::max(1.0, std::pow(a.norm(), p) + std::pow(b.norm(), p));
        const Pair m = monotonicity_gap(a, b, p);
        mono_nonneg.record(-m.first / mono_scale - tol, sample);
        mono_lower.record((m.second - m.first) / mono_scale - tol, sample);

        const double cont_scale =
            std::max(1.0, std::pow(a.norm(), p - 1.0) + std::pow(b.norm(), p - 1.0));
        const Pair c = continuity_gap(a, b, p);
        (p < 2.0 ? cont_lt2 : cont_ge2).record((c.first - c.second) / cont_scale - tol, sample);
        if (p >= 2.0) {
            const Pair cm = continuity_gap_mean_value(a, b, p);
            cont_mv.record((cm.first - cm.second) / cont_scale - tol, sample);
        }

        const Vector eta = rng.vec(n, 1e-3, 1e2);
        const double pa = rng.uniform(1.0, 5.0);
        const double lam = a_matrix(eta, pa).min_eigenvalue();
        psd.record(-lam / std::max(1.0, eta.squaredNorm()) - tol,
                   Json{{"eta", vec_json(eta)}, {"p", pa}});

        const double la = rng.log_uniform(1e-6, 1e6);
        const double ls = rng.log_uniform(1e-3, 10.0);
        const int ln = 2 + static_cast<int>(i % 3);
        const LogInequalityCheck lc = log_inequalities(la, ls, ln);
        Json lsample{{"a", la}, {"s", ls}, {"n", ln}};
        log_dim.record((lc.dimensional_lhs - lc.dimensional_rhs) / std::max(1.0, lc.dimensional_rhs) - tol,
                       lsample);
        log_half.record((lc.half_lhs - lc.half_rhs) / std::max(1.0, lc.half_rhs) - tol, lsample);
    }

    // injected equality cases
    for (std::size_t i = 0; i < std::max<std::size_t>(opt.inequality_samples / 100, 10); ++i) {
        const int n = rng.dimension();
        const Vector a = rng.vec(n, 1e-3, 1e2);
        const double p = rng.uniform(1.1, 5.0);
        const Pair m = monotonicity_gap(a, a, p);
        const Pair c = continuity_gap(a, a, p);
        const double worst = std::max({std::abs(m.first), std::abs(m.second), std::abs(c.first),
                                       std::abs(c.second)});
        degenerate.record(worst > 0.0 ? 1.0 : -1.0, Json{{"a", vec_json(a)}, {"p", p}});

        const Vector b = rng.vec(n, 1e-3, 1e2);
        const Pair m2 = monotonicity_gap(a, b, 2.0);
        const Pair c2 = continuity_gap(a, b, 2.0);
        const double d = (a - b).norm();
        const double e1 = std::abs(m2.first - m2.second) / std::max(1.0, d * d);
        const double e2 = std::abs(c2.first - c2.second) / std::max(1.0, d);
        p2.record(std::max(e1, e2) - tol, Json{{"a", vec_json(a)}, {"b", vec_json(b)}});
    }

    for (std::size_t i = 0; i < opt.identity_samples; ++i) {
        const int n = rng.dimension();
        OperatorSample s;
        s.x = Vector::Zero(n);
        s.jet.eta = rng.vec(n, 1e-2, 1e2);
        s.jet.hess = rng.sym(n, 10.0);
        s.p = rng.uniform(1.1, 5.0);
        s.dp = rng.vec(n, 1e-3, 5.0);
        Json sample{{"eta", vec_json(s.jet.eta)}, {"X", mat_json(s.jet.hess)}, {"p", s.p},
                    {"dp", vec_json(s.dp)}};

        const double e2 = s.jet.eta.squaredNorm();
        const double xnorm = s.jet.hess.cwiseAbs().maxCoeff();
        const Pair t = trace_form_identity(s);
        const double tscale = std::max(1.0, e2 * xnorm * (n + std::abs(s.p - 2.0)));
        const double f = normalized_pxlap(s);
        trace.record(std::max(std::abs(t.first - t.second), std::abs(t.first + e2 * f)) / tscale - tol,
                     sample);

        const Pair id = strong_nondivergence_identity(s);
        const double w = std::pow(std::sqrt(e2), s.p - 2.0);
        const double sscale = std::max(
            1.0, w * (xnorm * (n + std::abs(s.p - 2.0)) +
                      std::abs(std::log(std::sqrt(e2))) * std::sqrt(e2) * s.dp.norm()));
        strong.record(std::abs(id.first - id.second) / sscale - tol, sample);
    }

    FuzzReport report;
    report.seed = opt.seed;
    report.checks = {mono_nonneg, mono_lower, cont_lt2, cont_ge2, cont_mv, log_dim, log_half,
                     psd,         trace,      strong,   degenerate, p2};
    return report;
}

}  // namespace pxlap
