#include "pxlap/weak_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "pxlap/grid_io.hpp"
#include "pxlap/parallel.hpp"

namespace pxlap {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using DenseVector = Eigen::VectorXd;

double coefficient(double m, double p, bool exact_zero) {
    if (exact_zero && m == 0.0) return 0.0;
    return std::pow(m, 0.5 * (p - 2.0));
}

// Geometry and exponent samples shared by the residual, the assembly and
// the weak pairing. Edge (k, k + stride(a)) is stored at k.
class Scheme {
public:
    Scheme(const GridFunction& like, const ExponentField& p) : d_(like.domain()), kinds_(like.kinds()) {
        dim_ = d_.dim();
        for (int a = 0; a < dim_; ++a) {
            pe_[a].assign(d_.size(), 0.0);
            const std::ptrdiff_t s = d_.stride(a);
            for (std::size_t k = 0; k < d_.size(); ++k) {
                const NodeIndex idx = d_.unflat(k);
                if (idx[a] + 1 >= d_.node_count(a)) continue;
                if (!needed_edge(k, a)) continue;
                const Point x0 = d_.point(k);
                const Point x1 = d_.point(k + s);
                pe_[a][k] = p(0.5 * (x0 + x1));
            }
        }
        vol_ = 1.0;
        for (int a = 0; a < dim_; ++a) vol_ *= d_.spacing(a);
    }

    const Domain& domain() const { return d_; }
    int dim() const { return dim_; }
    double volume() const { return vol_; }
    bool interior(std::size_t k) const { return kinds_[k] == NodeKind::interior; }

    bool needed_edge(std::size_t k, int a) const {
        return interior(k) || interior(k + d_.stride(a));
    }

    // Edge gradient and coefficient on edge (k, k + s_a).
    double edge_coefficient(std::span<const double> u, std::size_t k, int a, double delta,
                            double* normal) const {
        const std::ptrdiff_t s = d_.stride(a);
        const double g = (u[k + s] - u[k]) / d_.spacing(a);
        double m = g * g;
        if (dim_ == 2) {
            const int b = 1 - a;
            const std::ptrdiff_t t = d_.stride(b);
            const double tr = 0.5 * ((u[k + t] - u[k - t]) + (u[k + s + t] - u[k + s - t])) /
                              (2.0 * d_.spacing(b));
            m += tr * tr;
        }
        *normal = g;
        return coefficient(delta + m, pe_[a][k], delta == 0.0);
    }

    // Drift coefficient b_a at interior node k.
    double drift_coefficient(std::span<const double> u, std::size_t k, int a, double delta) const {
        double m = delta;
        for (int c = 0; c < dim_; ++c) {
            const std::ptrdiff_t t = d_.stride(c);
            const double g = (u[k + t] - u[k - t]) / (2.0 * d_.spacing(c));
            m += g * g;
        }
        if (delta == 0.0 && m == 0.0) return 0.0;
        const std::ptrdiff_t s = d_.stride(a);
        return (coefficient(m, pe_[a][k], false) - coefficient(m, pe_[a][k - s], false)) /
               d_.spacing(a);
    }

    double residual_at(std::span<const double> u, std::size_t k, double delta, bool upwind) const {
        double r = 0.0;
        for (int a = 0; a < dim_; ++a) {
            const std::ptrdiff_t s = d_.stride(a);
            const double h = d_.spacing(a);
            double gp;
            double gm;
            const double cp = edge_coefficient(u, k, a, delta, &gp);
            const double cm = edge_coefficient(u, k - s, a, delta, &gm);
            r += (-cp * gp + cm * gm) / h;
            const double b = drift_coefficient(u, k, a, delta);
            r += b * drift_difference(u, k, a, b, upwind);
        }
        return r;
    }

    double drift_difference(std::span<const double> u, std::size_t k, int a, double b,
                            bool upwind) const {
        const std::ptrdiff_t s = d_.stride(a);
        const double h = d_.spacing(a);
        if (!upwind) return (u[k + s] - u[k - s]) / (2.0 * h);
        return b > 0.0 ? (u[k] - u[k - s]) / h : (u[k + s] - u[k]) / h;
    }

private:
    Domain d_;
    std::span<const NodeKind> kinds_;
    int dim_ = 1;
    std::array<std::vector<double>, 2> pe_;
    double vol_ = 1.0;
};

double sup_residual(const Scheme& sch, std::span<const double> u, const std::vector<std::size_t>& nodes,
                    double delta, bool upwind, int threads) {
    std::vector<double> r(nodes.size());
    parallel_for(nodes.size(), threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) r[i] = std::abs(sch.residual_at(u, nodes[i], delta, upwind));
    });
    double m = 0.0;
    for (double v : r) m = std::max(m, v);
    return m;
}

// Linear system for the interior unknowns with frozen coefficients.
class LinearStage {
public:
    LinearStage(const Scheme& sch, const std::vector<std::size_t>& nodes) : sch_(sch), nodes_(nodes) {
        index_.assign(sch.domain().size(), -1);
        for (std::size_t i = 0; i < nodes.size(); ++i) index_[nodes[i]] = static_cast<int>(i);
    }

    // harmonic = true freezes c = 1 and b = 0.
    DenseVector solve(std::span<const double> u, double delta, bool upwind, bool harmonic) {
        const Domain& d = sch_.domain();
        const auto n = static_cast<Eigen::Index>(nodes_.size());
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(nodes_.size() * (1 + 2 * sch_.dim()));
        DenseVector rhs = DenseVector::Zero(n);
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const std::size_t k = nodes_[i];
            const auto row = static_cast<Eigen::Index>(i);
            double diag = 0.0;
            for (int a = 0; a < sch_.dim(); ++a) {
                const std::ptrdiff_t s = d.stride(a);
                const double h = d.spacing(a);
                double cp = 1.0;
                double cm = 1.0;
                double b = 0.0;
                if (!harmonic) {
                    double g;
                    cp = sch_.edge_coefficient(u, k, a, delta, &g);
                    cm = sch_.edge_coefficient(u, k - s, a, delta, &g);
                    b = sch_.drift_coefficient(u, k, a, delta);
                }
                double wp = -cp / (h * h);
                double wm = -cm / (h * h);
                diag += (cp + cm) / (h * h);
                if (!upwind) {
                    wp += b / (2.0 * h);
                    wm -= b / (2.0 * h);
                } else if (b > 0.0) {
                    diag += b / h;
                    wm -= b / h;
                } else {
                    diag -= b / h;
                    wp += b / h;
                }
                add(trip, rhs, row, k + s, wp, u);
                add(trip, rhs, row, k - s, wm, u);
            }
            trip.emplace_back(row, row, diag);
        }
        SparseMatrix A(n, n);
        A.setFromTriplets(trip.begin(), trip.end());
        A.makeCompressed();
        if (!analyzed_) {
            lu_.analyzePattern(A);
            analyzed_ = true;
        }
        lu_.factorize(A);
        if (lu_.info() != Eigen::Success) throw SolverError("linear solve breakdown: factorization failed", -1.0);
        DenseVector x = lu_.solve(rhs);
        auto rel = [&](const DenseVector& sol) {
            const DenseVector ax = A * sol;
            const double scale = std::max(ax.lpNorm<Eigen::Infinity>() + rhs.lpNorm<Eigen::Infinity>(),
                                          std::numeric_limits<double>::min());
            return (ax - rhs).lpNorm<Eigen::Infinity>() / scale;
        };
        double r = rel(x);
        if (r > 1e-12) {
            x += lu_.solve(DenseVector(rhs - A * x));
            r = rel(x);
        }
        if (!(r <= 1e-8)) {
            throw SolverError("linear solve breakdown: relative residual " + format_number(r), r);
        }
        return x;
    }

private:
    void add(std::vector<Eigen::Triplet<double>>& trip, DenseVector& rhs, Eigen::Index row,
             std::size_t nb, double w, std::span<const double> u) const {
        const int j = index_[nb];
        if (j >= 0) {
            trip.emplace_back(row, j, w);
        } else {
            rhs[row] -= w * u[nb];
        }
    }

    const Scheme& sch_;
    const std::vector<std::size_t>& nodes_;
    std::vector<int> index_;
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu_;
    bool analyzed_ = false;
};

void check_problem(const DirichletProblem& problem) {
    problem.data.check_finite();
    const Domain& d = problem.domain();
    if (problem.p.dim() != d.dim()) throw std::invalid_argument("exponent dimension does not match the domain");
    for (std::size_t k = 0; k < d.size(); ++k) {
        if (problem.data.is_interior(k) && d.on_edge(k)) {
            throw std::invalid_argument("interior node on the edge of the grid");
        }
    }
    if (problem.data.interior_count() == 0) throw std::invalid_argument("problem has no interior nodes");
}

}  // namespace

std::vector<double> delta_ladder(const SolverConfig& cfg) {
    if (!(cfg.delta_initial > 0.0) || !(cfg.delta_final > 0.0) || cfg.delta_final > cfg.delta_initial) {
        throw std::invalid_argument("need 0 < delta_final <= delta_initial");
    }
    if (!(cfg.delta_factor > 1.0)) throw std::invalid_argument("delta_factor must exceed 1");
    std::vector<double> out;
    double delta = cfg.delta_initial;
    while (delta > cfg.delta_final * (1.0 + 1e-9)) {
        out.push_back(delta);
        delta /= cfg.delta_factor;
    }
    out.push_back(cfg.delta_final);
    return out;
}

GridFunction harmonic_extension(const DirichletProblem& problem) {
    check_problem(problem);
    const Scheme sch(problem.data, problem.p);
    const auto nodes = problem.data.interior_nodes();
    LinearStage stage(sch, nodes);
    GridFunction u = problem.data;
    const DenseVector x = stage.solve(u.values(), 0.0, false, true);
    for (std::size_t i = 0; i < nodes.size(); ++i) u[nodes[i]] = x[static_cast<Eigen::Index>(i)];
    return u;
}

WeakSolveResult solve(const DirichletProblem& problem, const SolverConfig& cfg) {
    check_problem(problem);
    if (!(cfg.picard_tol > 0.0)) throw std::invalid_argument("picard_tol must be positive");
    if (!(cfg.damping > 0.0 && cfg.damping <= 1.0)) throw std::invalid_argument("damping must lie in (0, 1]");
    if (cfg.max_iters < 1) throw std::invalid_argument("max_iters must be positive");
    const auto ladder = delta_ladder(cfg);

    const Scheme sch(problem.data, problem.p);
    const auto nodes = problem.data.interior_nodes();
    LinearStage stage(sch, nodes);
    const Domain& d = problem.domain();

    WeakSolveResult res{problem.data, {}, {}, {}, 0.0, 0};
    GridFunction& u = res.u;
    {
        const DenseVector x = stage.solve(u.values(), 0.0, false, true);
        for (std::size_t i = 0; i < nodes.size(); ++i) u[nodes[i]] = x[static_cast<Eigen::Index>(i)];
    }

    std::vector<double> dp_norm(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) dp_norm[i] = problem.p.gradient(d.point(nodes[i])).norm();

    std::vector<double> cand(u.size());
    const double h = d.min_spacing();
    // Nodal residual change a sup-change of picard_tol can cause.
    const double noise = 10.0 * cfg.picard_tol * 2.0 * d.dim() / (h * h);
    for (std::size_t level = 0; level < ladder.size(); ++level) {
        const double delta = ladder[level];
        const double tol = level + 1 == ladder.size() ? cfg.picard_tol : std::max(cfg.picard_tol, cfg.level_tol);
        double prev = sup_residual(sch, u.values(), nodes, delta, cfg.upwind_drift, cfg.threads);
        int it = 0;
        while (true) {
            if (it >= cfg.max_iters) {
                std::ostringstream msg;
                msg << "picard iteration did not converge within " << cfg.max_iters
                    << " iterations at delta=" << format_number(delta)
                    << " (last residual " << format_number(prev) << ")";
                throw SolverError(msg.str(), prev);
            }
            const DenseVector x = stage.solve(u.values(), delta, cfg.upwind_drift, false);
            double theta = cfg.damping;
            double r = 0.0;
            for (int tries = 0;; ++tries) {
                std::copy(u.values().begin(), u.values().end(), cand.begin());
                for (std::size_t i = 0; i < nodes.size(); ++i) {
                    const std::size_t k = nodes[i];
                    cand[k] = (1.0 - theta) * u[k] + theta * x[static_cast<Eigen::Index>(i)];
                }
                r = sup_residual(sch, cand, nodes, delta, cfg.upwind_drift, cfg.threads);
                if (r <= prev * (1.0 + 1e-12) || tries == 6) break;
                theta *= 0.5;
            }
            double change = 0.0;
            for (std::size_t k : nodes) change = std::max(change, std::abs(cand[k] - u[k]));
            std::copy(cand.begin(), cand.end(), u.values().begin());
            ++it;
            ++res.iterations;
            res.history.push_back({res.iterations, delta, change, r});
            if (!std::isfinite(change) || !std::isfinite(r)) {
                throw SolverError("picard iteration produced non-finite values at delta=" +
                                      format_number(delta), r);
            }
            prev = r;
            if (change < tol) break;
        }

        std::size_t peclet = 0;
        const auto uv = u.values();
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const std::size_t k = nodes[i];
            double m = delta;
            for (int a = 0; a < d.dim(); ++a) {
                const double g = (uv[k + d.stride(a)] - uv[k - d.stride(a)]) / (2.0 * d.spacing(a));
                m += g * g;
            }
            if (h * dp_norm[i] * std::abs(std::log(m)) > 2.0) ++peclet;
        }
        if (peclet > 0) {
            res.warnings.push_back("mesh Peclet number exceeds 2 at " + std::to_string(peclet) +
                                   " nodes (delta=" + format_number(delta) + ")");
        }
        const double lr = sup_residual(sch, uv, nodes, 0.0, cfg.upwind_drift, cfg.threads);
        if (!res.level_residuals.empty() && lr > res.level_residuals.back() + noise) {
            res.warnings.push_back("residual increased from " + format_number(res.level_residuals.back()) +
                                   " to " + format_number(lr) + " at delta=" + format_number(delta));
        }
        res.level_residuals.push_back(lr);
    }

    res.weak_residual = audit_supersolution(u, problem.p, TestFamily::hat, 0.0).max_abs;
    return res;
}

GridFunction nodal_residual(const GridFunction& u, const ExponentField& p, double delta, bool upwind) {
    const Scheme sch(u, p);
    GridFunction r(u.domain());
    r.copy_kinds(u);
    for (std::size_t k : u.interior_nodes()) r[k] = sch.residual_at(u.values(), k, delta, upwind);
    return r;
}

double discrete_weak_residual(const GridFunction& u, const ExponentField& p, const GridFunction& phi) {
    if (!(phi.domain() == u.domain())) throw std::invalid_argument("test function lives on another grid");
    for (std::size_t k = 0; k < phi.size(); ++k) {
        if (!u.is_interior(k) && phi[k] != 0.0) {
            throw std::invalid_argument("test function must vanish on boundary nodes");
        }
    }
    const Scheme sch(u, p);
    const Domain& d = u.domain();
    const auto uv = u.values();
    double sum = 0.0;
    for (int a = 0; a < d.dim(); ++a) {
        const std::ptrdiff_t s = d.stride(a);
        for (std::size_t k = 0; k < d.size(); ++k) {
            if (d.unflat(k)[a] + 1 >= d.node_count(a)) continue;
            const double dphi = phi[k + s] - phi[k];
            if (dphi == 0.0) continue;
            double g;
            const double c = sch.edge_coefficient(uv, k, a, 0.0, &g);
            sum += sch.volume() * c * g * dphi / d.spacing(a);
        }
    }
    for (std::size_t k : u.interior_nodes()) {
        if (phi[k] == 0.0) continue;
        double drift = 0.0;
        for (int a = 0; a < d.dim(); ++a) {
            const double b = sch.drift_coefficient(uv, k, a, 0.0);
            drift += b * sch.drift_difference(uv, k, a, b, false);
        }
        sum += sch.volume() * drift * phi[k];
    }
    return sum;
}

double test_function_norm(const GridFunction& phi) {
    const Domain& d = phi.domain();
    double vol = 1.0;
    for (int a = 0; a < d.dim(); ++a) vol *= d.spacing(a);
    double sum = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) sum += vol * std::abs(phi[k]);
    for (int a = 0; a < d.dim(); ++a) {
        const std::ptrdiff_t s = d.stride(a);
        for (std::size_t k = 0; k < d.size(); ++k) {
            if (d.unflat(k)[a] + 1 >= d.node_count(a)) continue;
            sum += vol * std::abs(phi[k + s] - phi[k]) / d.spacing(a);
        }
    }
    return sum;
}

std::string to_string(TestFamily family) {
    return family == TestFamily::hat ? "hat" : "bump";
}

namespace {

// Support of a test function centred at k: (node, weight) pairs.
bool test_support(const GridFunction& like, TestFamily family, std::size_t k,
                  std::vector<std::pair<std::size_t, double>>& out) {
    out.clear();
    if (!like.is_interior(k)) return false;
    if (family == TestFamily::hat) {
        out.emplace_back(k, 1.0);
        return true;
    }
    const Domain& d = like.domain();
    const NodeIndex c = d.unflat(k);
    const int jr = d.dim() == 2 ? 1 : 0;
    for (int j = -jr; j <= jr; ++j) {
        for (int i = -1; i <= 1; ++i) {
            const std::size_t y = d.flat({c[0] + i, c[1] + j});
            if (!like.is_interior(y)) return false;
            out.emplace_back(y, (i == 0 ? 1.0 : 0.25) * (j == 0 ? 1.0 : 0.25));
        }
    }
    return true;
}

}  // namespace

std::optional<GridFunction> test_function(const GridFunction& like, TestFamily family, std::size_t k) {
    std::vector<std::pair<std::size_t, double>> sup;
    if (!test_support(like, family, k, sup)) return std::nullopt;
    GridFunction phi(like.domain());
    phi.copy_kinds(like);
    for (const auto& [y, w] : sup) phi[y] = w;
    return phi;
}

Json WeakResidualReport::to_json(bool include_values) const {
    Json j;
    j["family"] = to_string(family);
    j["tests"] = residuals.size();
    j["tolerance"] = tolerance;
    j["max_abs"] = max_abs;
    j["min"] = min_value;
    j["max"] = max_value;
    j["violations"] = violations;
    j["strictly_positive"] = strictly_positive;
    if (include_values) {
        j["centers"] = centers;
        j["residuals"] = residuals;
    }
    return j;
}

WeakResidualReport audit_supersolution(const GridFunction& u, const ExponentField& p, TestFamily family,
                                       double tolerance) {
    const GridFunction r = nodal_residual(u, p, 0.0);
    const Domain& d = u.domain();
    double vol = 1.0;
    for (int a = 0; a < d.dim(); ++a) vol *= d.spacing(a);

    WeakResidualReport rep;
    rep.family = family;
    rep.tolerance = tolerance;
    double norm = 0.0;
    std::vector<std::pair<std::size_t, double>> sup;
    for (std::size_t k : u.interior_nodes()) {
        if (!test_support(u, family, k, sup)) continue;
        if (norm == 0.0) norm = test_function_norm(*test_function(u, family, k));
        double w = 0.0;
        for (const auto& [y, wt] : sup) w += wt * r[y];
        const double v = vol * w / norm;
        rep.centers.push_back(k);
        rep.residuals.push_back(v);
    }
    if (!rep.residuals.empty()) {
        rep.min_value = *std::min_element(rep.residuals.begin(), rep.residuals.end());
        rep.max_value = *std::max_element(rep.residuals.begin(), rep.residuals.end());
    }
    for (double v : rep.residuals) {
        rep.max_abs = std::max(rep.max_abs, std::abs(v));
        if (v < -tolerance) ++rep.violations;
        if (v > tolerance) ++rep.strictly_positive;
    }
    return rep;
}

}  // namespace pxlap
