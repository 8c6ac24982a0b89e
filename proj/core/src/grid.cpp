#include "pxlap/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace pxlap {

Domain::Domain(int dim, std::array<double, 2> lower, std::array<double, 2> upper,
               std::array<int, 2> n)
    : dim_(dim), lower_(lower), upper_(upper), n_(n) {
    for (int a = 0; a < dim_; ++a) {
        if (!(upper_[a] > lower_[a])) {
            throw std::invalid_argument("domain: upper bound must exceed lower bound on axis " +
                                        std::to_string(a));
        }
        if (n_[a] < 1) {
            throw std::invalid_argument("domain: need at least one interior node per axis");
        }
        h_[a] = (upper_[a] - lower_[a]) / static_cast<double>(n_[a] + 1);
    }
    if (dim_ == 1) {
        lower_[1] = upper_[1] = 0.0;
        n_[1] = 0;
        h_[1] = 0.0;
    }
}

Domain Domain::line(double lower, double upper, int n) {
    return Domain(1, {lower, 0.0}, {upper, 0.0}, {n, 0});
}

Domain Domain::box(std::array<double, 2> lower, std::array<double, 2> upper, std::array<int, 2> n) {
    return Domain(2, lower, upper, n);
}

double Domain::min_spacing() const {
    return dim_ == 1 ? h_[0] : std::min(h_[0], h_[1]);
}

std::size_t Domain::size() const {
    return static_cast<std::size_t>(node_count(0)) * static_cast<std::size_t>(node_count(1));
}

NodeIndex Domain::unflat(std::size_t k) const {
    const auto nx = static_cast<std::size_t>(node_count(0));
    return {static_cast<int>(k % nx), static_cast<int>(k / nx)};
}

double Domain::coordinate(int axis, int i) const {
    if (i == n_[axis] + 1) return upper_[axis];
    return lower_[axis] + (upper_[axis] - lower_[axis]) * static_cast<double>(i) /
                              static_cast<double>(n_[axis] + 1);
}

Point Domain::point(NodeIndex idx) const {
    Point x(dim_);
    for (int a = 0; a < dim_; ++a) x[a] = coordinate(a, idx[a]);
    return x;
}

bool Domain::on_edge(NodeIndex idx) const {
    for (int a = 0; a < dim_; ++a) {
        if (idx[a] == 0 || idx[a] == n_[a] + 1) return true;
    }
    return false;
}

double Domain::measure() const {
    double m = 1.0;
    for (int a = 0; a < dim_; ++a) m *= upper_[a] - lower_[a];
    return m;
}

GridFunction::GridFunction(Domain domain)
    : GridFunction(domain, std::vector<double>(domain.size(), 0.0)) {}

GridFunction::GridFunction(Domain domain, std::vector<double> values)
    : domain_(domain), values_(std::move(values)), kinds_(domain.size(), NodeKind::interior) {
    if (values_.size() != domain_.size()) {
        throw std::invalid_argument("grid function: value count does not match node count");
    }
    for (std::size_t k = 0; k < kinds_.size(); ++k) {
        if (domain_.on_edge(k)) kinds_[k] = NodeKind::boundary;
    }
}

GridFunction GridFunction::sample(const Domain& domain,
                                  const std::function<double(const Point&)>& f) {
    GridFunction u(domain);
    for (std::size_t k = 0; k < u.size(); ++k) u.values_[k] = f(domain.point(k));
    return u;
}

void GridFunction::set_kinds(std::vector<NodeKind> kinds) {
    if (kinds.size() != values_.size()) {
        throw std::invalid_argument("grid function: kind mask size mismatch");
    }
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        if (kinds[k] == NodeKind::interior && domain_.on_edge(k)) {
            throw std::invalid_argument("grid function: edge nodes cannot be interior");
        }
    }
    kinds_ = std::move(kinds);
}

void GridFunction::copy_kinds(const GridFunction& other) {
    if (!(other.domain_ == domain_)) {
        throw std::invalid_argument("grid function: cannot copy kinds across grids");
    }
    kinds_ = other.kinds_;
}

void GridFunction::restrict_to_annulus(const Point& center, double r_in, double r_out) {
    if (domain_.dim() != 2) throw std::invalid_argument("annulus restriction needs a 2D grid");
    if (!(r_out > r_in) || r_in < 0.0) throw std::invalid_argument("annulus: need 0 <= r_in < r_out");
    std::vector<NodeKind> kinds(values_.size(), NodeKind::exterior);
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        const double r = (domain_.point(k) - center).norm();
        if (!domain_.on_edge(k) && r > r_in && r < r_out) kinds[k] = NodeKind::interior;
    }
    const std::ptrdiff_t s0 = domain_.stride(0);
    const std::ptrdiff_t s1 = domain_.stride(1);
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        if (kinds[k] != NodeKind::interior) continue;
        for (int dj = -1; dj <= 1; ++dj) {
            for (int di = -1; di <= 1; ++di) {
                auto& nb = kinds[k + di * s0 + dj * s1];
                if (nb == NodeKind::exterior) nb = NodeKind::boundary;
            }
        }
    }
    kinds_ = std::move(kinds);
}

std::vector<std::size_t> GridFunction::interior_nodes() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < kinds_.size(); ++k) {
        if (kinds_[k] == NodeKind::interior) out.push_back(k);
    }
    return out;
}

std::size_t GridFunction::interior_count() const {
    return static_cast<std::size_t>(std::count(kinds_.begin(), kinds_.end(), NodeKind::interior));
}

bool GridFunction::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void GridFunction::check_finite() const {
    if (!all_finite()) throw std::invalid_argument("grid function: non-finite values");
}

double GridFunction::sup_norm() const {
    double m = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (in_closure(k)) m = std::max(m, std::abs(values_[k]));
    }
    return m;
}

double GridFunction::max_value() const {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (in_closure(k)) m = std::max(m, values_[k]);
    }
    return m;
}

double GridFunction::min_value() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (in_closure(k)) m = std::min(m, values_[k]);
    }
    return m;
}

double GridFunction::oscillation() const { return max_value() - min_value(); }

double sup_difference(const GridFunction& a, const GridFunction& b) {
    if (!(a.domain() == b.domain())) throw std::invalid_argument("sup_difference: grid mismatch");
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a.in_closure(k)) m = std::max(m, std::abs(a[k] - b[k]));
    }
    return m;
}

namespace {

std::size_t checked_interior(const GridFunction& u, NodeIndex node) {
    const Domain& d = u.domain();
    for (int a = 0; a < 2; ++a) {
        if (node[a] < 0 || node[a] >= d.node_count(a)) {
            throw std::out_of_range("node index outside the grid");
        }
    }
    const std::size_t k = d.flat(node);
    if (d.on_edge(node) || !u.is_interior(k)) throw std::invalid_argument("interior required");
    return k;
}

}  // namespace

Vector gradient_centered(const GridFunction& u, NodeIndex node) {
    return discrete_jet(u, node).eta;
}

Matrix hessian_centered(const GridFunction& u, NodeIndex node) {
    return discrete_jet(u, node).hess;
}

Jet discrete_jet(const GridFunction& u, NodeIndex node) {
    const std::size_t k = checked_interior(u, node);
    const int dim = u.domain().dim();
    double eta[2];
    double hess[4];
    detail::jet_at(u.domain(), u.values(), k, eta, hess);
    Jet jet{Vector(dim), Matrix(dim, dim)};
    for (int a = 0; a < dim; ++a) {
        jet.eta[a] = eta[a];
        for (int b = 0; b < dim; ++b) jet.hess(a, b) = hess[a * dim + b];
    }
    return jet;
}

double quadrature_weight(const Domain& d, std::size_t k) {
    const NodeIndex idx = d.unflat(k);
    double w = 1.0;
    for (int a = 0; a < d.dim(); ++a) {
        w *= d.spacing(a);
        if (idx[a] == 0 || idx[a] == d.interior_count(a) + 1) w *= 0.5;
    }
    return w;
}

double integrate(const GridFunction& f) {
    double sum = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (f.in_closure(k)) sum += quadrature_weight(f.domain(), k) * f[k];
    }
    return sum;
}

}  // namespace pxlap
