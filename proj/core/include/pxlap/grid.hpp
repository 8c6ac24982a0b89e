#pragma once

// Uniform tensor grids in one or two dimensions, grid functions and the
// centered-difference calculus used by every solver and probe.
//
// Node layout: axis k carries n_k interior points plus one boundary point
// on each side, so node i along axis k sits at
//     x_k(i) = lower_k + (upper_k - lower_k) * i / (n_k + 1),  i = 0..n_k+1.
// Flat indices run axis 0 fastest.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace pxlap {

/// Small dense vector (dimension <= 3), stack allocated.
using Vector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
/// Small dense matrix (dimension <= 3), stack allocated.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;
using Point = Vector;

using NodeIndex = std::array<int, 2>;

class Domain {
public:
    static Domain line(double lower, double upper, int n);
    static Domain box(std::array<double, 2> lower, std::array<double, 2> upper,
                      std::array<int, 2> n);

    int dim() const { return dim_; }
    double lower(int axis) const { return lower_[axis]; }
    double upper(int axis) const { return upper_[axis]; }
    int interior_count(int axis) const { return n_[axis]; }
    int node_count(int axis) const { return axis < dim_ ? n_[axis] + 2 : 1; }
    double spacing(int axis) const { return h_[axis]; }
    double min_spacing() const;

    std::size_t size() const;
    std::size_t flat(NodeIndex idx) const {
        return static_cast<std::size_t>(idx[0]) +
               static_cast<std::size_t>(idx[1]) * static_cast<std::size_t>(node_count(0));
    }
    NodeIndex unflat(std::size_t k) const;
    /// Flat offset between a node and its +1 neighbour along `axis`.
    std::ptrdiff_t stride(int axis) const { return axis == 0 ? 1 : node_count(0); }

    double coordinate(int axis, int i) const;
    Point point(NodeIndex idx) const;
    Point point(std::size_t k) const { return point(unflat(k)); }

    /// True when the node lies on the outer edge of the box (no full stencil).
    bool on_edge(NodeIndex idx) const;
    bool on_edge(std::size_t k) const { return on_edge(unflat(k)); }
    double measure() const;

    bool operator==(const Domain&) const = default;

private:
    Domain(int dim, std::array<double, 2> lower, std::array<double, 2> upper, std::array<int, 2> n);

    int dim_ = 1;
    std::array<double, 2> lower_{};
    std::array<double, 2> upper_{};
    std::array<int, 2> n_{};
    std::array<double, 2> h_{};
};

/// Role of a node. Interior nodes are unknowns; boundary nodes carry Dirichlet
/// data and belong to the closure of the domain; exterior nodes carry data
/// (used by stencils) but lie outside the domain, e.g. the hole of an annulus.
enum class NodeKind : std::uint8_t { interior = 0, boundary = 1, exterior = 2 };

class GridFunction {
public:
    explicit GridFunction(Domain domain);
    GridFunction(Domain domain, std::vector<double> values);

    static GridFunction sample(const Domain& domain, const std::function<double(const Point&)>& f);

    const Domain& domain() const { return domain_; }
    std::size_t size() const { return values_.size(); }

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    double operator[](std::size_t k) const { return values_[k]; }
    double& operator[](std::size_t k) { return values_[k]; }
    double at(NodeIndex idx) const { return values_[domain_.flat(idx)]; }

    std::span<const NodeKind> kinds() const { return kinds_; }
    NodeKind kind(std::size_t k) const { return kinds_[k]; }
    bool is_interior(std::size_t k) const { return kinds_[k] == NodeKind::interior; }
    /// Interior or boundary: the node belongs to the closed domain.
    bool in_closure(std::size_t k) const { return kinds_[k] != NodeKind::exterior; }
    void set_kinds(std::vector<NodeKind> kinds);
    /// Copies the node classification of another function on the same grid.
    void copy_kinds(const GridFunction& other);

    /// Restricts the domain to the open annulus r_in < |x - center| < r_out.
    /// Nodes outside become exterior, except those touching an interior node
    /// through the 3x3 stencil, which become boundary nodes.
    void restrict_to_annulus(const Point& center, double r_in, double r_out);

    std::vector<std::size_t> interior_nodes() const;
    std::size_t interior_count() const;

    bool all_finite() const;
    /// Throws std::invalid_argument when a value is NaN or infinite.
    void check_finite() const;

    double sup_norm() const;
    double max_value() const;
    double min_value() const;
    /// Oscillation over nodes in the closed domain.
    double oscillation() const;

private:
    Domain domain_;
    std::vector<double> values_;
    std::vector<NodeKind> kinds_;
};

/// Sup of |a - b| over nodes of the closed domain.
double sup_difference(const GridFunction& a, const GridFunction& b);

struct Jet {
    Vector eta;
    Matrix hess;
};

/// Second-order centered gradient at an interior node.
Vector gradient_centered(const GridFunction& u, NodeIndex node);
/// Three-point second differences on the diagonal, four-point cross
/// difference off the diagonal. Symmetric by construction.
Matrix hessian_centered(const GridFunction& u, NodeIndex node);
Jet discrete_jet(const GridFunction& u, NodeIndex node);

/// Composite trapezoidal rule over nodes of the closed domain (exterior nodes
/// carry zero weight). Box weights are prod_k h_k, halved per edge axis.
double integrate(const GridFunction& f);
double quadrature_weight(const Domain& domain, std::size_t k);

namespace detail {

// Unchecked stencils on raw values; `k` must have a full 3^dim stencil.
inline void jet_at(const Domain& d, std::span<const double> v, std::size_t k, double* eta,
                   double* hess) {
    const int dim = d.dim();
    for (int a = 0; a < dim; ++a) {
        const std::ptrdiff_t s = d.stride(a);
        const double h = d.spacing(a);
        const double up = v[k + s];
        const double dn = v[k - s];
        eta[a] = (up - dn) / (2.0 * h);
        hess[a * dim + a] = (up - 2.0 * v[k] + dn) / (h * h);
    }
    if (dim == 2) {
        const std::ptrdiff_t s0 = d.stride(0);
        const std::ptrdiff_t s1 = d.stride(1);
        const double cross = (v[k + s0 + s1] - v[k + s0 - s1] - v[k - s0 + s1] + v[k - s0 - s1]) /
                             (4.0 * d.spacing(0) * d.spacing(1));
        hess[1] = cross;
        hess[2] = cross;
    }
}

}  // namespace detail

}  // namespace pxlap
