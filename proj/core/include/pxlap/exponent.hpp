#pragma once

// The variable exponent p(x): evaluation, certified bounds p-, p+, a
// Lipschitz bound, the gradient Dp, and mollification.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pxlap/grid.hpp"

namespace pxlap {

enum class ExponentKind { constant, affine, smooth_closure, grid_sampled };

std::string to_string(ExponentKind kind);

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<Vector(const Point&)>;

/// Description of an exponent before certification on a region.
struct ExponentSpec {
    ExponentKind kind = ExponentKind::constant;
    /// constant: value; affine: value at the origin.
    double value = 2.0;
    /// affine: p(x) = value + gradient . x
    std::vector<double> gradient;
    /// smooth_closure: p and optionally Dp (centered differences otherwise).
    ScalarField eval;
    VectorField grad;
    /// smooth_closure: a known Lipschitz bound skips the dense gradient scan.
    std::optional<double> known_lip;
    /// grid_sampled: nodal samples, interpolated multilinearly.
    std::shared_ptr<const GridFunction> samples;
    /// Free-form label recorded in reports, e.g. "sine(base=2.5, amp=0.5)".
    std::string label;

    static ExponentSpec constant_value(double p);
    static ExponentSpec affine_field(double p0, std::vector<double> gradient);
    static ExponentSpec closure(ScalarField eval, VectorField grad = {}, std::string label = {});
    static ExponentSpec grid(GridFunction samples);
};

class ExponentField {
public:
    double operator()(const Point& x) const { return eval_(x); }
    double eval(const Point& x) const { return eval_(x); }
    Vector gradient(const Point& x) const;

    ExponentKind kind() const { return kind_; }
    int dim() const { return dim_; }
    double p_minus() const { return p_minus_; }
    double p_plus() const { return p_plus_; }
    double lip() const { return lip_; }
    bool is_constant() const { return kind_ == ExponentKind::constant; }
    /// How the bounds were obtained, recorded in reports.
    const std::string& description() const { return description_; }

    /// Checks p- <= p <= p+ at every node and the Lipschitz bound on sampled
    /// node pairs. Returns the first violation, empty when all checks hold.
    std::optional<std::string> check_on(const Domain& domain) const;

private:
    friend ExponentField make_exponent(const ExponentSpec&, const Domain&);
    friend class MollifiedExponent;

    ExponentKind kind_ = ExponentKind::constant;
    int dim_ = 1;
    ScalarField eval_;
    VectorField grad_;
    double p_minus_ = 2.0;
    double p_plus_ = 2.0;
    double lip_ = 0.0;
    std::string description_;
};

/// Certifies an exponent on the box of `region`. Constant and affine fields
/// get exact bounds; closures are scanned on a dense lattice with a margin
/// lip*h_scan/2 and lip = 1.1 * max |Dp| found; grid samples use their node
/// extrema with margin lip*h/2.
/// Throws std::invalid_argument("exponent must satisfy p- > 1") otherwise.
ExponentField make_exponent(const ExponentSpec& spec, const Domain& region);

/// Convolution of p with the bump exp(-1/(1 - |z|^2/r^2)), normalized to
/// unit mass, evaluated by a symmetric midpoint rule so constants and affine
/// functions are reproduced exactly.
class MollifiedExponent {
public:
    MollifiedExponent(ExponentField base, double radius);

    double eval(const Point& x) const;
    Vector gradient(const Point& x) const;
    const ExponentField& base() const { return base_; }
    double radius() const { return radius_; }
    /// The mollified exponent as a certified field (bounds inherited from the
    /// base: mollification cannot leave [p-, p+] nor increase lip).
    ExponentField as_field() const;

    static constexpr int kPointsPerAxis = 24;

private:
    ExponentField base_;
    double radius_;
    std::vector<Vector> offsets_;
    std::vector<double> weights_;
};

}  // namespace pxlap
