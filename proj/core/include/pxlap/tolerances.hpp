#pragma once

// Tolerance manifest of the acceptance suite. Every "C h" bound is the
// constant below times the grid spacing of the grid being checked. The
// constants were calibrated once on the coarsest grid of each ladder and
// frozen; see the README for the calibration values.

namespace pxlap::tol {

// Affine data
inline constexpr double kAffineWeak = 1e-8;
inline constexpr double kAffineViscosity = 1e-6;
inline constexpr double kAffineSeconds = 10.0;

/// solve-weak passes when the normalized hat residual is below this.
inline constexpr double kSolveWeakResidual = 1e-8;

// Manufactured annulus solution: sup-error <= C h, observed order >= 1.
inline constexpr double kManufacturedWeakC = 0.01;
inline constexpr double kManufacturedViscosityC = 0.01;
inline constexpr double kMinOrder = 1.0;
inline constexpr double kManufacturedSeconds = 120.0;

// Cross audits of the equivalence study.
inline constexpr double kCrossViscosityC = 0.5;  // sup |F| of the weak solution at probes
inline constexpr double kCrossWeakC = 0.01;      // max normalized hat residual of the viscosity solution
/// Relative slack when checking that sup |u_weak - u_visc| decreases.
inline constexpr double kMonotoneSlack = 1e-12;

// Inf-convolution properties.
inline constexpr double kInfConvSemiconcavityC = 1.0;
inline constexpr double kInfConvEtaC = 2.0;
inline constexpr double kInfConvJetBoundC = 1.0;
/// Huber envelope match, in units of h.
inline constexpr double kHuberC = 1.0;
/// sup |u - u_eps| must not increase along the ladder beyond this.
inline constexpr double kGapSlack = 1e-12;

// Supersolution-defect decay.
inline constexpr double kDefectC = 1.0;
inline constexpr double kDefectRatio = 0.1;

// Pointwise inequalities.
inline constexpr double kFuzz = 1e-12;
inline constexpr double kFuzzSeconds = 30.0;

// Variable-exponent spaces.
inline constexpr double kLuxemburgRelative = 1e-10;
inline constexpr double kHolderRelative = 1e-12;

// Rado audit.
inline constexpr double kRadoFloor = 1e-12;
inline constexpr double kRadoKinkRatio = 10.0;
inline constexpr double kRadoGlobalRatio = 2.0;

}  // namespace pxlap::tol
