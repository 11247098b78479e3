#pragma once

#include <memory>
#include <optional>

#include "bubblelab/profile.hpp"

namespace bubblelab {

/// Metric data of Y x R = I x S^1 x R with metric ds^2 + c^2 f(s)^2 dtheta^2 + dy^2.
///
/// f is reconstructed from phi through
///     f(s) = exp(-int_0^s q) / (1 + s*phi_tilde(s)),   q = phi_tilde / (1 + s*phi_tilde),
/// with phi_tilde = (phi - s)/s^2, which is regular at s = 0 and normalized so
/// f(0) = 1. The warp constant c multiplies f only inside metric-level
/// formulas downstream; everything stored here is c-independent except the
/// recorded c itself.
class WarpedGeometry {
public:
    WarpedGeometry() = default;

    const PhiProfile& profile() const { return profile_; }
    double c() const { return c_; }
    double s_max() const { return profile_.s_max; }
    std::optional<double> s0() const { return profile_.s0; }

    double f(double s) const;
    double f_s(double s) const;
    double f_ss(double s) const;
    double F(double s) const;  // odd antiderivative of f, F(0) = 0

    double phi(double s) const { return profile_.phi(s); }
    double phi_s(double s) const { return profile_.phi_s(s); }
    double phi_ss(double s) const { return profile_.phi_ss(s); }

    /// Gaussian curvature of (Y, G_c): -f_ss/f, independent of c.
    double gauss_curvature(double s) const;

    /// (log f)_ss at s.
    double log_f_ss(double s) const;

    friend WarpedGeometry f_from_phi(const PhiProfile&, double, int);

private:
    double log_derivative(double s) const;   // f_s/f = (1 - phi_s)/phi, regularized
    double log_derivative_s(double s) const; // d/ds of the above

    PhiProfile profile_;
    double c_ = 1.0;
    struct Cache;
    std::shared_ptr<const Cache> cache_;
};

/// Reconstructs the warp factor from a validated profile. Throws
/// InvalidInputError when validation fails and NumericalFailureError when
/// the exponent quadrature produces non-finite values.
WarpedGeometry f_from_phi(const PhiProfile& p, double c = 1.0, int grid_n = 8000);

/// Minimum of (log f)_ss over [a, b] on a dense grid; a positive value
/// certifies the log-convexity hypothesis up to grid resolution.
double log_f_convexity(const WarpedGeometry& g, double a, double b, int grid_n = 10000);

/// R0 = max over [a, b] of (f_ss/f)^+ : the most negative Ricci direction of
/// the 3-manifold Y x R is tangent to Y with Ric = -f_ss/f, and the y
/// direction contributes 0.
double ricci_bound_R0(const WarpedGeometry& g, double a, double b, int grid_n = 10000);

}  // namespace bubblelab
