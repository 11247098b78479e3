#include "bubblelab/geometry.hpp"

#include <cmath>
#include <sstream>

#include "bubblelab/errors.hpp"
#include "bubblelab/numerics.hpp"

namespace bubblelab {

struct WarpedGeometry::Cache {
    num::CubicSpline exponent;   // I(s) = int_0^s q, on [0, s_max]
    num::CubicSpline f_anti;     // int_0^s f, on [0, s_max]
    double g_slope0 = 0.0;       // (log f)_ss at s = 0
};

namespace {

// q(s) = (phi - s)/(s * phi); odd, q(0) = 0.
double exponent_integrand(const PhiProfile& p, double s) {
    const double z = std::abs(s);
    if (z < 1e-9) return 0.0;
    const double ph = p.phi(z);
    const double q = (ph - z) / (z * ph);
    return (s < 0) ? -q : q;
}

}  // namespace

WarpedGeometry f_from_phi(const PhiProfile& p, double c, int grid_n) {
    if (!(c > 0.0)) throw InvalidInputError("f_from_phi: warp constant c must be positive");
    auto diags = validate_profile(p);
    if (!diags.empty()) {
        std::ostringstream msg;
        msg << "f_from_phi: profile fails validation:";
        for (const auto& d : diags) msg << " [" << d.code << "] " << d.message << ";";
        throw InvalidInputError(msg.str());
    }

    WarpedGeometry g;
    g.profile_ = p;
    g.c_ = c;

    auto q = [&p](double s) { return exponent_integrand(p, s); };
    std::vector<double> grid(static_cast<std::size_t>(grid_n) + 1);
    for (int i = 0; i <= grid_n; ++i) grid[static_cast<std::size_t>(i)] = p.s_max * i / grid_n;
    const std::vector<double> I = num::cumulative_simpson(q, 0.0, p.s_max, grid_n);
    for (const double v : I)
        if (!std::isfinite(v))
            throw NumericalFailureError("f_from_phi: exponent quadrature did not converge");

    auto cache = std::make_shared<WarpedGeometry::Cache>();
    cache->exponent = num::CubicSpline(grid, I, 0.0, q(p.s_max));
    g.cache_ = cache;

    // g'(0) for (log f)_ss at the origin, via a 4th-order Richardson limit of
    // the odd function g = (1 - phi_s)/phi.
    auto graw = [&p](double s) { return (1.0 - p.phi_s(s)) / p.phi(s); };
    const double h0 = 1e-3 * std::min(1.0, p.s_max);
    cache->g_slope0 = (8.0 * graw(h0) - graw(2.0 * h0)) / (6.0 * h0);

    // antiderivative of the (now evaluable) f
    std::vector<double> Fv = num::cumulative_simpson([&g](double s) { return g.f(s); },
                                                     0.0, p.s_max, grid_n);
    cache->f_anti = num::CubicSpline(grid, Fv, g.f(0.0), g.f(p.s_max));
    return g;
}

double WarpedGeometry::f(double s) const {
    const double z = std::abs(s);
    if (z < 1e-9) return 1.0;
    // 1 + s*phi_tilde = phi/s
    return z * std::exp(-cache_->exponent.eval(z)) / profile_.phi(z);
}

double WarpedGeometry::log_derivative(double s) const {
    const double z = std::abs(s);
    double g;
    if (z < 1e-5) {
        g = cache_->g_slope0 * z;
    } else {
        g = (1.0 - profile_.phi_s(z)) / profile_.phi(z);
    }
    return (s < 0) ? -g : g;
}

double WarpedGeometry::log_derivative_s(double s) const {
    const double z = std::abs(s);
    if (z < 1e-5) return cache_->g_slope0;
    const double ph = profile_.phi(z);
    const double g = (1.0 - profile_.phi_s(z)) / ph;
    return -profile_.phi_ss(z) / ph - g * profile_.phi_s(z) / ph;
}

double WarpedGeometry::f_s(double s) const { return f(s) * log_derivative(s); }

double WarpedGeometry::f_ss(double s) const {
    const double g = log_derivative(s);
    return f(s) * (g * g + log_derivative_s(s));
}

double WarpedGeometry::F(double s) const {
    const double z = std::abs(s);
    const double v = cache_->f_anti.eval(z);
    return (s < 0) ? -v : v;
}

double WarpedGeometry::gauss_curvature(double s) const { return -f_ss(s) / f(s); }

double WarpedGeometry::log_f_ss(double s) const { return log_derivative_s(s); }

double log_f_convexity(const WarpedGeometry& g, double a, double b, int grid_n) {
    double mn = g.log_f_ss(a);
    for (int i = 1; i <= grid_n; ++i)
        mn = std::min(mn, g.log_f_ss(a + (b - a) * i / grid_n));
    return mn;
}

double ricci_bound_R0(const WarpedGeometry& g, double a, double b, int grid_n) {
    double mx = 0.0;
    for (int i = 0; i <= grid_n; ++i) {
        const double s = a + (b - a) * i / grid_n;
        mx = std::max(mx, g.f_ss(s) / g.f(s));
    }
    return std::max(0.0, mx);
}

}  // namespace bubblelab
