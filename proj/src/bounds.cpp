#include "bubblelab/bounds.hpp"

#include <cmath>

#include "bubblelab/errors.hpp"

namespace bubblelab {

double unit_ball_volume(int n) {
    if (n < 0) throw InvalidInputError("unit_ball_volume: n must be >= 0");
    double even = 1.0;  // omega_0
    double odd = 2.0;   // omega_1
    if (n == 0) return even;
    if (n == 1) return odd;
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    for (int k = 2; k <= n; ++k) {
        if (k % 2 == 0)
            even *= kTwoPi / k;
        else
            odd *= kTwoPi / k;
    }
    return (n % 2 == 0) ? even : odd;
}

double isop_H_bound(int n, double vol_X, double v, bool obstacle) {
    if (n < 1 || !(vol_X > 0.0) || !(v > 0.0))
        throw InvalidInputError("isop_H_bound: need n >= 1, |X| > 0, v > 0");
    const double base = n * std::pow(unit_ball_volume(n) * vol_X, 1.0 / n) * std::pow(v, -1.0 / n);
    return obstacle ? 2.0 * base : base;
}

H0Result H0_large_bubble(int d, int n, double R0) {
    if (d < 2) throw InvalidInputError("H0_large_bubble: d must be >= 2");
    if (n < 1) throw InvalidInputError("H0_large_bubble: n must be >= 1");
    if (R0 < 0.0) throw InvalidInputError("H0_large_bubble: R0 must be >= 0");
    H0Result out;
    if (n == 1) {
        if (R0 == 0.0) {
            out.H0 = 0.0;
            out.ric_nonneg = true;  // Ric >= 0 regime; use ric_nonneg_H_bound instead
            return out;
        }
        out.H0 = std::sqrt(static_cast<double>(d) * (d - 1) * R0);
    } else {
        out.H0 = std::sqrt(static_cast<double>(d) * (d - 1) * (R0 + n - 1));
    }
    return out;
}

double ric_nonneg_H_bound(int d, int n, double rho1) {
    if (!(rho1 > 0.0)) throw InvalidInputError("ric_nonneg_H_bound: rho1 must be positive");
    if (d < 2 || n < 1) throw InvalidInputError("ric_nonneg_H_bound: need d >= 2 and n >= 1");
    return (n == 1 ? 4.0 : 8.0) * (d - 1) / rho1;
}

SlopeConstants slope_bound_constants(int n, double H, double C, double R0) {
    if (n < 1) throw InvalidInputError("slope_bound_constants: n must be >= 1");
    if (C < 0.0 || R0 < 0.0 || H < 0.0)
        throw InvalidInputError("slope_bound_constants: H, C, R0 must be >= 0");
    SlopeConstants out;
    const double growth = (n == 1) ? 9.0 * (2.0 + H) : 18.0 * n + 27.0 * H;
    out.C1 = std::max(growth * C * C, R0);
    if (!(out.C1 > 0.0))
        throw UndefinedBoundError(
            "slope_bound_constants: C1 = 0 (C = 0 with R0 = 0) leaves the bound formula undefined");
    // log C' = C1/2 - log(1 - e^{-C1/2}) + log(1 + 20C), finite for any C1 > 0
    out.log_C_prime = 0.5 * out.C1 - std::log1p(-std::exp(-0.5 * out.C1)) + std::log(1.0 + 20.0 * C);
    out.C_prime = std::exp(out.log_C_prime);
    return out;
}

std::vector<InequalityRow> check_area_H_volume(const SurfaceStats& st) {
    std::vector<InequalityRow> rows;
    auto push = [&rows](const std::string& name, bool applicable, double margin) {
        InequalityRow r;
        r.inequality = name;
        r.applicable = applicable;
        r.margin = applicable ? margin : 0.0;
        r.pass = !applicable || margin >= 0.0;
        rows.push_back(std::move(r));
    };
    const bool closed_case = st.is_soap_bubble || st.is_isoperimetric;
    push("vH-le-area", closed_case, st.area - st.v * st.H);
    {
        const bool app = st.is_isoperimetric && st.vol_X > 0.0;
        double margin = 0.0;
        if (app) {
            const double cyl = st.n * std::pow(unit_ball_volume(st.n) * st.vol_X, 1.0 / st.n) *
                               std::pow(st.v, (st.n - 1.0) / st.n);
            margin = cyl - st.area;
        }
        push("cylinder-comparison", app, margin);
    }
    push("area-upper-bound", st.n >= 2 && closed_case,
         st.n >= 2 ? (static_cast<double>(st.n) / (st.n - 1)) * st.H * st.v - st.area : 0.0);
    push("graph-area-n1", st.n == 1 && closed_case, st.v * st.H + 2.0 * st.x0_measure - st.area);
    {
        const bool app = st.is_isoperimetric && st.vol_X > 0.0;
        push("isop-H-bound", app, app ? isop_H_bound(st.n, st.vol_X, st.v) - st.H : 0.0);
    }
    return rows;
}

}  // namespace bubblelab
