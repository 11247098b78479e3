#pragma once

#include <string>
#include <vector>

namespace bubblelab {

/// Volume of the unit n-ball via the half-integer Gamma recursion
/// (omega_0 = 1, omega_1 = 2, omega_n = 2 pi omega_{n-2} / n).
double unit_ball_volume(int n);

/// Mean-curvature bound for an isoperimetric boundary of volume v:
/// n (omega_n |X|)^{1/n} v^{-1/n}; the obstacle variant is twice this.
double isop_H_bound(int n, double vol_X, double v, bool obstacle = false);

struct H0Result {
    double H0 = 0.0;
    bool ric_nonneg = false;  // n = 1 with R0 = 0: the sharper Ric >= 0 bound applies
};

/// Unique positive root of the large-bubble comparison:
///   H0 = sqrt(d(d-1)(R0 + n - 1))   for n >= 2,
///   H0 = sqrt(d(d-1) R0)            for n = 1 (0 with a flag when R0 = 0).
H0Result H0_large_bubble(int d, int n, double R0);

/// Ric >= 0 regime: 4(d-1)/rho1 for n = 1, 8(d-1)/rho1 for n >= 2.
double ric_nonneg_H_bound(int d, int n, double rho1);

struct SlopeConstants {
    double C1 = 0.0;
    double C_prime = 0.0;      // may overflow to inf for large C1
    double log_C_prime = 0.0;  // always finite
};

/// Slope-estimate constants: C1 = max((18n + 27H) C^2, R0) for n >= 2,
/// C1 = max(9(2+H) C^2, R0) for n = 1; C' = e^{C1}/(e^{C1/2}-1) (1 + 20C).
/// Throws UndefinedBoundError when C1 = 0 (degenerate C = R0 = 0).
SlopeConstants slope_bound_constants(int n, double H, double C, double R0);

/// Inputs for the inequality suite. Fill what is known; provenance flags
/// select which inequalities apply.
struct SurfaceStats {
    int d = 3;       // ambient dimension
    int n = 1;       // Euclidean factor dimension
    double vol_X = 0.0;
    double v = 0.0;  // enclosed volume
    double H = 0.0;
    double area = 0.0;
    double x0_measure = 0.0;  // |X_0|, n = 1 rotated graphs
    double rho0 = 0.0, rho1 = 0.0;
    bool is_isoperimetric = false;
    bool is_soap_bubble = false;
};

struct InequalityRow {
    std::string inequality;
    bool applicable = false;
    double margin = 0.0;  // >= 0 means the inequality holds
    bool pass = false;
};

/// Margins for every applicable closed-form inequality:
///   vH-le-area          v H <= area            (bubble or isoperimetric)
///   cylinder-comparison          area <= n (omega_n |X|)^{1/n} v^{(n-1)/n}  (isoperimetric)
///   area-upper-bound  area <= n/(n-1) H v    (n >= 2 closed bubble)
///   graph-area-n1        area <= v H + 2 |X_0|  (n = 1 rotated graph)
///   isop-H            H <= n (omega_n |X|)^{1/n} v^{-1/n}        (isoperimetric)
std::vector<InequalityRow> check_area_H_volume(const SurfaceStats& st);

}  // namespace bubblelab
