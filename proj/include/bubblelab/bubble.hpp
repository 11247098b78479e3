#pragma once

#include <string>
#include <vector>

#include "bubblelab/geometry.hpp"

namespace bubblelab {

/// One member S_{s1} of the soap-bubble family, as a quarter profile curve
/// sampled on a uniform tilt-angle grid alpha in [0, pi/2].
///
/// The quarter curve runs from (s, y) = (0, u_max) at alpha = 0 to (s1, 0) at
/// alpha = pi/2; the closed profile is its even reflection in s and in y.
/// Node values satisfy the first integral sin(alpha_j) = H * phi(s_j).
struct BubbleProfile {
    double s1 = 0.0;
    double H = 0.0;           // 1/phi(s1)
    double V = 0.0;           // enclosed volume
    double A_lat = 0.0;       // area of the closed surface
    double u_max = 0.0;       // shifted height at s = 0
    double x0_measure = 0.0;  // |X_0| = 4 pi c F(s1)
    std::vector<double> alpha, s, u, t;  // t = arclength along the quarter curve

    int node_count() const { return static_cast<int>(alpha.size()); }
};

struct SweepRow {
    double s1 = 0.0;
    bool ok = false;
    std::string error;
    double H = 0.0, V = 0.0, A_lat = 0.0, u_max = 0.0, beta_margin = 0.0;
};

/// Integrates the tilt-angle system
///     ds/dalpha = cos(alpha) / (H phi_s(s)),  du/dalpha = -sin(alpha) / (H phi_s(s))
/// from (0, 0, 0) to alpha = pi/2 with adaptive RK4(5) substeps between the
/// uniform grid nodes, then shifts u so that u(pi/2) = 0. n_nodes is rounded
/// up to an even cell count.
///
/// Throws InvalidInputError for s1 outside (0, s0) and NumericalFailureError
/// if phi_s becomes nonpositive before alpha reaches pi/2.
BubbleProfile solve_profile(const WarpedGeometry& g, double s1, int n_nodes);

/// Max over interior nodes (the 3 nearest alpha = pi/2 excluded) of
/// |H_fd(s) - 1/phi(s1)| where H_fd is the graph mean curvature
///     -u''/(1+u'^2)^{3/2} - u' (f_s/f) / (1+u'^2)^{1/2}
/// evaluated by centered differences in the uniform alpha parameter
/// (parametric form; the s-form is identical but singular at the fold).
double mean_curvature_residual(const BubbleProfile& bp, const WarpedGeometry& g);

/// V = 8 pi c int_0^{s1} f(s) u(s) ds, by composite Simpson on the alpha grid.
double enclosed_volume(const BubbleProfile& bp, const WarpedGeometry& g);

/// Area of the closed surface: 8 pi c int_0^{pi/2} f(s(alpha))/(H phi_s) dalpha,
/// nonsingular for s1 < s0.
double lateral_area(const BubbleProfile& bp, const WarpedGeometry& g);

/// Inverts the monotone map s1 -> V(s1) by bisection (relative tol 1e-8).
double volume_to_s1(const WarpedGeometry& g, double v, int n_nodes = 1024);

/// Batch driver; rows ordered by s1, failures recorded per row.
std::vector<SweepRow> family_sweep(const WarpedGeometry& g, const std::vector<double>& s1_list,
                                   int n_nodes = 1024);

}  // namespace bubblelab
