#pragma once

#include <string>
#include <vector>

#include "bubblelab/bubble.hpp"
#include "bubblelab/geometry.hpp"
#include "bubblelab/sturm.hpp"

namespace bubblelab {

/// Coefficients of the index form Q(g) = int (A g_s^2 + g_theta^2/A + B g^2) ds dtheta
/// sampled on a bubble's node grid, plus the pointwise potential
/// P = -Ric(nu,nu) - |II|^2 = H^2 (-phi phi_ss - phi_s) and |II|^2 itself.
/// sqrt(phi(s1)^2 - phi^2) is evaluated as phi(s1) cos(alpha), so A carries no
/// cancellation; B is singular at the fold node alpha = pi/2 (its last entry
/// is the raw floating-point quotient there) and is only used on interior nodes.
struct IndexCoefficients {
    std::vector<double> A, B, P, II2;
};

enum class Parity { even, odd };
enum class Verdict { stable, unstable, marginal };

/// Reading of the beta integrand: the derivation uses phi_s; the frozen
/// variant replaces it by the constant phi_s(s1) for side-by-side comparison.
enum class BetaMode { phi_s, frozen_phi_s1 };

struct SectorSpectrum {
    int k = 0;
    Parity s_parity = Parity::even;
    Parity y_parity = Parity::even;
    std::vector<double> eigenvalues;  // ascending, m lowest
};

struct StabilityOptions {
    int k_max = 16;
    int m = 6;
    double tol_rel = 1e-7;  // relative to the largest computed eigenvalue
};

struct StabilityReport {
    double beta = 0.0;
    double ratio = 0.0;  // phi(s1)/c
    std::vector<SectorSpectrum> sectors;
    double translation_residual = 0.0;
    Verdict verdict = Verdict::marginal;
    // diagnostics backing the verdict
    double ee_zero_mean_lowest = 0.0;  // (k=0, even, even) on the weighted-zero-mean subspace
    double eo_deflated_lowest = 0.0;   // (k=0, even, odd) after deflating psi
    double psi_correlation = 0.0;
    double admissible_min = 0.0;
    double tol_abs = 0.0;
    bool tail_certified = false;
};

IndexCoefficients index_coefficients(const BubbleProfile& bp, const WarpedGeometry& g);

/// beta = sqrt( max over [0, s0] of f^2 |-phi phi_ss - phi_s| ), dense grid
/// plus golden-section refinement. Requires s0.
double beta(const WarpedGeometry& g, BetaMode mode = BetaMode::phi_s, double s1_frozen = 0.0);

/// Same maximization over an explicit interval [a, b].
double beta_on_interval(const WarpedGeometry& g, double a, double b,
                        BetaMode mode = BetaMode::phi_s, double s1_frozen = 0.0);

/// Sturm-Liouville operator of one (k, s-parity, y-parity) sector in
/// arclength t along the quarter curve:
///     L g = -(w g_t)_t / w + (P + k^2/(c^2 f^2)) g,   w = c f,
/// assembled as a mass-lumped P1 stiffness/mass pair and reduced to a
/// symmetric tridiagonal standard form. Parity folds become Neumann (even)
/// or Dirichlet (odd) ends at s = 0 and alpha = pi/2 respectively.
struct SectorOperator {
    num::Tridiag std_form;      // M^{-1/2} K M^{-1/2}
    std::vector<double> mass;   // diagonal of M
    std::vector<int> nodes;     // bubble node index per matrix row
};

SectorOperator build_sector_operator(const BubbleProfile& bp, const WarpedGeometry& g, int k,
                                     Parity s_parity, Parity y_parity);

/// m lowest eigenvalues for every sector with k in [0, k_max]; sectors are
/// independent and solved in parallel.
std::vector<SectorSpectrum> jacobi_spectrum(const BubbleProfile& bp, const WarpedGeometry& g,
                                            int k_max, int m);

/// Max-norm of the (k=0, s-even, y-odd) operator applied to the sampled
/// translation Jacobi field psi = sqrt(phi(s1)^2 - phi^2).
double jacobi_field_residual(const BubbleProfile& bp, const WarpedGeometry& g);

/// Pointwise defect of (A phi_s)_s = B phi - (c f phi(s1)/sqrt(phi(s1)^2-phi^2)) phi (log f)_ss
/// over interior nodes; the s-derivative is taken by 4th-order centered
/// differences in alpha with the exact chain rule.
double odd_sector_identity_defect(const BubbleProfile& bp, const WarpedGeometry& g);

StabilityReport stability_verdict(const BubbleProfile& bp, const WarpedGeometry& g,
                                  const StabilityOptions& opts = {});

std::string verdict_name(Verdict v);
std::string stability_report_json(const StabilityReport& r);

}  // namespace bubblelab
