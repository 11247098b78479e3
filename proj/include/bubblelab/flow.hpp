#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bubblelab {

/// Flat-torus model of the closed factor X: |X| and the first Laplacian
/// eigenvalue are available in closed form, which is all the large-volume
/// threshold needs.
struct TorusDomain {
    int dim = 1;                      // 1 or 2
    double lengths[2] = {1.0, 1.0};   // per-axis periods
    int resolution = 64;              // nodes per axis

    int cell_count() const;
    double cell_volume() const;
    double total_volume() const;      // |X|
    double lambda1() const;           // (2 pi / max length)^2
    double spacing(int axis) const { return lengths[axis] / resolution; }
};

TorusDomain make_torus(int dim, const double* lengths, int resolution);

/// Discretized slice-volume function sigma = (u/n)^n on the torus, sigma > 0.
/// a = mean(sigma) and tau = sigma - a are recomputed, never stored.
struct SigmaField {
    TorusDomain domain;
    int n = 1;  // ball dimension
    std::vector<double> values;

    double alpha_exp() const { return (n - 1.0) / n; }
    double mean() const;
    double tau_inf() const;  // max |sigma - mean|
};

SigmaField make_constant_field(const TorusDomain& d, int n, double a);

/// Seeded band-limited random fluctuation (Fourier modes up to
/// resolution/4): sigma = a + tau with ||tau||_inf = tau_inf. Band-limiting
/// keeps the discrete Nyquist mode out of the initial data, which the
/// centered-difference gradient cannot damp.
SigmaField make_random_field(const TorusDomain& d, int n, double a, double tau_inf,
                             std::uint64_t seed);

SigmaField load_field_csv(const TorusDomain& d, int n, const std::string& path);

/// area(sigma) = n^n omega_n sum sqrt(sigma^{2 alpha} + |grad sigma|^2) cellvol,
/// with centered periodic differences.
double area_functional(const SigmaField& f);

/// volume(sigma) = n^n omega_n sum sigma cellvol (exact linear quadrature).
double volume_functional(const SigmaField& f);

/// Directional derivative of area_functional along a zero-mean direction;
/// exact for the discrete functional (not a finite difference).
double first_variation(const SigmaField& f, const std::vector<double>& direction);

/// L2 gradient of area_functional: first_variation(f, d) = sum grad_i d_i cellvol.
std::vector<double> area_gradient(const SigmaField& f);

struct DescentRow {
    long step = 0;
    double area = 0.0;
    double volume = 0.0;
    double tau_inf_over_a = 0.0;
};

struct DescentResult {
    SigmaField field;
    std::vector<DescentRow> trajectory;
    long steps = 0;
    bool converged = false;        // reached ||tau||_inf / a < 1e-6
    double volume_drift_rel = 0.0;
    double final_area = 0.0;
};

/// Volume-constrained explicit descent: sigma <- sigma - h (G - mean G) with
/// backtracking on area increase; stops at ||tau||_inf / a < 1e-6 or
/// max_steps. The mean-free step conserves the (linear) volume exactly; an
/// additive rebalance removes the residual roundoff each step. Throws
/// NumericalFailureError when the field cannot stay positive even with the
/// step halved away (suggest reducing step_size).
DescentResult constrained_descent(const SigmaField& start, long max_steps, double step_size);

/// C'' - 4 / (n lambda1 a^{2/n}); positive means the large-volume positivity
/// argument closes at this average slice volume.
double large_volume_margin(double a, int n, double lambda1, double c_doubleprime);

/// A concrete admissible witness for C'': 2^{-alpha} / (sqrt(1 + C'^2) + 1)
/// (one valid choice, not canonical).
double gradient_term_constant(int n, double c_prime);

struct VariationBoundResult {
    bool holds = false;
    double margin = 0.0;  // LHS - RHS
    double c_doubleprime = 0.0;
};

/// Two-sided evaluation of the averaged-gradient inequality for one field.
/// Preconditions (sigma in [a/2, 2a], |tau| <= 2 C a^alpha, |grad u| <= C')
/// are checked and raise InvalidInputError when violated.
VariationBoundResult variation_bound_check(const SigmaField& f, double C, double c_prime);

struct VariationBoundTrials {
    bool all_hold = false;
    double worst_margin = 0.0;
    int trials = 0;
};

/// Runs the check over seeded random admissible fields.
VariationBoundTrials variation_bound_trials(const TorusDomain& d, int n, double a, double C,
                                    double c_prime, int count, std::uint64_t seed);

struct SlopeBoundCheck {
    bool applicable = false;  // min u > 1
    double max_gradient = 0.0;
    bool pass = false;
};

/// Discrete |grad u| of u = n sigma^{1/n} against the deformation slope bound C'.
SlopeBoundCheck verify_slope_bound(const SigmaField& f, double c_prime);

}  // namespace bubblelab
