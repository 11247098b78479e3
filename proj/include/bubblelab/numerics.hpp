#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace bubblelab::num {

// Solves a tridiagonal system in place (Thomas algorithm, no pivoting).
// diag/upper/lower are the three bands; rhs is overwritten with the solution.
void solve_tridiagonal(std::vector<double> lower, std::vector<double> diag,
                       std::vector<double> upper, std::vector<double>& rhs);

// Clamped cubic interpolating spline. End slopes may be supplied exactly;
// when omitted they are estimated from a one-sided cubic fit, which keeps
// the usual O(h^4) interpolation error without a natural-spline boundary
// layer. Knots must be strictly increasing; evaluation clamps to the range.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);
    CubicSpline(std::vector<double> x, std::vector<double> y,
                std::optional<double> slope_a, std::optional<double> slope_b);

    double eval(double s) const;
    double deriv(double s) const;
    double deriv2(double s) const;
    bool empty() const { return x_.empty(); }

private:
    std::size_t segment(double s) const;
    std::vector<double> x_, y_, m_;  // m_ = second derivatives at knots
};

// Cumulative integral of fn over [a, b] sampled at n+1 uniform nodes.
// Each cell is integrated with Simpson's rule using the cell midpoint,
// so the returned vector has an O(h^4) value at every node.
std::vector<double> cumulative_simpson(const std::function<double(double)>& fn,
                                       double a, double b, int n);

// Composite Simpson over already-sampled uniform data (n even; if odd the
// last cell is handled with a trapezoid correction of matching order).
double simpson_from_samples(const std::vector<double>& y, double h);

// Adaptive Cash-Karp RK4(5). Integrates y' = rhs(x, y) from a to b and
// reports the state at the requested checkpoints (which must be increasing
// and span [a, b]). Throws NumericalFailureError if the step size collapses.
using OdeRhs = std::function<void(double, const double*, double*)>;
void integrate_rk45(const OdeRhs& rhs, int dim, std::vector<double>& y,
                    const std::vector<double>& checkpoints,
                    const std::function<void(int, const double*)>& on_checkpoint,
                    double rtol = 1e-13, double atol = 1e-14);

// Root of fn on [a, b] assuming fn(a) and fn(b) have opposite signs.
double bisect_root(const std::function<double(double)>& fn, double a, double b,
                   double xtol, int max_iter = 200);

// Refines a maximum of fn inside [a, b] by golden-section search.
double golden_max(const std::function<double(double)>& fn, double a, double b,
                  double xtol = 1e-12);

// Deterministic RNG wrapper. std::mt19937_64 raw draws are portable; the
// gaussians use Box-Muller on the raw stream so outputs are bit-stable too.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
    double uniform();  // in [0, 1)
    double gauss();

private:
    std::uint64_t next();
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Runs fn(i) for i in [0, count) on up to BUBBLE_LAB_THREADS threads
// (hardware concurrency by default). Falls back to serial for small counts.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace bubblelab::num
