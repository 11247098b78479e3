#pragma once

#include <vector>

namespace bubblelab::num {

/// Symmetric tridiagonal matrix: diag has n entries, off has n-1.
struct Tridiag {
    std::vector<double> diag;
    std::vector<double> off;
    int n() const { return static_cast<int>(diag.size()); }
};

// Number of eigenvalues of T strictly below sigma (Sturm sequence count
// from the LDL^T pivots, with the usual tiny-pivot safeguard).
int sturm_count(const Tridiag& T, double sigma);

// The m smallest eigenvalues, ascending, located by bisection inside the
// Gershgorin interval. Reliable for clustered/multiple eigenvalues.
std::vector<double> smallest_eigenvalues(const Tridiag& T, int m);

// Solves (T - sigma I) x = b with partial pivoting over the three bands.
// Returns false when the shifted matrix is numerically singular.
bool solve_shifted(const Tridiag& T, double sigma, const std::vector<double>& b,
                   std::vector<double>& x);

// Normalized eigenvector for an isolated eigenvalue near lambda, by inverse
// iteration with a small perturbed shift.
std::vector<double> eigenvector(const Tridiag& T, double lambda);

// Smallest eigenvalue of T restricted to the hyperplane { x : q . x = 0 }
// (q need not be normalized). The constrained eigenvalues interlace the
// unconstrained ones and are the zeros of S(sigma) = q^T (T - sigma)^{-1} q
// in the spectral gaps; this bisects on the sign of S inside the first gap.
double constrained_smallest_eigenvalue(const Tridiag& T, const std::vector<double>& q);

}  // namespace bubblelab::num
