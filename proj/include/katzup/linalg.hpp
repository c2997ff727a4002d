#ifndef KATZUP_LINALG_HPP
#define KATZUP_LINALG_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "katzup/graph.hpp"

namespace katzup {

using Vector = std::vector<double>;

/// out = A * v. `out` must not alias `v`.
void spmv(const Graph &g, std::span<const double> v, std::span<double> out);
Vector spmv(const Graph &g, std::span<const double> v);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);

/// Spectral radius of the adjacency matrix by power iteration on A^2 from the
/// all-ones vector. Stops once the Rayleigh residual of A^2 is within `tol`
/// relative to the estimate. Throws EmptyGraph (no edges) or NoConvergence.
double spectral_radius(const Graph &g, double tol = 1e-6, std::size_t max_iter = 1000);

/// Estimate of the 2-norm condition number of I - alpha*A, from the extreme
/// eigenvalues of A (power iterations; rho may be passed in when known).
double resolvent_condition_estimate(const Graph &g, double alpha, double rho = -1.0);

struct SolveReport {
    Vector solution;
    std::size_t iterations = 0;
    /// 2-norm of rhs - (I - alpha A) x for CG; norm of the last added term for Neumann.
    double residual_norm = 0.0;
    bool converged = false;
    std::size_t spmv_count = 0;
};

/// Called after every CG iteration k >= 1 with the iterate and its relative residual.
using CgObserver = std::function<void(std::size_t k, std::span<const double> x, double rel_residual)>;

/**
 * Unpreconditioned conjugate gradient on (I - alpha A) x = rhs starting from x0
 * (empty span means zero). Stops when ||rhs - (I - alpha A)x|| <= tol ||rhs||.
 * Throws NotPositiveDefinite on nonpositive curvature, NoConvergence after
 * max_iter iterations.
 */
SolveReport solve_resolvent_cg(const Graph &g, double alpha, std::span<const double> rhs,
                               std::span<const double> x0, double tol, std::size_t max_iter,
                               const CgObserver &observer = {});

/// Partial sums of sum_r alpha^r A^r rhs; stops when the newest term's norm is
/// at most tol times the partial sum's norm, or after max_iter terms.
SolveReport solve_resolvent_neumann(const Graph &g, double alpha, std::span<const double> rhs,
                                    double tol, std::size_t max_iter);

} // namespace katzup

#endif // KATZUP_LINALG_HPP
