#include "katzup/linalg.hpp"

#include <algorithm>
#include <string>

#include "katzup/error.hpp"

namespace katzup {

void spmv(const Graph &g, std::span<const double> v, std::span<double> out) {
    const std::size_t n = g.node_count();
    if (v.size() != n || out.size() != n)
        fail(ErrorCode::DimensionMismatch, "spmv: vector length " + std::to_string(v.size()) +
                                               " for graph with " + std::to_string(n) + " nodes");
    const auto offsets = g.offsets();
    const auto adj = g.adjacency();
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k)
            acc += v[adj[k]];
        out[i] = acc;
    }
}

Vector spmv(const Graph &g, std::span<const double> v) {
    Vector out(g.node_count());
    spmv(g, v, out);
    return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += a[i] * b[i];
    return acc;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

namespace {

void scale(std::span<double> v, double s) {
    for (double &x : v)
        x *= s;
}

} // namespace

double spectral_radius(const Graph &g, double tol, std::size_t max_iter) {
    if (g.edge_count() == 0)
        fail(ErrorCode::EmptyGraph, "spectral radius needs at least one edge");
    const std::size_t n = g.node_count();
    Vector v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    Vector av(n), a2v(n);
    for (std::size_t k = 0; k < max_iter; ++k) {
        spmv(g, v, av);
        spmv(g, av, a2v);
        // v is unit, so v^T A^2 v = ||Av||^2.
        const double mu = dot(av, av);
        double res2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = a2v[i] - mu * v[i];
            res2 += r * r;
        }
        if (std::sqrt(res2) <= tol * mu)
            return std::sqrt(mu);
        const double len = norm2(a2v);
        std::copy(a2v.begin(), a2v.end(), v.begin());
        scale(v, 1.0 / len);
    }
    fail(ErrorCode::NoConvergence,
         "spectral radius did not converge in " + std::to_string(max_iter) + " iterations");
}

double resolvent_condition_estimate(const Graph &g, double alpha, double rho) {
    if (g.edge_count() == 0)
        return 1.0;
    if (rho <= 0.0)
        rho = spectral_radius(g);
    const std::size_t n = g.node_count();
    // Power iteration on rho*I - A, whose dominant eigenvalue is rho - lambda_min.
    Vector v(n), av(n), w(n);
    std::uint64_t h = 0x9E3779B97F4A7C15ull;
    for (double &x : v) {
        h ^= h >> 31;
        h *= 0xBF58476D1CE4E5B9ull;
        x = 1.0 + static_cast<double>(h >> 40) / static_cast<double>(1ull << 24);
    }
    scale(v, 1.0 / norm2(v));
    double shifted = rho, previous = 0.0;
    for (int k = 0; k < 2000; ++k) {
        spmv(g, v, av);
        for (std::size_t i = 0; i < n; ++i)
            w[i] = rho * v[i] - av[i];
        shifted = dot(v, w);
        if (k > 0 && std::abs(shifted - previous) <= 1e-10 * std::abs(shifted))
            break;
        previous = shifted;
        const double len = norm2(w);
        if (len == 0.0)
            break;
        std::copy(w.begin(), w.end(), v.begin());
        scale(v, 1.0 / len);
    }
    const double lambda_min = std::max(rho - shifted, -rho);
    return (1.0 - alpha * lambda_min) / (1.0 - alpha * rho);
}

SolveReport solve_resolvent_cg(const Graph &g, double alpha, std::span<const double> rhs,
                               std::span<const double> x0, double tol, std::size_t max_iter,
                               const CgObserver &observer) {
    const std::size_t n = g.node_count();
    if (rhs.size() != n || (!x0.empty() && x0.size() != n))
        fail(ErrorCode::DimensionMismatch, "cg: rhs/x0 length does not match node count");
    if (!(alpha >= 0.0) || !(tol > 0.0))
        fail(ErrorCode::InvalidParameters, "cg: need alpha >= 0 and tol > 0");

    SolveReport rep;
    rep.solution.assign(n, 0.0);
    Vector r(rhs.begin(), rhs.end());
    Vector ap(n);
    auto apply = [&](std::span<const double> in, std::span<double> out) {
        spmv(g, in, ap);
        ++rep.spmv_count;
        for (std::size_t i = 0; i < n; ++i)
            out[i] = in[i] - alpha * ap[i];
    };

    Vector mp(n);
    if (!x0.empty()) {
        std::copy(x0.begin(), x0.end(), rep.solution.begin());
        apply(rep.solution, mp);
        for (std::size_t i = 0; i < n; ++i)
            r[i] -= mp[i];
    }
    const double bnorm = norm2(rhs);
    double rr = dot(r, r);
    rep.residual_norm = std::sqrt(rr);
    if (bnorm == 0.0 || rep.residual_norm <= tol * bnorm) {
        if (bnorm == 0.0)
            std::fill(rep.solution.begin(), rep.solution.end(), 0.0);
        rep.residual_norm = bnorm == 0.0 ? 0.0 : rep.residual_norm;
        rep.converged = true;
        return rep;
    }

    Vector p = r;
    for (std::size_t k = 1; k <= max_iter; ++k) {
        apply(p, mp);
        const double curvature = dot(p, mp);
        if (!(curvature > 0.0))
            fail(ErrorCode::NotPositiveDefinite,
                 "cg: nonpositive curvature; alpha*rho(A) must be below 1");
        const double step = rr / curvature;
        for (std::size_t i = 0; i < n; ++i) {
            rep.solution[i] += step * p[i];
            r[i] -= step * mp[i];
        }
        const double rr_next = dot(r, r);
        rep.residual_norm = std::sqrt(rr_next);
        rep.iterations = k;
        if (observer)
            observer(k, rep.solution, rep.residual_norm / bnorm);
        if (rep.residual_norm <= tol * bnorm) {
            rep.converged = true;
            return rep;
        }
        const double beta = rr_next / rr;
        rr = rr_next;
        for (std::size_t i = 0; i < n; ++i)
            p[i] = r[i] + beta * p[i];
    }
    fail(ErrorCode::NoConvergence, "cg: no convergence in " + std::to_string(max_iter) +
                                       " iterations (relative residual " +
                                       std::to_string(rep.residual_norm / bnorm) + ")");
}

SolveReport solve_resolvent_neumann(const Graph &g, double alpha, std::span<const double> rhs,
                                    double tol, std::size_t max_iter) {
    const std::size_t n = g.node_count();
    if (rhs.size() != n)
        fail(ErrorCode::DimensionMismatch, "neumann: rhs length does not match node count");
    if (!(alpha >= 0.0))
        fail(ErrorCode::InvalidParameters, "neumann: need alpha >= 0");

    SolveReport rep;
    rep.solution.assign(rhs.begin(), rhs.end());
    if (norm2(rhs) == 0.0) {
        rep.converged = true;
        return rep;
    }
    Vector term(rhs.begin(), rhs.end()), next(n);
    for (std::size_t r = 1; r <= max_iter; ++r) {
        spmv(g, term, next);
        ++rep.spmv_count;
        for (std::size_t i = 0; i < n; ++i) {
            term[i] = alpha * next[i];
            rep.solution[i] += term[i];
        }
        rep.iterations = r;
        rep.residual_norm = norm2(term);
        if (rep.residual_norm <= tol * norm2(rep.solution)) {
            rep.converged = true;
            break;
        }
    }
    return rep;
}

} // namespace katzup
