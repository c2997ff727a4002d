#include "katzup/katz.hpp"

#include <algorithm>

#include "katzup/error.hpp"

namespace katzup {

double choose_alpha(const Graph &g, double factor) {
    if (!(factor > 0.0 && factor < 1.0))
        fail(ErrorCode::InvalidParameters, "alpha factor must lie in (0, 1)");
    return factor / spectral_radius(g);
}

KatzState katz(const Graph &g, double alpha, std::span<const double> seed,
               const KatzOptions &options, SolveReport *report) {
    const std::size_t n = g.node_count();
    if (seed.size() != n)
        fail(ErrorCode::DimensionMismatch, "katz: seed length does not match node count");
    if (!(alpha > 0.0))
        fail(ErrorCode::InvalidParameters, "katz: alpha must be positive");
    bool nonzero = false;
    for (double s : seed) {
        if (s < 0.0)
            fail(ErrorCode::InvalidParameters, "katz: seed must be nonnegative");
        nonzero |= s != 0.0;
    }
    if (!nonzero)
        fail(ErrorCode::InvalidParameters, "katz: seed must be nonzero");

    SolveReport rep = options.solver == Solver::CG
                          ? solve_resolvent_cg(g, alpha, seed, options.initial_guess, options.tol,
                                               options.max_iter)
                          : solve_resolvent_neumann(g, alpha, seed, options.tol, options.max_iter);
    if (!rep.converged)
        fail(ErrorCode::NoConvergence, "katz: series truncation hit its iteration cap");

    KatzState state;
    state.alpha = alpha;
    state.seed.assign(seed.begin(), seed.end());
    state.x = rep.solution;
    for (NodeId i = 0; i < n; ++i)
        if (g.degree(i) == 0)
            state.x[i] = seed[i];
    if (report)
        *report = std::move(rep);
    return state;
}

KatzState katz(const Graph &g, double alpha, const KatzOptions &options, SolveReport *report) {
    Vector ones(g.node_count(), 1.0);
    return katz(g, alpha, ones, options, report);
}

double total_communicability(const KatzState &state) {
    if (state.x.empty())
        return 0.0;
    double sum = 0.0;
    for (double v : state.x)
        sum += v;
    return sum / static_cast<double>(state.x.size());
}

} // namespace katzup
