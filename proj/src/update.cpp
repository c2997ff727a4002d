#include "katzup/update.hpp"

#include <string>

#include "katzup/linalg.hpp"

namespace katzup {

const char *to_string(ConvergedBy c) noexcept {
    return c == ConvergedBy::Tolerance ? "tolerance" : "max_length";
}

namespace {

void check_state(const Graph &g, const KatzState &state) {
    if (state.x.size() != g.node_count() || state.seed.size() != g.node_count())
        fail(ErrorCode::DimensionMismatch, "state length does not match node count");
}

void check_lmax(std::size_t L_max) {
    if (L_max < 1)
        fail(ErrorCode::InvalidParameters, "L_max must be at least 1");
}

/// out = A * e_i, gathered from the row of i.
void column(const Graph &g, NodeId i, Vector &out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (NodeId j : g.neighbors(i))
        out[j] = 1.0;
}

// Node sets: one F_w-avoiding first-passage series per w, advanced in lockstep.
UpdateResult update_nodes(const Graph &g, const KatzState &state, std::span<const NodeId> members,
                          std::size_t L_max, double tol) {
    check_state(g, state);
    check_lmax(L_max);
    const std::size_t n = g.node_count();
    const double alpha = state.alpha;
    const Vector &x = state.x;
    std::vector<char> blocked(n, 0);
    for (NodeId w : members) {
        if (!g.contains(w))
            fail(ErrorCode::MissingElement, "node " + std::to_string(w + 1) + " not in graph");
        if (g.degree(w) == 0)
            fail(ErrorCode::IsolatedNode, "node " + std::to_string(w + 1) + " is already isolated");
        blocked[w] = 1;
    }
    const double xnorm = norm2(x);

    UpdateResult res;
    res.x_new = x;
    Vector &xh = res.x_new;
    std::vector<Vector> q(members.size(), Vector(n));
    Vector aq(n);
    for (std::size_t a = 0; a < members.size(); ++a) {
        const NodeId w = members[a];
        column(g, w, aq);
        ++res.work_spmv;
        for (std::size_t i = 0; i < n; ++i)
            q[a][i] = blocked[i] ? 0.0 : alpha * aq[i];
        for (std::size_t i = 0; i < n; ++i)
            xh[i] = xh[i] - x[w] * q[a][i];
    }
    res.L_used = 1;
    while (true) {
        double size = 0.0;
        for (std::size_t a = 0; a < members.size(); ++a)
            size += x[members[a]] * norm2(q[a]);
        if (!(size / xnorm > tol)) {
            res.converged_by = ConvergedBy::Tolerance;
            break;
        }
        if (res.L_used >= L_max) {
            res.converged_by = ConvergedBy::MaxLength;
            break;
        }
        for (std::size_t a = 0; a < members.size(); ++a) {
            const NodeId w = members[a];
            spmv(g, q[a], aq);
            ++res.work_spmv;
            for (std::size_t i = 0; i < n; ++i)
                q[a][i] = blocked[i] ? 0.0 : alpha * aq[i];
            for (std::size_t i = 0; i < n; ++i)
                xh[i] = xh[i] - x[w] * q[a][i];
        }
        ++res.L_used;
    }
    for (NodeId w : members)
        xh[w] = state.seed[w];
    return res;
}

/// out = A_E * in for the removed edge set E, with A applied as a sparse product.
void apply_reduced(const Graph &g, std::span<const Edge> removed, const Vector &in, Vector &out) {
    spmv(g, in, out);
    for (const Edge &e : removed) {
        out[e.v] -= in[e.u];
        out[e.u] -= in[e.v];
    }
}

// Edge sets: per removed edge {u,v} two propagation vectors s = alpha^{r+1} A_E^r e_u
// (weighted by x_v) and t = alpha^{r+1} A_E^r e_v (weighted by x_u).
UpdateResult update_edges(const Graph &g, const KatzState &state, const RemovalSet &edges,
                          std::size_t L_max, double tol) {
    check_state(g, state);
    check_lmax(L_max);
    edges.validate_against(g);
    const std::size_t n = g.node_count();
    const double alpha = state.alpha;
    const Vector &x = state.x;
    const auto removed = edges.edge_members();
    const double xnorm = norm2(x);

    UpdateResult res;
    res.x_new = x;
    Vector &xh = res.x_new;
    for (const Edge &e : removed) {
        xh[e.u] = xh[e.u] - alpha * x[e.v];
        xh[e.v] = xh[e.v] - alpha * x[e.u];
    }

    const double alpha2 = alpha * alpha;
    std::vector<Vector> s(removed.size(), Vector(n)), t(removed.size(), Vector(n));
    Vector unit(n, 0.0), prod(n);
    auto start = [&](NodeId from, Vector &dst) {
        unit[from] = 1.0;
        column(g, from, prod);
        for (const Edge &e : removed) {
            prod[e.v] -= unit[e.u];
            prod[e.u] -= unit[e.v];
        }
        unit[from] = 0.0;
        ++res.work_spmv;
        for (std::size_t i = 0; i < n; ++i)
            dst[i] = alpha2 * prod[i];
    };
    for (std::size_t a = 0; a < removed.size(); ++a) {
        const Edge &e = removed[a];
        start(e.u, s[a]);
        start(e.v, t[a]);
        for (std::size_t i = 0; i < n; ++i)
            xh[i] = xh[i] - x[e.v] * s[a][i] - x[e.u] * t[a][i];
    }
    res.L_used = 1;

    Vector term(n);
    while (true) {
        double size = 0.0;
        for (std::size_t a = 0; a < removed.size(); ++a) {
            const Edge &e = removed[a];
            for (std::size_t i = 0; i < n; ++i)
                term[i] = x[e.v] * s[a][i] + x[e.u] * t[a][i];
            size += norm2(term);
        }
        if (!(size / xnorm > tol)) {
            res.converged_by = ConvergedBy::Tolerance;
            break;
        }
        if (res.L_used >= L_max) {
            res.converged_by = ConvergedBy::MaxLength;
            break;
        }
        for (std::size_t a = 0; a < removed.size(); ++a) {
            const Edge &e = removed[a];
            apply_reduced(g, removed, s[a], prod);
            for (std::size_t i = 0; i < n; ++i)
                s[a][i] = alpha * prod[i];
            apply_reduced(g, removed, t[a], prod);
            for (std::size_t i = 0; i < n; ++i)
                t[a][i] = alpha * prod[i];
            res.work_spmv += 2;
            for (std::size_t i = 0; i < n; ++i)
                xh[i] = xh[i] - x[e.v] * s[a][i] - x[e.u] * t[a][i];
        }
        ++res.L_used;
    }
    return res;
}

/// Exact solve on the current graph, keeping isolated nodes at their seed value.
UpdateResult recompute(const Graph &g, const KatzState &state, RemovalPolicy policy,
                       const DriverParams &params) {
    SolveReport rep;
    if (policy == RemovalPolicy::RecomputeNeumann) {
        rep = solve_resolvent_neumann(g, state.alpha, state.seed, params.solver_tol,
                                      params.solver_max_iter);
    } else {
        std::span<const double> guess;
        if (params.warm_start)
            guess = state.x;
        rep = solve_resolvent_cg(g, state.alpha, state.seed, guess, params.solver_tol,
                                 params.solver_max_iter);
    }
    UpdateResult res;
    res.x_new = std::move(rep.solution);
    for (NodeId i = 0; i < g.node_count(); ++i)
        if (g.degree(i) == 0)
            res.x_new[i] = state.seed[i];
    res.L_used = rep.iterations;
    res.converged_by = rep.converged ? ConvergedBy::Tolerance : ConvergedBy::MaxLength;
    res.work_spmv = rep.spmv_count;
    return res;
}

} // namespace

KatzState exact_update_edges(const Graph &g, const KatzState &state, const RemovalSet &edges,
                             double tol, std::size_t max_iter) {
    check_state(g, state);
    if (edges.is_nodes())
        fail(ErrorCode::InvalidParameters, "exact_update_edges needs an edge set");
    if (!state.provenance.exact())
        fail(ErrorCode::InvalidParameters, "exact_update_edges needs an exact state");
    const Graph reduced = remove_elements(g, edges);
    const Vector &x = state.x;
    Vector rhs(g.node_count(), 0.0);
    for (const Edge &e : edges.edge_members()) {
        rhs[e.v] += x[e.u];
        rhs[e.u] += x[e.v];
    }
    const SolveReport rep = solve_resolvent_cg(reduced, state.alpha, rhs, {}, tol, max_iter);
    KatzState out = state;
    for (std::size_t i = 0; i < x.size(); ++i)
        out.x[i] = x[i] - state.alpha * rep.solution[i];
    for (NodeId i = 0; i < reduced.node_count(); ++i)
        if (reduced.degree(i) == 0)
            out.x[i] = state.seed[i];
    out.provenance = {};
    return out;
}

UpdateResult update_node_removal(const Graph &g, const KatzState &state, NodeId w,
                                 std::size_t L_max, double tol) {
    const NodeId members[] = {w};
    return update_nodes(g, state, members, L_max, tol);
}

UpdateResult update_edge_removal(const Graph &g, const KatzState &state, Edge e,
                                 std::size_t L_max, double tol) {
    return update_edges(g, state, RemovalSet::edge(e), L_max, tol);
}

UpdateResult update_set_removal(const Graph &g, const KatzState &state, const RemovalSet &s,
                                std::size_t L_max, double tol) {
    if (s.is_nodes())
        return update_nodes(g, state, s.node_members(), L_max, tol);
    return update_edges(g, state, s, L_max, tol);
}

KatzState apply_update(const KatzState &state, UpdateResult result) {
    KatzState out = state;
    out.x = std::move(result.x_new);
    out.provenance.kind = Provenance::Kind::Approximate;
    out.provenance.approximate_updates = state.provenance.approximate_updates + 1;
    return out;
}

SequentialDriver::SequentialDriver(Graph g, KatzState state, RemovalPolicy policy,
                                   DriverParams params)
    : graph_(std::move(g)), state_(std::move(state)), policy_(policy), params_(params) {
    check_state(graph_, state_);
}

const UpdateResult &SequentialDriver::step(const RemovalSet &s) {
    Graph next = remove_elements(graph_, s);
    UpdateResult res;
    KatzState updated;
    if (policy_ == RemovalPolicy::ApproxUpdate) {
        const std::size_t L_max = s.is_nodes() ? params_.lmax_node : params_.lmax_edge;
        res = update_set_removal(graph_, state_, s, L_max, params_.tol);
        if (res.converged_by == ConvergedBy::MaxLength && params_.recompute_on_maxlen) {
            DriverParams exact = params_;
            exact.warm_start = true;
            KatzState guess = state_;
            guess.x = res.x_new;
            UpdateResult solved = recompute(next, guess, RemovalPolicy::RecomputeCG, exact);
            res.x_new = std::move(solved.x_new);
            res.work_spmv += solved.work_spmv;
            updated = state_;
            updated.x = res.x_new;
            updated.provenance = {};
        } else {
            updated = apply_update(state_, res);
        }
    } else {
        res = recompute(next, state_, policy_, params_);
        updated = state_;
        updated.x = res.x_new;
        updated.provenance = {};
        if (res.converged_by == ConvergedBy::MaxLength)
            updated.provenance.kind = Provenance::Kind::Approximate;
    }
    graph_ = std::move(next);
    state_ = std::move(updated);
    last_ = std::move(res);
    ++steps_;
    return last_;
}

SequentialTrace sequential_removal_driver(const Graph &g, const KatzState &state,
                                          std::span<const RemovalSet> schedule,
                                          RemovalPolicy policy, const DriverParams &params) {
    SequentialDriver driver(g, state, policy, params);
    SequentialTrace trace;
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        try {
            driver.step(schedule[k]);
        } catch (const Error &err) {
            trace.failure = err;
            trace.failed_step = k;
            break;
        }
        trace.steps.push_back({schedule[k], driver.last(), driver.graph()});
    }
    trace.final_state = driver.state();
    return trace;
}

} // namespace katzup
