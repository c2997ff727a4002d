#include "katzup/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "katzup/error.hpp"
#include "katzup/linalg.hpp"

namespace katzup {

namespace {

void require_ones_seed(const KatzState &state) {
    for (double s : state.seed)
        if (s != 1.0)
            fail(ErrorCode::InvalidParameters, "TC bounds need the all-ones seed");
    if (state.x.empty())
        fail(ErrorCode::EmptyGraph, "TC bounds need a nonempty state");
}

BoundReport finish(double bound, std::optional<double> actual) {
    BoundReport rep;
    rep.bound = bound;
    if (actual) {
        rep.actual_drop = *actual;
        rep.slack = bound - *actual;
        rep.violated = rep.slack < -kBoundSlackTolerance;
    }
    return rep;
}

} // namespace

BoundReport tc_bound_node(const KatzState &state, NodeId w, std::size_t deg_w,
                          std::optional<double> actual_drop) {
    require_ones_seed(state);
    if (w >= state.x.size())
        fail(ErrorCode::MissingElement, "node " + std::to_string(w + 1) + " not in graph");
    const double a = state.alpha;
    const double xw = state.x[w];
    const double n = static_cast<double>(state.x.size());
    return finish((xw * xw * (1.0 - a * a * static_cast<double>(deg_w)) - 1.0) / n, actual_drop);
}

BoundReport tc_bound_edge(const KatzState &state, Edge e, std::optional<double> actual_drop) {
    require_ones_seed(state);
    if (e.v >= state.x.size())
        fail(ErrorCode::MissingElement, "edge endpoint out of range");
    const double a = state.alpha;
    const double xu = state.x[e.u], xv = state.x[e.v];
    const double n = static_cast<double>(state.x.size());
    return finish((2.0 * a * xu * xv - a * a * xu * xu - a * a * xv * xv) / n, actual_drop);
}

DowndatePick downdate_edge_pick(const KatzState &state, const Graph &g) {
    if (g.edge_count() == 0)
        fail(ErrorCode::EmptyGraph, "graph has no edges");
    if (state.x.size() != g.node_count())
        fail(ErrorCode::DimensionMismatch, "state length does not match node count");
    const auto &x = state.x;
    DowndatePick pick;
    double best = std::numeric_limits<double>::infinity();
    for (NodeId u = 0; u < g.node_count(); ++u)
        for (NodeId v : g.neighbors(u))
            if (u < v && x[u] * x[v] < best) {
                best = x[u] * x[v];
                pick.edge = Edge(u, v);
            }
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    pick.regime_holds = *hi < (2.0 - state.alpha) / state.alpha * *lo;
    return pick;
}

double relative_error(std::span<const double> x_exact, std::span<const double> x_approx) {
    if (x_exact.size() != x_approx.size())
        fail(ErrorCode::DimensionMismatch, "relative_error: length mismatch");
    double diff = 0.0;
    for (std::size_t i = 0; i < x_exact.size(); ++i)
        diff += (x_exact[i] - x_approx[i]) * (x_exact[i] - x_approx[i]);
    return std::sqrt(diff) / norm2(x_exact);
}

RankingVector ranking(std::span<const double> scores) {
    RankingVector order(scores.size());
    std::iota(order.begin(), order.end(), NodeId{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](NodeId a, NodeId b) { return scores[a] > scores[b]; });
    return order;
}

double intersection_similarity(std::span<const NodeId> beta, std::span<const NodeId> gamma,
                               std::size_t p) {
    const std::size_t n = beta.size();
    if (gamma.size() != n)
        fail(ErrorCode::DimensionMismatch, "rankings differ in length");
    if (p < 1 || p > n)
        fail(ErrorCode::InvalidDepth, "depth must lie in [1, n]");
    NodeId top = 0;
    for (std::size_t i = 0; i < p; ++i)
        top = std::max({top, beta[i], gamma[i]});
    // seen[id]: bit 0 in beta prefix, bit 1 in gamma prefix
    std::vector<unsigned char> seen(static_cast<std::size_t>(top) + 1, 0);
    std::size_t common = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
        if (beta[i] == gamma[i]) {
            seen[beta[i]] = 3;
            ++common;
        } else {
            if ((seen[beta[i]] |= 1) == 3)
                ++common;
            if ((seen[gamma[i]] |= 2) == 3)
                ++common;
        }
        const double depth = static_cast<double>(i + 1);
        sum += (2.0 * depth - 2.0 * static_cast<double>(common)) / (2.0 * depth);
    }
    return sum / static_cast<double>(p);
}

} // namespace katzup
