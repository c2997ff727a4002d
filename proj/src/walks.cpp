#include "katzup/walks.hpp"

#include <algorithm>
#include <string>
#include <type_traits>

#include "katzup/error.hpp"

namespace katzup {

namespace {

template <class T>
T add(T a, T b) {
    if constexpr (std::is_integral_v<T>) {
        T out;
        if (__builtin_add_overflow(a, b, &out))
            fail(ErrorCode::IntegerOverflow, "walk count exceeds 64-bit range");
        return out;
    } else {
        return a + b;
    }
}

template <class T>
T sub(T a, T b) {
    if constexpr (std::is_integral_v<T>) {
        T out;
        if (__builtin_sub_overflow(a, b, &out))
            fail(ErrorCode::IntegerOverflow, "walk count exceeds 64-bit range");
        return out;
    } else {
        return a - b;
    }
}

template <class T>
T mul(T a, T b) {
    if constexpr (std::is_integral_v<T>) {
        T out;
        if (__builtin_mul_overflow(a, b, &out))
            fail(ErrorCode::IntegerOverflow, "walk count exceeds 64-bit range");
        return out;
    } else {
        return a * b;
    }
}

template <class T>
using Vec = std::vector<T>;

template <class T>
Vec<T> multiply(const Graph &g, const Vec<T> &v) {
    const auto offsets = g.offsets();
    const auto adj = g.adjacency();
    Vec<T> out(g.node_count(), T{0});
    for (std::size_t i = 0; i < out.size(); ++i) {
        T acc{0};
        for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k)
            acc = add(acc, v[adj[k]]);
        out[i] = acc;
    }
    return out;
}

template <class T>
void add_into(Vec<T> &acc, const Vec<T> &v) {
    for (std::size_t i = 0; i < acc.size(); ++i)
        acc[i] = add(acc[i], v[i]);
}

/// powers[j] = A^j 1 for j = 0..max_power.
template <class T>
std::vector<Vec<T>> power_vectors(const Graph &g, std::size_t max_power) {
    std::vector<Vec<T>> powers;
    powers.reserve(max_power + 1);
    powers.emplace_back(g.node_count(), T{1});
    for (std::size_t j = 1; j <= max_power; ++j)
        powers.push_back(multiply(g, powers.back()));
    return powers;
}

/// (A - A_E) v for an edge set E, applied as the sum of its rank-2 pieces.
template <class T>
Vec<T> edge_difference(std::span<const Edge> edges, const Vec<T> &v) {
    Vec<T> out(v.size(), T{0});
    for (const Edge &e : edges) {
        out[e.u] = add(out[e.u], v[e.v]);
        out[e.v] = add(out[e.v], v[e.u]);
    }
    return out;
}

void check_node(const Graph &g, NodeId w) {
    if (!g.contains(w))
        fail(ErrorCode::MissingElement, "node " + std::to_string(w + 1) + " not in graph");
}

template <class T>
WalkCountSeries<T> first_passage(const Graph &g, NodeId w, std::span<const NodeId> avoid,
                                 std::size_t max_length, SeriesKind kind) {
    check_node(g, w);
    std::vector<char> blocked(g.node_count(), 0);
    for (NodeId f : avoid) {
        check_node(g, f);
        if (f == w)
            fail(ErrorCode::InvalidParameters, "avoided set must not contain the target");
        blocked[f] = 1;
    }
    blocked[w] = 1;

    WalkCountSeries<T> series;
    series.kind = kind;
    series.target = w;
    series.avoid.assign(avoid.begin(), avoid.end());
    std::sort(series.avoid.begin(), series.avoid.end());
    Vec<T> q(g.node_count(), T{0});
    q[w] = T{1};
    series.vectors.push_back(q);
    for (std::size_t k = 0; k < max_length; ++k) {
        q = multiply(g, q);
        for (std::size_t i = 0; i < q.size(); ++i)
            if (blocked[i])
                q[i] = T{0};
        series.vectors.push_back(q);
    }
    return series;
}

} // namespace

template <class T>
WalkCountSeries<T> total_walks(const Graph &g, std::size_t max_length) {
    WalkCountSeries<T> series;
    series.kind = SeriesKind::Total;
    series.vectors = power_vectors<T>(g, max_length);
    return series;
}

template <class T>
std::vector<T> lost_walks_oracle(const Graph &g, const RemovalSet &s, std::size_t r) {
    const Graph reduced = remove_elements(g, s);
    Vec<T> full(g.node_count(), T{1}), kept(g.node_count(), T{1});
    for (std::size_t j = 0; j < r; ++j) {
        full = multiply(g, full);
        kept = multiply(reduced, kept);
    }
    for (std::size_t i = 0; i < full.size(); ++i)
        full[i] = sub(full[i], kept[i]);
    return full;
}

template <class T>
WalkCountSeries<T> fpw_series(const Graph &g, NodeId w, std::size_t max_length) {
    return first_passage<T>(g, w, {}, max_length, SeriesKind::FPW);
}

template <class T>
WalkCountSeries<T> favoiding_fpw_series(const Graph &g, NodeId w, std::span<const NodeId> avoid,
                                        std::size_t max_length) {
    return first_passage<T>(g, w, avoid, max_length, SeriesKind::FAvoidingFPW);
}

template <class T>
std::vector<T> lost_walks_edges(const Graph &g, const RemovalSet &edges, std::size_t r) {
    if (edges.is_nodes())
        fail(ErrorCode::InvalidParameters, "lost_walks_edges needs an edge set");
    const Graph reduced = remove_elements(g, edges);
    if (r == 0)
        return Vec<T>(g.node_count(), T{0});
    const auto powers = power_vectors<T>(g, r - 1);
    Vec<T> acc = edge_difference(edges.edge_members(), powers[0]);
    for (std::size_t j = 1; j < r; ++j) {
        acc = multiply(reduced, acc);
        add_into(acc, edge_difference(edges.edge_members(), powers[j]));
    }
    return acc;
}

template <class T>
std::vector<T> lost_walks_nodes(const Graph &g, const RemovalSet &nodes, std::size_t r,
                                NodeLossMethod method) {
    if (!nodes.is_nodes())
        fail(ErrorCode::InvalidParameters, "lost_walks_nodes needs a node set");
    nodes.validate_against(g);
    const std::size_t n = g.node_count();
    if (r == 0)
        return Vec<T>(n, T{0});

    if (method == NodeLossMethod::BoundarySplit) {
        const Boundary parts = split_boundary(g, nodes);
        const Graph reduced = remove_elements(g, nodes);
        const auto powers = power_vectors<T>(g, r - 1);
        Vec<T> acc = multiply(parts.outer, powers[0]);
        for (std::size_t j = 1; j < r; ++j) {
            acc = multiply(reduced, acc);
            add_into(acc, multiply(parts.outer, powers[j]));
        }
        add_into(acc, multiply(parts.inner, powers[r - 1]));
        return acc;
    }

    const auto powers = power_vectors<T>(g, r);
    const auto members = nodes.node_members();
    Vec<T> out(n, T{0});
    std::vector<NodeId> others;
    for (NodeId w : members) {
        others.clear();
        for (NodeId f : members)
            if (f != w)
                others.push_back(f);
        const auto q = favoiding_fpw_series<T>(g, w, others, r);
        for (std::size_t k = 1; k <= r; ++k) {
            const T tail = powers[r - k][w];
            const auto &qk = q.vectors[k];
            for (std::size_t i = 0; i < n; ++i)
                if (qk[i] != T{0})
                    out[i] = add(out[i], mul(qk[i], tail));
        }
    }
    for (NodeId w : members)
        out[w] = powers[r][w];
    return out;
}

template <class T>
std::vector<T> lost_walks_single_node(const Graph &g, NodeId w, std::size_t r) {
    check_node(g, w);
    const auto powers = power_vectors<T>(g, r);
    const auto q = fpw_series<T>(g, w, r);
    Vec<T> out(g.node_count(), T{0});
    if (r == 0)
        return out;
    for (std::size_t k = 0; k <= r; ++k) {
        const T tail = powers[r - k][w];
        for (std::size_t i = 0; i < out.size(); ++i)
            if (q.vectors[k][i] != T{0})
                out[i] = add(out[i], mul(tail, q.vectors[k][i]));
    }
    return out;
}

template <class T>
std::vector<T> lost_walks_nodes_naive_sum(const Graph &g, const RemovalSet &nodes, std::size_t r) {
    if (!nodes.is_nodes())
        fail(ErrorCode::InvalidParameters, "naive node sum needs a node set");
    Vec<T> out(g.node_count(), T{0});
    for (NodeId w : nodes.node_members())
        add_into(out, lost_walks_nodes<T>(g, RemovalSet::node(w), r));
    return out;
}

template <class T>
WalkCountSeries<T> lost_walks_series(const Graph &g, const RemovalSet &s, std::size_t max_length) {
    WalkCountSeries<T> series;
    series.kind = s.is_nodes() ? SeriesKind::LostNodes : SeriesKind::LostEdges;
    series.vectors.emplace_back(g.node_count(), T{0});
    for (std::size_t r = 1; r <= max_length; ++r)
        series.vectors.push_back(s.is_nodes() ? lost_walks_nodes<T>(g, s, r)
                                              : lost_walks_edges<T>(g, s, r));
    return series;
}

#define KATZUP_WALKS_INSTANTIATE(T)                                                                \
    template WalkCountSeries<T> total_walks<T>(const Graph &, std::size_t);                        \
    template std::vector<T> lost_walks_oracle<T>(const Graph &, const RemovalSet &, std::size_t);  \
    template WalkCountSeries<T> fpw_series<T>(const Graph &, NodeId, std::size_t);                 \
    template WalkCountSeries<T> favoiding_fpw_series<T>(const Graph &, NodeId,                     \
                                                        std::span<const NodeId>, std::size_t);     \
    template std::vector<T> lost_walks_edges<T>(const Graph &, const RemovalSet &, std::size_t);   \
    template std::vector<T> lost_walks_nodes<T>(const Graph &, const RemovalSet &, std::size_t,    \
                                                NodeLossMethod);                                   \
    template std::vector<T> lost_walks_single_node<T>(const Graph &, NodeId, std::size_t);         \
    template std::vector<T> lost_walks_nodes_naive_sum<T>(const Graph &, const RemovalSet &,       \
                                                          std::size_t);                            \
    template WalkCountSeries<T> lost_walks_series<T>(const Graph &, const RemovalSet &, std::size_t);

KATZUP_WALKS_INSTANTIATE(WalkCount)
KATZUP_WALKS_INSTANTIATE(double)

} // namespace katzup
