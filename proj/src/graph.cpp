#include "katzup/graph.hpp"

#include <algorithm>
#include <string>

#include "katzup/error.hpp"

namespace katzup {

const char *to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::Ok: return "ok";
    case ErrorCode::MalformedLine: return "malformed line";
    case ErrorCode::SelfLoop: return "self-loop";
    case ErrorCode::IndexOutOfRange: return "index out of range";
    case ErrorCode::UnsupportedHeader: return "unsupported header";
    case ErrorCode::MalformedEntry: return "malformed entry";
    case ErrorCode::TooManyEdges: return "too many edges";
    case ErrorCode::InvalidParameters: return "invalid parameters";
    case ErrorCode::MissingElement: return "missing element";
    case ErrorCode::DimensionMismatch: return "dimension mismatch";
    case ErrorCode::NoConvergence: return "no convergence";
    case ErrorCode::NotPositiveDefinite: return "not positive definite";
    case ErrorCode::IsolatedNode: return "isolated node";
    case ErrorCode::EmptyGraph: return "empty graph";
    case ErrorCode::InvalidDepth: return "invalid depth";
    case ErrorCode::IntegerOverflow: return "integer overflow";
    case ErrorCode::Io: return "i/o error";
    case ErrorCode::Disconnected: return "disconnected graph";
    case ErrorCode::BoundViolation: return "bound violated";
    case ErrorCode::Internal: return "internal error";
    }
    return "unknown error";
}

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges, std::size_t *merged) {
    if (n > std::numeric_limits<NodeId>::max())
        fail(ErrorCode::IndexOutOfRange, "node count exceeds 32-bit index range");

    std::vector<Edge> sorted(edges.begin(), edges.end());
    for (const Edge &e : sorted) {
        if (e.u == e.v)
            fail(ErrorCode::SelfLoop, "self-loop at node " + std::to_string(e.u + 1));
        if (e.v >= n)
            fail(ErrorCode::IndexOutOfRange,
                 "edge endpoint " + std::to_string(e.v + 1) + " exceeds node count " +
                     std::to_string(n));
    }
    std::sort(sorted.begin(), sorted.end());
    auto last = std::unique(sorted.begin(), sorted.end());
    if (merged)
        *merged = static_cast<std::size_t>(sorted.end() - last);
    sorted.erase(last, sorted.end());

    Graph g;
    g.offsets_.assign(n + 1, 0);
    for (const Edge &e : sorted) {
        ++g.offsets_[e.u + 1];
        ++g.offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < n; ++i)
        g.offsets_[i + 1] += g.offsets_[i];

    g.adjacency_.resize(2 * sorted.size());
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    // sorted by (u,v): the u->v entries land in ascending v, but v->u entries
    // interleave, so sort each row afterwards.
    for (const Edge &e : sorted) {
        g.adjacency_[cursor[e.u]++] = e.v;
        g.adjacency_[cursor[e.v]++] = e.u;
    }
    for (std::size_t i = 0; i < n; ++i)
        std::sort(g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
                  g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]));
    return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const noexcept {
    if (!contains(u) || !contains(v))
        return false;
    auto row = neighbors(u);
    return std::binary_search(row.begin(), row.end(), v);
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < node_count(); ++u)
        for (NodeId v : neighbors(u))
            if (u < v)
                out.emplace_back(u, v);
    return out;
}

RemovalSet RemovalSet::nodes(std::vector<NodeId> ids) {
    if (ids.empty())
        fail(ErrorCode::InvalidParameters, "removal set must be nonempty");
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    RemovalSet s;
    s.kind_ = Kind::Nodes;
    s.nodes_ = std::move(ids);
    return s;
}

RemovalSet RemovalSet::edges(std::vector<Edge> list) {
    if (list.empty())
        fail(ErrorCode::InvalidParameters, "removal set must be nonempty");
    for (const Edge &e : list)
        if (e.u == e.v)
            fail(ErrorCode::SelfLoop, "edge removal set contains a self-loop");
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    RemovalSet s;
    s.kind_ = Kind::Edges;
    s.edges_ = std::move(list);
    return s;
}

void RemovalSet::validate_against(const Graph &g) const {
    if (is_nodes()) {
        for (NodeId w : nodes_)
            if (!g.contains(w))
                fail(ErrorCode::MissingElement, "node " + std::to_string(w + 1) + " not in graph");
    } else {
        for (const Edge &e : edges_)
            if (!g.has_edge(e.u, e.v))
                fail(ErrorCode::MissingElement, "edge {" + std::to_string(e.u + 1) + "," +
                                                    std::to_string(e.v + 1) + "} not in graph");
    }
}

namespace {

std::vector<char> membership(std::size_t n, std::span<const NodeId> ids) {
    std::vector<char> in(n, 0);
    for (NodeId w : ids)
        in[w] = 1;
    return in;
}

} // namespace

Graph remove_elements(const Graph &g, const RemovalSet &s) {
    s.validate_against(g);
    std::vector<Edge> kept;
    kept.reserve(g.edge_count());
    if (s.is_nodes()) {
        auto removed = membership(g.node_count(), s.node_members());
        for (const Edge &e : g.edges())
            if (!removed[e.u] && !removed[e.v])
                kept.push_back(e);
    } else {
        auto gone = s.edge_members();
        for (const Edge &e : g.edges())
            if (!std::binary_search(gone.begin(), gone.end(), e))
                kept.push_back(e);
    }
    return Graph::from_edges(g.node_count(), kept);
}

Boundary split_boundary(const Graph &g, const RemovalSet &node_set) {
    if (!node_set.is_nodes())
        fail(ErrorCode::InvalidParameters, "split_boundary needs a node set");
    node_set.validate_against(g);
    auto in_set = membership(g.node_count(), node_set.node_members());
    std::vector<Edge> inner, outer;
    for (const Edge &e : g.edges()) {
        int hits = in_set[e.u] + in_set[e.v];
        if (hits == 2)
            inner.push_back(e);
        else if (hits == 1)
            outer.push_back(e);
    }
    return {Graph::from_edges(g.node_count(), inner), Graph::from_edges(g.node_count(), outer)};
}

std::vector<std::uint32_t> bfs_distance(const Graph &g, NodeId source) {
    if (!g.contains(source))
        fail(ErrorCode::IndexOutOfRange, "bfs source out of range");
    std::vector<std::uint32_t> dist(g.node_count(), kUnreachable);
    std::vector<NodeId> frontier{source};
    dist[source] = 0;
    for (std::size_t head = 0; head < frontier.size(); ++head) {
        NodeId i = frontier[head];
        for (NodeId j : g.neighbors(i)) {
            if (dist[j] == kUnreachable) {
                dist[j] = dist[i] + 1;
                frontier.push_back(j);
            }
        }
    }
    return dist;
}

std::vector<std::uint32_t> connected_components(const Graph &g, std::size_t *count) {
    const std::size_t n = g.node_count();
    std::vector<std::uint32_t> label(n, kUnreachable);
    std::vector<NodeId> stack;
    std::uint32_t next = 0;
    for (NodeId s = 0; s < n; ++s) {
        if (label[s] != kUnreachable)
            continue;
        label[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            NodeId i = stack.back();
            stack.pop_back();
            for (NodeId j : g.neighbors(i))
                if (label[j] == kUnreachable) {
                    label[j] = next;
                    stack.push_back(j);
                }
        }
        ++next;
    }
    if (count)
        *count = next;
    return label;
}

bool is_connected(const Graph &g) {
    std::size_t k = 0;
    connected_components(g, &k);
    return k <= 1;
}

GraphStats graph_stats(const Graph &g) {
    GraphStats st;
    const std::size_t n = g.node_count();
    if (n == 0)
        return st;
    st.mean_degree = 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(n);

    std::size_t k = 0;
    auto label = connected_components(g, &k);
    std::vector<std::size_t> sizes(k, 0);
    for (auto c : label)
        ++sizes[c];
    auto largest = static_cast<std::uint32_t>(std::max_element(sizes.begin(), sizes.end()) -
                                              sizes.begin());
    st.connected = k == 1;
    st.component_size = sizes[largest];

    double ecc_sum = 0.0;
    for (NodeId i = 0; i < n; ++i) {
        if (label[i] != largest)
            continue;
        auto dist = bfs_distance(g, i);
        std::uint32_t ecc = 0;
        for (auto d : dist)
            if (d != kUnreachable)
                ecc = std::max(ecc, d);
        ecc_sum += ecc;
        st.diameter = std::max(st.diameter, ecc);
    }
    st.mean_eccentricity = ecc_sum / static_cast<double>(st.component_size);
    return st;
}

} // namespace katzup
