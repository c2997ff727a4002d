#ifndef KATZUP_TEST_FIXTURES_HPP
#define KATZUP_TEST_FIXTURES_HPP

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "katzup/graph.hpp"

namespace fixtures {

using katzup::Edge;
using katzup::Graph;
using katzup::NodeId;

/// Builds from 1-based pairs.
inline Graph build(std::size_t n, std::initializer_list<std::pair<NodeId, NodeId>> pairs) {
    std::vector<Edge> edges;
    for (auto [u, v] : pairs)
        edges.emplace_back(u - 1, v - 1);
    return Graph::from_edges(n, edges);
}

/// Five-node toy network: a 4-cycle 1-2-3-4 plus hub 5 joined to all four.
inline Graph toy5() {
    return build(5, {{1, 2}, {2, 3}, {3, 4}, {4, 1}, {1, 5}, {2, 5}, {3, 5}, {4, 5}});
}

inline Graph pair2() { return build(2, {{1, 2}}); }

inline Graph complete(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            edges.emplace_back(u, v);
    return Graph::from_edges(n, edges);
}

inline Graph path(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId u = 0; u + 1 < n; ++u)
        edges.emplace_back(u, u + 1);
    return Graph::from_edges(n, edges);
}

inline Graph cycle(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u)
        edges.emplace_back(u, static_cast<NodeId>((u + 1) % n));
    return Graph::from_edges(n, edges);
}

/// Center is node 0.
inline Graph star(std::size_t leaves) {
    std::vector<Edge> edges;
    for (NodeId v = 1; v <= leaves; ++v)
        edges.emplace_back(0, v);
    return Graph::from_edges(leaves + 1, edges);
}

/// Independent edges with probability p; no connectivity guarantee.
inline Graph random_graph(std::size_t n, double p, std::mt19937_64 &rng) {
    std::bernoulli_distribution coin(p);
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            if (coin(rng))
                edges.emplace_back(u, v);
    return Graph::from_edges(n, edges);
}

/// Uniform random recursive tree.
inline Graph random_tree(std::size_t n, std::mt19937_64 &rng) {
    std::vector<Edge> edges;
    for (NodeId v = 1; v < n; ++v) {
        std::uniform_int_distribution<NodeId> parent(0, v - 1);
        edges.emplace_back(parent(rng), v);
    }
    return Graph::from_edges(n, edges);
}

inline std::vector<NodeId> random_nodes(const Graph &g, std::size_t k, std::mt19937_64 &rng) {
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(g.node_count() - 1));
    std::set<NodeId> out;
    while (out.size() < std::min(k, g.node_count()))
        out.insert(pick(rng));
    return {out.begin(), out.end()};
}

inline std::vector<Edge> random_edges(const Graph &g, std::size_t k, std::mt19937_64 &rng) {
    const auto all = g.edges();
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    std::set<Edge> out;
    while (out.size() < std::min(k, all.size()))
        out.insert(all[pick(rng)]);
    return {out.begin(), out.end()};
}

inline std::vector<NodeId> non_isolated(const Graph &g) {
    std::vector<NodeId> out;
    for (NodeId i = 0; i < g.node_count(); ++i)
        if (g.degree(i) > 0)
            out.push_back(i);
    return out;
}

} // namespace fixtures

#endif // KATZUP_TEST_FIXTURES_HPP
