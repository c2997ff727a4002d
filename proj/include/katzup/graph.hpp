#ifndef KATZUP_GRAPH_HPP
#define KATZUP_GRAPH_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

namespace katzup {

/// Internal node index, 0-based. External interfaces (files, CLI) use 1-based ids.
using NodeId = std::uint32_t;

/// Undirected edge, normalized so that u < v.
struct Edge {
    NodeId u = 0;
    NodeId v = 0;

    Edge() = default;
    Edge(NodeId a, NodeId b) : u(a < b ? a : b), v(a < b ? b : a) {}

    friend bool operator==(const Edge &, const Edge &) = default;
    friend auto operator<=>(const Edge &, const Edge &) = default;
};

/**
 * Immutable simple undirected graph stored in compressed sparse row form.
 *
 * Every undirected edge {u,v} appears twice in the row structure (u->v and
 * v->u). Neighbor lists are sorted, there are no self-loops and no duplicate
 * entries. Removing nodes keeps the node count unchanged: a removed node is
 * simply left isolated.
 */
class Graph {
public:
    Graph() = default;

    /// Builds a graph on n nodes. Duplicate edges are merged and counted in
    /// *merged when non-null. Throws SelfLoop or IndexOutOfRange.
    static Graph from_edges(std::size_t n, std::span<const Edge> edges,
                            std::size_t *merged = nullptr);

    std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const noexcept { return adjacency_.size() / 2; }

    std::size_t degree(NodeId i) const noexcept { return offsets_[i + 1] - offsets_[i]; }

    std::span<const NodeId> neighbors(NodeId i) const noexcept {
        return {adjacency_.data() + offsets_[i], degree(i)};
    }

    bool has_edge(NodeId u, NodeId v) const noexcept;
    bool contains(NodeId i) const noexcept { return i < node_count(); }

    /// All edges with u < v, in lexicographic order.
    std::vector<Edge> edges() const;

    std::span<const std::size_t> offsets() const noexcept { return offsets_; }
    std::span<const NodeId> adjacency() const noexcept { return adjacency_; }

    friend bool operator==(const Graph &, const Graph &) = default;

private:
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> adjacency_;
};

/// A nonempty, sorted, duplicate-free set of nodes or of edges.
class RemovalSet {
public:
    enum class Kind { Nodes, Edges };

    static RemovalSet nodes(std::vector<NodeId> ids);
    static RemovalSet edges(std::vector<Edge> list);
    static RemovalSet node(NodeId id) { return nodes({id}); }
    static RemovalSet edge(Edge e) { return edges({e}); }

    Kind kind() const noexcept { return kind_; }
    bool is_nodes() const noexcept { return kind_ == Kind::Nodes; }
    std::size_t size() const noexcept { return is_nodes() ? nodes_.size() : edges_.size(); }

    std::span<const NodeId> node_members() const noexcept { return nodes_; }
    std::span<const Edge> edge_members() const noexcept { return edges_; }

    /// Throws MissingElement if some member is absent from g.
    void validate_against(const Graph &g) const;

private:
    Kind kind_ = Kind::Nodes;
    std::vector<NodeId> nodes_;
    std::vector<Edge> edges_;
};

/// Edge-list ingestion result; `merged` counts duplicate edges that were dropped.
struct LoadReport {
    Graph graph;
    std::size_t merged = 0;
};

/// Whitespace-separated integer pairs, '#' comments, blank lines ignored. A comment
/// "# nodes N" makes n at least N.
/// `node_count` of 0 means infer n from the largest index.
LoadReport load_edge_list(std::istream &in, bool one_based, std::size_t node_count = 0);

/// Matrix Market coordinate, symmetric, pattern/real/integer (values ignored).
LoadReport load_matrix_market(std::istream &in);

/// Reads either format, chosen by extension (.mtx => Matrix Market).
LoadReport load_graph_file(const std::string &path, bool one_based);

void write_edge_list(std::ostream &out, const Graph &g, bool one_based);

/// Uniform simple graph with exactly m distinct edges.
Graph gen_erdos_renyi(std::size_t n, std::size_t m, std::uint64_t seed);

/// Degree-proportional attachment grown from a (d+1)-clique; each new node
/// attaches to d distinct existing nodes.
Graph gen_preferential_attachment(std::size_t n, std::size_t d, std::uint64_t seed);

Graph remove_elements(const Graph &g, const RemovalSet &s);

/// Edges of g split by a node set N: `inner` has both endpoints in N, `outer`
/// exactly one. Together with remove_elements(g, N) they partition E.
struct Boundary {
    Graph inner;
    Graph outer;
};
Boundary split_boundary(const Graph &g, const RemovalSet &node_set);

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

std::vector<std::uint32_t> bfs_distance(const Graph &g, NodeId source);

/// Connected component label per node, labels 0..k-1 in order of first node.
std::vector<std::uint32_t> connected_components(const Graph &g, std::size_t *count = nullptr);
bool is_connected(const Graph &g);

struct GraphStats {
    std::uint32_t diameter = 0;
    double mean_eccentricity = 0.0;
    double mean_degree = 0.0;
    /// False when g is disconnected; diameter and eccentricity then describe
    /// the largest component only.
    bool connected = true;
    std::size_t component_size = 0;
};

GraphStats graph_stats(const Graph &g);

} // namespace katzup

#endif // KATZUP_GRAPH_HPP
