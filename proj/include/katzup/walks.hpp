#ifndef KATZUP_WALKS_HPP
#define KATZUP_WALKS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "katzup/graph.hpp"

namespace katzup {

// Walk counting in two arithmetic modes: exact (WalkCount, overflow-checked,
// throws IntegerOverflow) and floating point (double). All formulas are
// matrix-free: every power of an adjacency matrix is applied as repeated
// sparse products on a running vector.

using WalkCount = std::int64_t;

enum class SeriesKind { Total, LostEdges, LostNodes, FPW, FAvoidingFPW };

/// vectors[r] is the per-node count vector for walks of length r, r = 0..L.
template <class T = WalkCount>
struct WalkCountSeries {
    SeriesKind kind = SeriesKind::Total;
    std::vector<std::vector<T>> vectors;
    std::optional<NodeId> target;
    std::vector<NodeId> avoid;

    std::size_t max_length() const noexcept { return vectors.empty() ? 0 : vectors.size() - 1; }
};

/// vectors[r] = A^r 1.
template <class T = WalkCount>
WalkCountSeries<T> total_walks(const Graph &g, std::size_t max_length);

/// Ground truth for lost walks: (A^r - A_S^r) 1 where A_S drops the elements of s.
template <class T = WalkCount>
std::vector<T> lost_walks_oracle(const Graph &g, const RemovalSet &s, std::size_t r);

/// First-passage walks to w: q_0 = e_w, q_{k+1} = A q_k with entry w cleared.
template <class T = WalkCount>
WalkCountSeries<T> fpw_series(const Graph &g, NodeId w, std::size_t max_length);

/// First-passage walks to w whose earlier nodes avoid `avoid` (w not in avoid):
/// q_{k+1} = A q_k with all entries in avoid U {w} cleared.
template <class T = WalkCount>
WalkCountSeries<T> favoiding_fpw_series(const Graph &g, NodeId w, std::span<const NodeId> avoid,
                                        std::size_t max_length);

/**
 * Walks of length r visiting at least one edge of `edges`:
 *   c_r = sum_{k<r} A_E^k A^{r-k} 1 - sum_{k<r} A_E^{k+1} A^{r-k-1} 1
 *       = sum_{k<r} A_E^k (A - A_E) A^{r-k-1} 1,
 * evaluated by Horner's rule over the cached vectors A^j 1. r = 0 gives zeros.
 */
template <class T = WalkCount>
std::vector<T> lost_walks_edges(const Graph &g, const RemovalSet &edges, std::size_t r);

enum class NodeLossMethod {
    /// A_in A^{r-1} 1 + sum_{k<r} A_N^k A_out A^{r-k-1} 1.
    BoundarySplit,
    /// Per w in N, F_w-avoiding first-passage walks with F_w = N \ {w},
    /// continued by free walks of the remaining length.
    FAvoidingFPW,
};

/// Walks of length r visiting at least one node of `nodes`. r = 0 gives zeros.
template <class T = WalkCount>
std::vector<T> lost_walks_nodes(const Graph &g, const RemovalSet &nodes, std::size_t r,
                                NodeLossMethod method = NodeLossMethod::BoundarySplit);

/// c_r^{w} = sum_{k=0}^{r} (A^{r-k} 1)_w q_k for a single node w.
template <class T = WalkCount>
std::vector<T> lost_walks_single_node(const Graph &g, NodeId w, std::size_t r);

/// Diagnostic: sum of the singleton loss vectors over the nodes of the set.
/// Overcounts whenever two nodes of the set are adjacent.
template <class T = WalkCount>
std::vector<T> lost_walks_nodes_naive_sum(const Graph &g, const RemovalSet &nodes, std::size_t r);

/// c_0..c_L for a node or edge set; vectors[0] is zero.
template <class T = WalkCount>
WalkCountSeries<T> lost_walks_series(const Graph &g, const RemovalSet &s, std::size_t max_length);

#define KATZUP_WALKS_EXTERN(T)                                                                     \
    extern template WalkCountSeries<T> total_walks<T>(const Graph &, std::size_t);                 \
    extern template std::vector<T> lost_walks_oracle<T>(const Graph &, const RemovalSet &,         \
                                                        std::size_t);                              \
    extern template WalkCountSeries<T> fpw_series<T>(const Graph &, NodeId, std::size_t);          \
    extern template WalkCountSeries<T> favoiding_fpw_series<T>(                                    \
        const Graph &, NodeId, std::span<const NodeId>, std::size_t);                              \
    extern template std::vector<T> lost_walks_edges<T>(const Graph &, const RemovalSet &,          \
                                                       std::size_t);                               \
    extern template std::vector<T> lost_walks_nodes<T>(const Graph &, const RemovalSet &,          \
                                                       std::size_t, NodeLossMethod);               \
    extern template std::vector<T> lost_walks_single_node<T>(const Graph &, NodeId, std::size_t);  \
    extern template std::vector<T> lost_walks_nodes_naive_sum<T>(const Graph &,                    \
                                                                 const RemovalSet &, std::size_t); \
    extern template WalkCountSeries<T> lost_walks_series<T>(const Graph &, const RemovalSet &,     \
                                                            std::size_t);

KATZUP_WALKS_EXTERN(WalkCount)
KATZUP_WALKS_EXTERN(double)
#undef KATZUP_WALKS_EXTERN

} // namespace katzup

#endif // KATZUP_WALKS_HPP
