#ifndef KATZUP_UPDATE_HPP
#define KATZUP_UPDATE_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "katzup/error.hpp"
#include "katzup/graph.hpp"
#include "katzup/katz.hpp"

namespace katzup {

enum class ConvergedBy { Tolerance, MaxLength };

const char *to_string(ConvergedBy c) noexcept;

struct UpdateResult {
    Vector x_new;
    /// Truncation length L, or solver iterations for recompute policies.
    std::size_t L_used = 0;
    ConvergedBy converged_by = ConvergedBy::Tolerance;
    /// Sparse matrix-vector products with the adjacency matrix.
    std::size_t work_spmv = 0;
};

/**
 * Exact Katz vector after removing a set of edges, from one resolvent solve on
 * the reduced graph:  x^E = x - alpha (I - alpha A_E)^{-1} sum_{{u,v} in E} (x_u e_v + x_v e_u).
 * `state` must be exact on g.
 */
KatzState exact_update_edges(const Graph &g, const KatzState &state, const RemovalSet &edges,
                             double tol = 1e-12, std::size_t max_iter = 10000);

/**
 * Truncated first-passage-walk update after removing node w:
 *   x^ = x - x_w sum_{r=1}^{L} alpha^r q_r,   x^_w = seed_w.
 * L grows until x_w ||alpha^L q_L|| / ||x|| <= tol or L = L_max, where ||x|| is
 * the norm of the state passed in. Performs exactly L products with A.
 * Throws IsolatedNode when w has no neighbors.
 */
UpdateResult update_node_removal(const Graph &g, const KatzState &state, NodeId w,
                                 std::size_t L_max, double tol);

/**
 * Truncated update after removing edge {u,v}:
 *   x^ = x - x_u sum_{r=0}^{L} alpha^{r+1} A_E^r e_v - x_v sum_{r=0}^{L} alpha^{r+1} A_E^r e_u,
 * with A_E applied as A minus the two rank-one corrections. Stops once the
 * newest term's norm relative to ||x|| is at most tol, or at L_max.
 * Performs exactly 2L products with A.
 */
UpdateResult update_edge_removal(const Graph &g, const KatzState &state, Edge e,
                                 std::size_t L_max, double tol);

/// Simultaneous removal of every element of s by truncating the set formulas:
/// per-edge propagation on A_E for edge sets, F_w-avoiding first-passage walks
/// (F_w = N \ {w}) for node sets. Singletons reproduce the two functions above
/// bit for bit.
UpdateResult update_set_removal(const Graph &g, const KatzState &state, const RemovalSet &s,
                                std::size_t L_max, double tol);

/// Replaces x and marks the state approximate.
KatzState apply_update(const KatzState &state, UpdateResult result);

enum class RemovalPolicy { ApproxUpdate, RecomputeCG, RecomputeNeumann };

struct DriverParams {
    std::size_t lmax_node = 30;
    std::size_t lmax_edge = 30;
    double tol = 1e-4;
    /// Recompute policies: CG relative residual / series term tolerance.
    double solver_tol = 1e-5;
    std::size_t solver_max_iter = 10000;
    /// CG starts from the previous x instead of zero.
    bool warm_start = false;
    /// ApproxUpdate: fall back to an exact CG solve when L_max is hit.
    bool recompute_on_maxlen = false;
};

/// Applies removals one at a time, carrying the (possibly approximate) state.
class SequentialDriver {
public:
    SequentialDriver(Graph g, KatzState state, RemovalPolicy policy, DriverParams params = {});

    /// Removes s from the current graph and updates the state. On error the
    /// driver is left unchanged.
    const UpdateResult &step(const RemovalSet &s);

    const Graph &graph() const noexcept { return graph_; }
    const KatzState &state() const noexcept { return state_; }
    const UpdateResult &last() const noexcept { return last_; }
    std::size_t steps_taken() const noexcept { return steps_; }

private:
    Graph graph_;
    KatzState state_;
    RemovalPolicy policy_;
    DriverParams params_;
    UpdateResult last_;
    std::size_t steps_ = 0;
};

struct DriverStep {
    RemovalSet removed;
    UpdateResult result;
    Graph graph;
};

struct SequentialTrace {
    std::vector<DriverStep> steps;
    KatzState final_state;
    /// Set when a scheduled removal failed; steps holds everything before it.
    std::optional<Error> failure;
    std::size_t failed_step = 0;
};

SequentialTrace sequential_removal_driver(const Graph &g, const KatzState &state,
                                          std::span<const RemovalSet> schedule,
                                          RemovalPolicy policy, const DriverParams &params = {});

} // namespace katzup

#endif // KATZUP_UPDATE_HPP
