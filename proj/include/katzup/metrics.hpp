#ifndef KATZUP_METRICS_HPP
#define KATZUP_METRICS_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "katzup/graph.hpp"
#include "katzup/katz.hpp"

namespace katzup {

inline constexpr double kBoundSlackTolerance = 1e-12;

struct BoundReport {
    /// TC - TC^S; NaN unless supplied.
    double actual_drop = std::numeric_limits<double>::quiet_NaN();
    double bound = 0.0;
    /// bound - actual_drop; NaN unless actual_drop is known.
    double slack = std::numeric_limits<double>::quiet_NaN();
    bool violated = false;
};

/// TC - TC^{w} <= (x_w^2 (1 - alpha^2 deg(w)) - 1) / n. Needs an all-ones seed.
BoundReport tc_bound_node(const KatzState &state, NodeId w, std::size_t deg_w,
                          std::optional<double> actual_drop = std::nullopt);

/// TC - TC^{e} <= (2 alpha x_u x_v - alpha^2 x_u^2 - alpha^2 x_v^2) / n. Needs an all-ones seed.
BoundReport tc_bound_edge(const KatzState &state, Edge e,
                          std::optional<double> actual_drop = std::nullopt);

struct DowndatePick {
    Edge edge;
    /// max_i x_i < ((2 - alpha) / alpha) min_i x_i
    bool regime_holds = false;
};

/// Edge minimizing x_u x_v, ties by (u, v). Throws EmptyGraph.
DowndatePick downdate_edge_pick(const KatzState &state, const Graph &g);

/// ||x - x_approx|| / ||x||.
double relative_error(std::span<const double> x_exact, std::span<const double> x_approx);

/// Node ids ordered by descending score, ties by ascending id.
using RankingVector = std::vector<NodeId>;

RankingVector ranking(std::span<const double> scores);

/// (1/p) sum_{i=1}^{p} |beta_{1:i} symdiff gamma_{1:i}| / (2i). Throws InvalidDepth
/// unless 1 <= p <= n.
double intersection_similarity(std::span<const NodeId> beta, std::span<const NodeId> gamma,
                               std::size_t p);

} // namespace katzup

#endif // KATZUP_METRICS_HPP
