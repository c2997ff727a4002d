#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include "katzup/error.hpp"
#include "katzup/graph.hpp"

namespace katzup {

namespace {

// Pairs {u,v}, u<v, enumerated column by column: index k = v(v-1)/2 + u.
Edge pair_from_index(std::uint64_t k) {
    auto v = static_cast<std::uint64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(k))) / 2.0);
    while (v * (v - 1) / 2 > k)
        --v;
    while ((v + 1) * v / 2 <= k)
        ++v;
    return Edge(static_cast<NodeId>(k - v * (v - 1) / 2), static_cast<NodeId>(v));
}

} // namespace

Graph gen_erdos_renyi(std::size_t n, std::size_t m, std::uint64_t seed) {
    const std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n > 0 ? n - 1 : 0) / 2;
    if (m > pairs)
        fail(ErrorCode::TooManyEdges, std::to_string(m) + " edges requested but only " +
                                          std::to_string(pairs) + " node pairs exist");
    std::mt19937_64 rng(seed);
    // Floyd's sampling: m distinct indices from [0, pairs), uniform over subsets.
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(m * 2);
    std::vector<Edge> edges;
    edges.reserve(m);
    for (std::uint64_t j = pairs - m; j < pairs; ++j) {
        std::uniform_int_distribution<std::uint64_t> pick(0, j);
        std::uint64_t t = pick(rng);
        if (!chosen.insert(t).second) {
            chosen.insert(j);
            t = j;
        }
        edges.push_back(pair_from_index(t));
    }
    return Graph::from_edges(n, edges);
}

Graph gen_preferential_attachment(std::size_t n, std::size_t d, std::uint64_t seed) {
    if (d < 1 || n <= d)
        fail(ErrorCode::InvalidParameters, "preferential attachment needs d >= 1 and n > d");
    std::mt19937_64 rng(seed);
    std::vector<Edge> edges;
    edges.reserve(d * (d + 1) / 2 + (n - d - 1) * d);
    // Every edge endpoint appears once here, so a uniform draw is degree-proportional.
    std::vector<NodeId> endpoints;
    endpoints.reserve(2 * edges.capacity());
    for (NodeId u = 0; u <= d; ++u)
        for (NodeId v = u + 1; v <= d; ++v) {
            edges.emplace_back(u, v);
            endpoints.push_back(u);
            endpoints.push_back(v);
        }

    std::vector<NodeId> targets;
    for (auto fresh = static_cast<NodeId>(d + 1); fresh < n; ++fresh) {
        targets.clear();
        std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
        while (targets.size() < d) {
            NodeId t = endpoints[pick(rng)];
            if (std::find(targets.begin(), targets.end(), t) == targets.end())
                targets.push_back(t);
        }
        for (NodeId t : targets) {
            edges.emplace_back(t, fresh);
            endpoints.push_back(t);
            endpoints.push_back(fresh);
        }
    }
    return Graph::from_edges(n, edges);
}

} // namespace katzup
