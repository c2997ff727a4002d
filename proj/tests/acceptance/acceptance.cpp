#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "fixtures.hpp"
#include "katzup/error.hpp"
#include "katzup/harness.hpp"
#include "katzup/metrics.hpp"
#include "katzup/update.hpp"
#include "katzup/walks.hpp"
#include "oracles.hpp"

using namespace katzup;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char *name;
    double budget_s;
    std::function<Verdict()> run;
};

std::string num(double v) {
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

double rel(const Vector &truth, const Vector &approx) { return relative_error(truth, approx); }

KatzState solve(const Graph &g, double alpha, double tol) {
    KatzOptions opts;
    opts.tol = tol;
    opts.max_iter = 100000;
    return katz(g, alpha, opts);
}

std::vector<NodeId> pick_nodes(const Graph &g, std::size_t k, std::mt19937_64 &rng) {
    auto pool = fixtures::non_isolated(g);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(std::min(k, pool.size()));
    return pool;
}

/// Erdos-Renyi sample with n nodes and about `mean_degree` n / 2 edges.
Graph random_sparse(std::size_t n, double mean_degree, std::mt19937_64 &rng) {
    const std::size_t m = static_cast<std::size_t>(mean_degree * static_cast<double>(n) / 2.0);
    return gen_erdos_renyi(n, m, rng());
}

// ---------------------------------------------------------------------------

Verdict oracle_equivalence() {
    std::mt19937_64 rng(1001);
    std::vector<Graph> graphs{fixtures::toy5(), fixtures::pair2()};
    std::uniform_int_distribution<std::size_t> size(4, 30);
    std::uniform_real_distribution<double> density(0.08, 0.4);
    while (graphs.size() < 52) {
        const std::size_t n = size(rng);
        graphs.push_back(fixtures::random_graph(n, density(rng), rng));
    }
    constexpr std::size_t kMaxLength = 8;
    std::size_t comparisons = 0, mismatches = 0;
    auto compare = [&](const Graph &g, const RemovalSet &s) {
        for (std::size_t r = 0; r <= kMaxLength; ++r) {
            const auto oracle = lost_walks_oracle(g, s, r);
            std::vector<std::vector<WalkCount>> candidates;
            if (s.is_nodes()) {
                candidates.push_back(lost_walks_nodes(g, s, r, NodeLossMethod::BoundarySplit));
                candidates.push_back(lost_walks_nodes(g, s, r, NodeLossMethod::FAvoidingFPW));
            } else {
                candidates.push_back(lost_walks_edges(g, s, r));
            }
            // independent dense count: row sums of A^r - A_S^r
            const auto a = oracles::adjacency_int(g);
            const auto reduced =
                s.is_nodes()
                    ? oracles::without_nodes(a, {s.node_members().begin(), s.node_members().end()})
                    : oracles::without_edges(a, {s.edge_members().begin(), s.edge_members().end()});
            auto dense = oracles::power_row_sums(a, r);
            const auto kept = oracles::power_row_sums(reduced, r);
            for (std::size_t i = 0; i < dense.size(); ++i)
                dense[i] -= kept[i];
            candidates.push_back(dense);
            for (const auto &c : candidates) {
                ++comparisons;
                mismatches += c != oracle;
            }
        }
    };
    for (const Graph &g : graphs) {
        for (NodeId w = 0; w < g.node_count(); ++w)
            compare(g, RemovalSet::node(w));
        for (const Edge &e : g.edges())
            compare(g, RemovalSet::edge(e));
        std::uniform_int_distribution<std::size_t> set_size(2, 3);
        for (int rep = 0; rep < 10; ++rep) {
            compare(g, RemovalSet::nodes(fixtures::random_nodes(
                           g, std::min<std::size_t>(set_size(rng), g.node_count()), rng)));
            if (g.edge_count() > 0)
                compare(g, RemovalSet::edges(fixtures::random_edges(
                               g, std::min<std::size_t>(set_size(rng), g.edge_count()), rng)));
        }
    }
    return {mismatches == 0 && comparisons > 0,
            std::to_string(comparisons) + " vectors compared, " + std::to_string(mismatches) +
                " mismatches"};
}

Verdict fpw_enumeration() {
    std::mt19937_64 rng(2002);
    std::vector<Graph> graphs{fixtures::toy5(),     fixtures::pair2(),   fixtures::complete(5),
                              fixtures::star(6),    fixtures::path(7),   fixtures::cycle(8),
                              fixtures::complete(7)};
    std::uniform_int_distribution<std::size_t> size(2, 12);
    std::uniform_real_distribution<double> density(0.15, 0.45);
    while (graphs.size() < 60)
        graphs.push_back(fixtures::random_graph(size(rng), density(rng), rng));

    constexpr std::size_t kMaxLength = 6;
    std::size_t checked = 0, mismatches = 0;
    for (const Graph &g : graphs) {
        const oracles::WalkEnumerator walks(g, kMaxLength);
        const auto n = static_cast<NodeId>(g.node_count());
        auto check = [&](NodeId w, std::vector<NodeId> avoid) {
            const auto series = avoid.empty() ? fpw_series(g, w, kMaxLength)
                                              : favoiding_fpw_series(g, w, avoid, kMaxLength);
            std::uint32_t mask = 0;
            for (NodeId f : avoid)
                mask |= 1u << f;
            for (std::size_t k = 0; k <= kMaxLength; ++k)
                for (NodeId i = 0; i < n; ++i) {
                    ++checked;
                    mismatches += series.vectors[k][i] != walks.first_passage(i, w, k, mask);
                }
        };
        for (NodeId w = 0; w < n; ++w) {
            check(w, {});
            for (NodeId a = 0; a < n; ++a) {
                if (a == w)
                    continue;
                check(w, {a});
                for (NodeId b = a + 1; b < n; ++b)
                    if (b != w)
                        check(w, {a, b});
            }
        }
    }
    return {mismatches == 0, std::to_string(graphs.size()) + " graphs, " +
                                 std::to_string(checked) + " counts, " +
                                 std::to_string(mismatches) + " mismatches"};
}

Verdict closed_form_edges() {
    constexpr double kTolerance = 1e-10;
    std::mt19937_64 rng(3003);
    std::uniform_int_distribution<std::size_t> size(20, 500);
    std::uniform_real_distribution<double> degree(2.5, 8.0);
    std::uniform_int_distribution<std::size_t> set_size(1, 5);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const Graph g = random_sparse(size(rng), degree(rng), rng);
        const double alpha = choose_alpha(g);
        const KatzState base = solve(g, alpha, 1e-14);
        const auto set = RemovalSet::edges(
            fixtures::random_edges(g, std::min(set_size(rng), g.edge_count()), rng));
        const KatzState updated = exact_update_edges(g, base, set, 1e-14, 100000);
        const KatzState truth = solve(remove_elements(g, set), alpha, 1e-14);
        worst = std::max(worst, rel(truth.x, updated.x));
    }
    return {worst <= kTolerance, "worst relative error " + num(worst) + " (limit 1e-10)"};
}

Verdict limit_exactness() {
    constexpr double kTolerance = 1e-8;
    std::mt19937_64 rng(4004);
    std::uniform_int_distribution<std::size_t> size(20, 500);
    std::uniform_real_distribution<double> degree(2.5, 8.0);
    double worst_node = 0.0, worst_edge = 0.0;
    std::size_t longest = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const Graph g = random_sparse(size(rng), degree(rng), rng);
        const double alpha = choose_alpha(g);
        const KatzState base = solve(g, alpha, 1e-14);
        if (rep % 2 == 0) {
            const NodeId w = pick_nodes(g, 1, rng).front();
            const auto res = update_node_removal(g, base, w, 200, 1e-12);
            const KatzState truth = solve(remove_elements(g, RemovalSet::node(w)), alpha, 1e-14);
            worst_node = std::max(worst_node, rel(truth.x, res.x_new));
            longest = std::max(longest, res.L_used);
        } else {
            const Edge e = fixtures::random_edges(g, 1, rng).front();
            const auto res = update_edge_removal(g, base, e, 200, 1e-12);
            const KatzState truth = solve(remove_elements(g, RemovalSet::edge(e)), alpha, 1e-14);
            worst_edge = std::max(worst_edge, rel(truth.x, res.x_new));
            longest = std::max(longest, res.L_used);
        }
    }
    return {worst_node <= kTolerance && worst_edge <= kTolerance,
            "worst node " + num(worst_node) + ", worst edge " + num(worst_edge) +
                ", longest L " + std::to_string(longest) + " (limit 1e-8)"};
}

Verdict leaf_identity() {
    constexpr double kEquality = 1e-14;
    constexpr double kSlack = 1e-12;
    std::mt19937_64 rng(5005);
    std::uniform_int_distribution<std::size_t> size(3, 200);
    double worst_eq = 0.0, worst_gap = -std::numeric_limits<double>::infinity();
    std::size_t inequalities = 0;
    auto record_gap = [&](double lhs, double rhs) {
        ++inequalities;
        worst_gap = std::max(worst_gap, lhs - rhs);
    };
    for (int rep = 0; rep < 50; ++rep) {
        const Graph g = fixtures::random_tree(size(rng), rng);
        const double alpha = choose_alpha(g);
        const KatzState base = solve(g, alpha, 1e-14);
        std::vector<NodeId> leaves;
        for (NodeId i = 0; i < g.node_count(); ++i)
            if (g.degree(i) == 1)
                leaves.push_back(i);
        const NodeId u = leaves[rng() % leaves.size()];
        const NodeId v = g.neighbors(u).front();
        const Edge e(u, v);

        // updated leaf score, then x_u^e / x_u against 1 - alpha x_v / x_u
        const auto upd = update_edge_removal(g, base, e, 200, 1e-13);
        const double ratio = upd.x_new[u] / base.x[u];
        const double rhs = 1.0 - alpha * base.x[v] / base.x[u];
        worst_eq = std::max(worst_eq, std::abs(ratio - rhs));

        const KatzState after_edge = solve(remove_elements(g, RemovalSet::edge(e)), alpha, 1e-14);
        record_gap(after_edge.x[u] / base.x[u], rhs);
        record_gap(after_edge.x[v] / base.x[v], 1.0 - alpha * base.x[u] / base.x[v]);

        // an arbitrary edge and an arbitrary node of the same tree
        const Edge f = g.edges()[rng() % g.edge_count()];
        const KatzState after_f = solve(remove_elements(g, RemovalSet::edge(f)), alpha, 1e-14);
        record_gap(after_f.x[f.u] / base.x[f.u], 1.0 - alpha * base.x[f.v] / base.x[f.u]);
        record_gap(after_f.x[f.v] / base.x[f.v], 1.0 - alpha * base.x[f.u] / base.x[f.v]);

        const NodeId w = static_cast<NodeId>(rng() % g.node_count());
        const KatzState after_w = solve(remove_elements(g, RemovalSet::node(w)), alpha, 1e-14);
        for (NodeId i : g.neighbors(w))
            record_gap(after_w.x[i] / base.x[i], 1.0 - alpha * base.x[w] / base.x[i]);
    }
    return {worst_eq <= kEquality && worst_gap <= kSlack,
            "leaf identity deviation " + num(worst_eq) + " (limit 1e-14); " +
                std::to_string(inequalities) + " inequalities, largest excess " + num(worst_gap)};
}

std::vector<std::string> optional_datasets() {
    const char *dir = std::getenv("KATZUP_DATA_DIR");
    if (dir == nullptr)
        return {};
    std::vector<std::string> found;
    for (const char *stem : {"minnesota", "as-735", "as735"}) {
        for (const char *ext : {".mtx", ".txt", ".edges"}) {
            const fs::path p = fs::path(dir) / (std::string(stem) + ext);
            if (fs::exists(p)) {
                found.push_back(p.string());
                break;
            }
        }
    }
    return found;
}

Verdict tc_bounds_hold() {
    std::vector<ExperimentConfig> configs;
    for (const char *spec : {"erdrey:3200,16000", "pref:3200,5"}) {
        ExperimentConfig cfg;
        cfg.gen_spec = spec;
        configs.push_back(cfg);
    }
    const auto files = optional_datasets();
    for (const auto &path : files) {
        ExperimentConfig cfg;
        cfg.graph_path = path;
        configs.push_back(cfg);
    }
    std::size_t removals = 0, violations = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    for (auto cfg : configs) {
        cfg.trials = 1;
        cfg.seed = 606;
        const Graph g = experiment_graph(cfg, 0);
        for (TargetKind kind : {TargetKind::Node, TargetKind::Edge}) {
            cfg.kind = kind;
            const double base =
                static_cast<double>(kind == TargetKind::Node ? g.node_count() : g.edge_count());
            cfg.removal_fraction = 29.5 / base;
            const auto res = cmd_tc_bounds(cfg);
            violations += res.bound_violations;
            for (const auto &row : res.rows)
                if (!row.mean && row.method == "fresh") {
                    ++removals;
                    min_slack = std::min(min_slack, row.tc_bound - row.tc_drop);
                }
        }
    }
    std::string detail = std::to_string(removals) + " removals on " +
                         std::to_string(configs.size()) + " graphs, " +
                         std::to_string(violations) + " violations, min normalized slack " +
                         num(min_slack);
    if (files.size() < 2)
        detail += "; real-world files not found (set KATZUP_DATA_DIR), checked generated graphs only";
    return {violations == 0 && removals == 60 * configs.size(), detail};
}

Verdict equality_cases() {
    constexpr double kTolerance = 1e-14;
    const Graph p2 = fixtures::pair2();
    const KatzState s = solve(p2, 0.5, 1e-15);
    const double tc = total_communicability(s);
    const double node_drop =
        tc - total_communicability(solve(remove_elements(p2, RemovalSet::node(0)), 0.5, 1e-15));
    const double edge_drop =
        tc -
        total_communicability(solve(remove_elements(p2, RemovalSet::edge(Edge(0, 1))), 0.5, 1e-15));
    const auto node = tc_bound_node(s, 0, 1, node_drop);
    const auto edge = tc_bound_edge(s, Edge(0, 1), edge_drop);
    const double gap = std::max(std::abs(node.slack), std::abs(edge.slack));
    return {gap <= kTolerance, "node bound " + num(node.bound) + " vs drop " + num(node_drop) +
                                   ", edge bound " + num(edge.bound) + " vs drop " +
                                   num(edge_drop) + ", max gap " + num(gap)};
}

const ExperimentRecord *final_mean(const std::vector<ExperimentRecord> &rows,
                                   const std::string &method) {
    const ExperimentRecord *last = nullptr;
    for (const auto &row : rows)
        if (row.mean && row.method == method && (last == nullptr || row.step > last->step))
            last = &row;
    return last;
}

Verdict sequential_fidelity() {
    constexpr double kErrorLimit = 5e-2;
    constexpr double kIsimLimit = 0.1;
    ExperimentConfig cfg;
    cfg.gen_spec = "erdrey:3200,16000";
    cfg.tol = 1e-4;
    cfg.lmax_node = 30;
    cfg.removal_fraction = 0.01;
    cfg.trials = 10;
    cfg.seed = 808;
    const auto res = cmd_sequential(cfg);
    const ExperimentRecord *last = final_mean(res.rows, "alg1");
    if (last == nullptr)
        return {false, "no mean rows produced"};
    return {last->step == 32 && last->rel_err <= kErrorLimit && last->isim <= kIsimLimit,
            "after " + std::to_string(last->step) + " removals: mean relative error " +
                num(last->rel_err) + ", mean isim " + num(last->isim)};
}

Verdict iteration_ordering() {
    std::string detail;
    bool ok = true;
    for (const char *spec : {"erdrey:3200,16000", "pref:3200,5"}) {
        ExperimentConfig cfg;
        cfg.gen_spec = spec;
        cfg.tol = 1e-4;
        cfg.trials = 10;
        cfg.seed = 909;
        const auto res = cmd_compare(cfg);
        double alg1 = NAN, cold = NAN, series = NAN;
        for (const auto &row : res.rows) {
            if (!row.mean || row.target_kind != "node")
                continue;
            if (row.method == "alg1")
                alg1 = row.L;
            else if (row.method == "cg-cold")
                cold = row.L;
            else if (row.method == "neumann")
                series = row.L;
        }
        ok &= alg1 < cold && cold < series;
        if (!detail.empty())
            detail += "; ";
        detail += std::string(spec) + ": alg1 " + num(alg1) + " < cg " + num(cold) +
                  " < neumann " + num(series);
    }
    return {ok, detail};
}

double mean_alg1_seconds(std::size_t n, std::size_t m, std::uint64_t seed) {
    const Graph g = gen_erdos_renyi(n, m, seed);
    const double alpha = choose_alpha(g);
    const KatzState base = solve(g, alpha, 1e-10);
    std::mt19937_64 rng(seed);
    const auto nodes = pick_nodes(g, 10, rng);
    double total = 0.0;
    for (NodeId w : nodes) {
        double best = std::numeric_limits<double>::infinity();
        for (int repeat = 0; repeat < 5; ++repeat) {
            const auto t0 = std::chrono::steady_clock::now();
            const auto res = update_node_removal(g, base, w, 30, 1e-4);
            const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
            best = std::min(best, dt.count());
            if (res.x_new.empty())
                std::abort();
        }
        total += best;
    }
    return total / static_cast<double>(nodes.size());
}

Verdict cost_scaling() {
    constexpr double kRatioLimit = 3.0;
    const double small = mean_alg1_seconds(12800, 64000, 1010);
    const double large = mean_alg1_seconds(25600, 128000, 1011);
    const double ratio = large / small;
    return {ratio <= kRatioLimit, "mean update " + num(small * 1e3) + " ms vs " +
                                      num(large * 1e3) + " ms, ratio " + num(ratio) +
                                      " (limit 3)"};
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Verdict cli_determinism() {
    const fs::path dir = fs::temp_directory_path() / ("katzup_accept_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    std::vector<std::string> outputs;
    for (int run = 0; run < 2; ++run) {
        const fs::path out = dir / ("compare_" + std::to_string(run) + ".csv");
        const std::string cmd = std::string("\"") + KATZUP_CLI_PATH +
                                "\" compare --gen erdrey:3200,16000 --trials 3 --seed 1111 --out \"" +
                                out.string() + "\" 2>/dev/null";
        if (std::system(cmd.c_str()) != 0) {
            fs::remove_all(dir);
            return {false, "cli run " + std::to_string(run) + " failed"};
        }
        outputs.push_back(slurp(out));
    }
    fs::remove_all(dir);
    const bool same = outputs[0] == outputs[1] && !outputs[0].empty();
    return {same, std::to_string(outputs[0].size()) + " bytes, " +
                      (same ? "identical" : "different")};
}

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "lost-walk counts equal the oracle", 30, oracle_equivalence},
        {2, "first-passage counts equal walk enumeration", 60, fpw_enumeration},
        {3, "closed-form edge update equals recomputation", 60, closed_form_edges},
        {4, "truncated updates converge to recomputation", 120, limit_exactness},
        {5, "leaf identity and score-ratio inequalities", 10, leaf_identity},
        {6, "total communicability bounds hold", 120, tc_bounds_hold},
        {7, "bounds are tight on a single edge", 1, equality_cases},
        {8, "sequential removal stays accurate", 300, sequential_fidelity},
        {9, "iteration counts alg1 < cg < neumann", 180, iteration_ordering},
        {10, "update cost scales with graph size", 300, cost_scaling},
        {11, "compare output is deterministic", 60, cli_determinism},
    };
    int failures = 0;
    for (const auto &c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception &e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        const bool in_time = dt.count() <= c.budget_s;
        const bool pass = v.pass && in_time;
        failures += !pass;
        std::printf("[%s] %2d %s: %s; %.2f s of %.0f s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                    v.detail.c_str(), dt.count(), c.budget_s);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
