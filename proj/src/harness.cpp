#include "katzup/harness.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <tuple>

#include "katzup/error.hpp"
#include "katzup/katz.hpp"
#include "katzup/linalg.hpp"
#include "katzup/metrics.hpp"
#include "katzup/update.hpp"

namespace katzup {

namespace {

constexpr double kTruthTol = 1e-10;
constexpr double kBoundTruthTol = 1e-13;
constexpr std::size_t kSolverMaxIter = 10000;
constexpr std::size_t kNeumannCap = 100;
constexpr std::size_t kConnectAttempts = 100;

enum Purpose : std::uint32_t { kGraphSeed = 1, kTargetSeed = 2 };

std::uint64_t derive_seed(std::uint64_t base, std::uint32_t purpose, std::uint32_t attempt = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                      purpose, attempt};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::mt19937_64 trial_rng(const ExperimentConfig &cfg, std::size_t trial, Purpose purpose) {
    return std::mt19937_64(derive_seed(cfg.seed ^ trial, purpose));
}

std::string format(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

std::string node_label(NodeId w) { return std::to_string(w + 1); }
std::string edge_label(Edge e) { return std::to_string(e.u + 1) + "-" + std::to_string(e.v + 1); }

std::int64_t elapsed_ns(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() -
                                                                start)
        .count();
}

std::vector<std::size_t> parse_sizes(const std::string &text) {
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        std::size_t value = 0;
        const char *first = text.data() + pos;
        const char *last = text.data() + comma;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr != last || first == last)
            fail(ErrorCode::InvalidParameters, "bad generator spec '" + text + "'");
        out.push_back(value);
        pos = comma + 1;
    }
    return out;
}

KatzState exact_state(const Graph &g, double alpha, double tol,
                      std::span<const double> guess = {}) {
    KatzOptions opts;
    opts.tol = tol;
    opts.max_iter = kSolverMaxIter;
    opts.initial_guess = guess;
    return katz(g, alpha, opts);
}

double alpha_for(const Graph &g, double factor) {
    return g.edge_count() == 0 ? factor : choose_alpha(g, factor);
}

std::vector<NodeId> active_nodes(const Graph &g) {
    std::vector<NodeId> out;
    for (NodeId i = 0; i < g.node_count(); ++i)
        if (g.degree(i) > 0)
            out.push_back(i);
    return out;
}

template <class T>
const T &pick_uniform(const std::vector<T> &items, std::mt19937_64 &rng) {
    std::uniform_int_distribution<std::size_t> dist(0, items.size() - 1);
    return items[dist(rng)];
}

/// Next removal target in the current graph, or nullopt when nothing is left.
std::optional<RemovalSet> choose_target(const Graph &g, const KatzState &exact, TargetKind kind,
                                        SelectionPolicy policy, std::mt19937_64 &rng) {
    if (kind == TargetKind::Node) {
        const auto nodes = active_nodes(g);
        if (nodes.empty())
            return std::nullopt;
        if (policy == SelectionPolicy::UniformRandom)
            return RemovalSet::node(pick_uniform(nodes, rng));
        NodeId best = nodes.front();
        for (NodeId w : nodes)
            if (exact.x[w] > exact.x[best])
                best = w;
        return RemovalSet::node(best);
    }
    if (g.edge_count() == 0)
        return std::nullopt;
    if (policy == SelectionPolicy::MinProductEdge)
        return RemovalSet::edge(downdate_edge_pick(exact, g).edge);
    const auto edges = g.edges();
    if (policy == SelectionPolicy::UniformRandom)
        return RemovalSet::edge(pick_uniform(edges, rng));
    Edge best = edges.front();
    for (const Edge &e : edges)
        if (exact.x[e.u] * exact.x[e.v] > exact.x[best.u] * exact.x[best.v])
            best = e;
    return RemovalSet::edge(best);
}

std::string target_label(const RemovalSet &s) {
    return s.is_nodes() ? node_label(s.node_members().front()) : edge_label(s.edge_members().front());
}

std::size_t removal_count(const Graph &g, const ExperimentConfig &cfg) {
    const double base = static_cast<double>(cfg.kind == TargetKind::Node ? g.node_count()
                                                                          : g.edge_count());
    return static_cast<std::size_t>(std::ceil(cfg.removal_fraction * base));
}

} // namespace

SelectionPolicy parse_policy(const std::string &name) {
    if (name == "random")
        return SelectionPolicy::UniformRandom;
    if (name == "top-katz")
        return SelectionPolicy::TopKatz;
    if (name == "min-product")
        return SelectionPolicy::MinProductEdge;
    fail(ErrorCode::InvalidParameters, "unknown policy '" + name + "'");
}

TargetKind parse_kind(const std::string &name) {
    if (name == "node")
        return TargetKind::Node;
    if (name == "edge")
        return TargetKind::Edge;
    fail(ErrorCode::InvalidParameters, "unknown kind '" + name + "'");
}

const char *to_string(SelectionPolicy p) noexcept {
    switch (p) {
    case SelectionPolicy::UniformRandom: return "random";
    case SelectionPolicy::TopKatz: return "top-katz";
    case SelectionPolicy::MinProductEdge: return "min-product";
    }
    return "?";
}

const char *to_string(TargetKind k) noexcept { return k == TargetKind::Node ? "node" : "edge"; }

void ExperimentConfig::validate() const {
    if (graph_path.empty() == gen_spec.empty())
        fail(ErrorCode::InvalidParameters, "give exactly one of a graph file or a generator spec");
    if (!(alpha_factor > 0.0 && alpha_factor < 1.0))
        fail(ErrorCode::InvalidParameters, "alpha factor must lie in (0, 1)");
    if (!(tol > 0.0) || !(pcg_tolerance() > 0.0))
        fail(ErrorCode::InvalidParameters, "tolerances must be positive");
    if (lmax_node < 1 || lmax_edge < 1)
        fail(ErrorCode::InvalidParameters, "L_max must be at least 1");
    if (!(removal_fraction > 0.0 && removal_fraction <= 1.0))
        fail(ErrorCode::InvalidParameters, "removal fraction must lie in (0, 1]");
    if (trials < 1)
        fail(ErrorCode::InvalidParameters, "trials must be at least 1");
    if (policy == SelectionPolicy::MinProductEdge && kind == TargetKind::Node)
        fail(ErrorCode::InvalidParameters, "min-product selects edges; use --kind edge");
}

Graph experiment_graph(const ExperimentConfig &cfg, std::size_t trial) {
    if (!cfg.graph_path.empty())
        return load_graph_file(cfg.graph_path, !cfg.zero_based).graph;
    const auto colon = cfg.gen_spec.find(':');
    if (colon == std::string::npos)
        fail(ErrorCode::InvalidParameters, "bad generator spec '" + cfg.gen_spec + "'");
    const std::string family = cfg.gen_spec.substr(0, colon);
    const auto args = parse_sizes(cfg.gen_spec.substr(colon + 1));
    if (args.size() != 2)
        fail(ErrorCode::InvalidParameters, "generator spec needs two integers");
    const std::uint64_t base = cfg.seed ^ trial;
    if (family == "pref")
        return gen_preferential_attachment(args[0], args[1], derive_seed(base, kGraphSeed));
    if (family != "erdrey")
        fail(ErrorCode::InvalidParameters, "unknown generator '" + family + "'");
    for (std::uint32_t attempt = 0; attempt < kConnectAttempts; ++attempt) {
        Graph g = gen_erdos_renyi(args[0], args[1], derive_seed(base, kGraphSeed, attempt));
        if (is_connected(g))
            return g;
    }
    fail(ErrorCode::Disconnected, "no connected Erdos-Renyi sample in " +
                                      std::to_string(kConnectAttempts) + " attempts");
}

ExperimentResult cmd_compute(const ExperimentConfig &cfg, std::ostream &scores) {
    cfg.validate();
    const Graph g = experiment_graph(cfg, 0);
    const double rho = g.edge_count() == 0 ? 0.0 : spectral_radius(g);
    const double alpha = g.edge_count() == 0 ? cfg.alpha_factor : cfg.alpha_factor / rho;
    SolveReport rep;
    KatzOptions opts;
    opts.tol = kTruthTol;
    opts.max_iter = kSolverMaxIter;
    const KatzState state = katz(g, alpha, opts, &rep);
    const double kappa = g.edge_count() == 0 ? 1.0 : resolvent_condition_estimate(g, alpha, rho);
    const double tc = total_communicability(state);

    scores << "# n=" << g.node_count() << " m=" << g.edge_count() << " rho=" << format(rho)
           << " alpha=" << format(alpha) << " tc=" << format(tc) << " iterations=" << rep.iterations
           << " kappa=" << format(kappa) << "\n";
    scores << "node,score\n";
    for (NodeId i = 0; i < g.node_count(); ++i)
        scores << (cfg.zero_based ? i : i + 1) << "," << format(state.x[i]) << "\n";

    ExperimentResult out;
    out.summary = {"nodes " + std::to_string(g.node_count()),
                   "edges " + std::to_string(g.edge_count()),
                   "rho " + format(rho),
                   "alpha " + format(alpha),
                   "iterations " + std::to_string(rep.iterations),
                   "kappa " + format(kappa),
                   "tc " + format(tc)};
    return out;
}

ExperimentResult cmd_compare(const ExperimentConfig &cfg) {
    cfg.validate();
    ExperimentResult out;
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
        const Graph g = experiment_graph(cfg, trial);
        const double alpha = alpha_for(g, cfg.alpha_factor);
        const KatzState state = exact_state(g, alpha, kTruthTol);
        auto rng = trial_rng(cfg, trial, kTargetSeed);

        for (TargetKind kind : {TargetKind::Node, TargetKind::Edge}) {
            const auto target = choose_target(g, state, kind, SelectionPolicy::UniformRandom, rng);
            if (!target)
                continue;
            const Graph reduced = remove_elements(g, *target);
            const KatzState truth = exact_state(reduced, alpha, kTruthTol);
            auto record = [&](const std::string &method, std::size_t L, std::size_t spmv,
                              std::int64_t ns, Vector x, ConvergedBy by) {
                ExperimentRecord row;
                row.trial = trial;
                row.method = method;
                row.target_kind = to_string(kind);
                row.target_id = target_label(*target);
                row.L = static_cast<double>(L);
                row.spmv_count = static_cast<double>(spmv);
                row.time_ns = ns;
                row.rel_err = relative_error(truth.x, x);
                row.converged_by = to_string(by);
                out.rows.push_back(std::move(row));
            };

            auto t0 = std::chrono::steady_clock::now();
            SolveReport cold = solve_resolvent_cg(reduced, alpha, state.seed, {},
                                                  cfg.pcg_tolerance(), kSolverMaxIter);
            record("cg-cold", cold.iterations, cold.spmv_count, elapsed_ns(t0),
                   std::move(cold.solution), ConvergedBy::Tolerance);

            t0 = std::chrono::steady_clock::now();
            SolveReport warm = solve_resolvent_cg(reduced, alpha, state.seed, state.x,
                                                  cfg.pcg_tolerance(), kSolverMaxIter);
            record("cg-warm", warm.iterations, warm.spmv_count, elapsed_ns(t0),
                   std::move(warm.solution), ConvergedBy::Tolerance);

            t0 = std::chrono::steady_clock::now();
            SolveReport series = solve_resolvent_neumann(reduced, alpha, state.seed, cfg.tol,
                                                         kNeumannCap);
            record("neumann", series.iterations, series.spmv_count, elapsed_ns(t0),
                   std::move(series.solution),
                   series.converged ? ConvergedBy::Tolerance : ConvergedBy::MaxLength);

            const std::size_t L_max = kind == TargetKind::Node ? cfg.lmax_node : cfg.lmax_edge;
            t0 = std::chrono::steady_clock::now();
            UpdateResult upd = update_set_removal(g, state, *target, L_max, cfg.tol);
            const std::int64_t ns = elapsed_ns(t0);
            record(kind == TargetKind::Node ? "alg1" : "alg2", upd.L_used, upd.work_spmv, ns,
                   std::move(upd.x_new), upd.converged_by);
        }
    }
    append_means(out.rows);
    for (const auto &row : out.rows)
        if (row.mean)
            out.summary.push_back(row.target_kind + " " + row.method + " mean L " + format(row.L) +
                                  " rel_err " + format(row.rel_err));
    return out;
}

ExperimentResult cmd_sequential(const ExperimentConfig &cfg) {
    cfg.validate();
    ExperimentResult out;
    std::size_t maxlen_hits = 0;
    std::size_t short_trials = 0;
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
        const Graph g0 = experiment_graph(cfg, trial);
        const double alpha = alpha_for(g0, cfg.alpha_factor);
        KatzState exact = exact_state(g0, alpha, kTruthTol);
        DriverParams params;
        params.lmax_node = cfg.lmax_node;
        params.lmax_edge = cfg.lmax_edge;
        params.tol = cfg.tol;
        params.solver_tol = cfg.pcg_tolerance();
        params.recompute_on_maxlen = cfg.recompute_on_maxlen;
        SequentialDriver driver(g0, exact, RemovalPolicy::ApproxUpdate, params);
        auto rng = trial_rng(cfg, trial, kTargetSeed);
        const std::size_t steps = removal_count(g0, cfg);
        const std::size_t depth =
            std::clamp<std::size_t>((g0.node_count() + 99) / 100, 1, g0.node_count());

        for (std::size_t step = 1; step <= steps; ++step) {
            const auto target = choose_target(driver.graph(), exact, cfg.kind, cfg.policy, rng);
            if (!target) {
                ++short_trials;
                break;
            }
            auto t0 = std::chrono::steady_clock::now();
            const UpdateResult &upd = driver.step(*target);
            const std::int64_t ns = elapsed_ns(t0);
            if (upd.converged_by == ConvergedBy::MaxLength)
                ++maxlen_hits;

            t0 = std::chrono::steady_clock::now();
            SolveReport rep;
            KatzOptions opts;
            opts.tol = kTruthTol;
            opts.max_iter = kSolverMaxIter;
            opts.initial_guess = exact.x;
            KatzState next = katz(driver.graph(), alpha, opts, &rep);
            const std::int64_t exact_ns = elapsed_ns(t0);
            exact = std::move(next);

            ExperimentRecord row;
            row.trial = trial;
            row.step = step;
            row.method = cfg.kind == TargetKind::Node ? "alg1" : "alg2";
            row.target_kind = to_string(cfg.kind);
            row.target_id = target_label(*target);
            row.L = static_cast<double>(upd.L_used);
            row.spmv_count = static_cast<double>(upd.work_spmv);
            row.time_ns = ns;
            row.rel_err = relative_error(exact.x, driver.state().x);
            row.isim = intersection_similarity(ranking(exact.x), ranking(driver.state().x), depth);
            row.converged_by = to_string(upd.converged_by);
            out.rows.push_back(row);

            ExperimentRecord ref;
            ref.trial = trial;
            ref.step = step;
            ref.method = "exact";
            ref.target_kind = row.target_kind;
            ref.target_id = row.target_id;
            ref.L = static_cast<double>(rep.iterations);
            ref.spmv_count = static_cast<double>(rep.spmv_count);
            ref.time_ns = exact_ns;
            ref.converged_by = to_string(ConvergedBy::Tolerance);
            out.rows.push_back(std::move(ref));
        }
    }
    append_means(out.rows);
    double final_err = 0.0, final_isim = 0.0;
    std::size_t last_step = 0;
    for (const auto &row : out.rows)
        if (row.mean && row.method != "exact" && row.step >= last_step) {
            last_step = row.step;
            final_err = row.rel_err;
            final_isim = row.isim;
        }
    out.summary.push_back("steps " + std::to_string(last_step));
    out.summary.push_back("final mean rel_err " + format(final_err));
    out.summary.push_back("final mean isim " + format(final_isim));
    out.summary.push_back("max_length hits " + std::to_string(maxlen_hits));
    if (short_trials > 0)
        out.summary.push_back("trials that ran out of removable elements " +
                              std::to_string(short_trials));
    return out;
}

ExperimentResult cmd_tc_bounds(const ExperimentConfig &cfg) {
    cfg.validate();
    ExperimentResult out;
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
        Graph g = experiment_graph(cfg, trial);
        const double alpha = alpha_for(g, cfg.alpha_factor);
        KatzState exact = exact_state(g, alpha, kBoundTruthTol);
        const KatzState initial = exact;
        const double tc0 = total_communicability(initial);
        auto rng = trial_rng(cfg, trial, kTargetSeed);
        const std::size_t steps = removal_count(g, cfg);

        for (std::size_t step = 1; step <= steps; ++step) {
            const auto target = choose_target(g, exact, cfg.kind, cfg.policy, rng);
            if (!target)
                break;
            Graph next = remove_elements(g, *target);
            KatzState after = exact_state(next, alpha, kBoundTruthTol, exact.x);
            const double drop = total_communicability(exact) - total_communicability(after);

            auto bound_from = [&](const KatzState &source) {
                if (target->is_nodes()) {
                    const NodeId w = target->node_members().front();
                    return tc_bound_node(source, w, g.degree(w), drop);
                }
                return tc_bound_edge(source, target->edge_members().front(), drop);
            };
            auto emit = [&](const char *method, const BoundReport &b) {
                ExperimentRecord row;
                row.trial = trial;
                row.step = step;
                row.method = method;
                row.target_kind = to_string(cfg.kind);
                row.target_id = target_label(*target);
                row.tc_drop = b.actual_drop / tc0;
                row.tc_bound = b.bound / tc0;
                out.rows.push_back(std::move(row));
            };
            const BoundReport fresh = bound_from(exact);
            if (fresh.violated)
                ++out.bound_violations;
            emit("fresh", fresh);
            if (cfg.stale_bounds)
                emit("stale", bound_from(initial));

            g = std::move(next);
            exact = std::move(after);
        }
    }
    append_means(out.rows);
    out.summary.push_back("bound violations " + std::to_string(out.bound_violations));
    return out;
}

void cmd_gen(const ExperimentConfig &cfg, std::ostream &out) {
    if (cfg.gen_spec.empty())
        fail(ErrorCode::InvalidParameters, "gen needs a generator spec");
    write_edge_list(out, experiment_graph(cfg, 0), !cfg.zero_based);
}

void append_means(std::vector<ExperimentRecord> &rows) {
    struct Acc {
        ExperimentRecord row;
        std::array<double, 7> sum{};
        std::array<std::size_t, 7> count{};
    };
    std::map<std::tuple<std::size_t, std::string, std::string>, Acc> groups;
    for (const auto &row : rows) {
        if (row.mean)
            continue;
        auto &acc = groups[{row.step, row.method, row.target_kind}];
        acc.row.step = row.step;
        acc.row.method = row.method;
        acc.row.target_kind = row.target_kind;
        const double fields[7] = {row.L,    row.spmv_count, row.rel_err, row.isim,
                                  row.tc_drop, row.tc_bound, 0.0};
        for (std::size_t k = 0; k < 6; ++k)
            if (!std::isnan(fields[k])) {
                acc.sum[k] += fields[k];
                ++acc.count[k];
            }
    }
    auto mean = [](const Acc &a, std::size_t k) {
        return a.count[k] == 0 ? ExperimentRecord::kNone
                               : a.sum[k] / static_cast<double>(a.count[k]);
    };
    for (auto &[key, acc] : groups) {
        ExperimentRecord row = acc.row;
        row.mean = true;
        row.L = mean(acc, 0);
        row.spmv_count = mean(acc, 1);
        row.rel_err = mean(acc, 2);
        row.isim = mean(acc, 3);
        row.tc_drop = mean(acc, 4);
        row.tc_bound = mean(acc, 5);
        rows.push_back(std::move(row));
    }
}

namespace {

void sort_rows(std::vector<ExperimentRecord> &rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const auto &a, const auto &b) {
        return std::tie(a.mean, a.trial, a.step, a.method, a.target_kind) <
               std::tie(b.mean, b.trial, b.step, b.method, b.target_kind);
    });
}

std::string cell(double v) { return std::isnan(v) ? std::string() : format(v); }

std::string trial_cell(const ExperimentRecord &row) {
    return row.mean ? std::string("mean") : std::to_string(row.trial);
}

} // namespace

void write_csv(std::ostream &out, std::vector<ExperimentRecord> rows) {
    sort_rows(rows);
    out << "trial,step,method,target_kind,target_id,L,spmv_count,time_ns,rel_err,isim,tc_drop,"
           "tc_bound,converged_by\n";
    for (const auto &r : rows)
        out << trial_cell(r) << ',' << r.step << ',' << r.method << ',' << r.target_kind << ','
            << r.target_id << ',' << cell(r.L) << ',' << cell(r.spmv_count) << ",," << cell(r.rel_err)
            << ',' << cell(r.isim) << ',' << cell(r.tc_drop) << ',' << cell(r.tc_bound) << ','
            << r.converged_by << '\n';
}

void write_timing_csv(std::ostream &out, std::vector<ExperimentRecord> rows) {
    sort_rows(rows);
    out << "trial,step,method,target_kind,time_ns\n";
    for (const auto &r : rows)
        if (r.time_ns >= 0)
            out << trial_cell(r) << ',' << r.step << ',' << r.method << ',' << r.target_kind << ','
                << r.time_ns << '\n';
}

} // namespace katzup
