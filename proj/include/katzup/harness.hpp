#ifndef KATZUP_HARNESS_HPP
#define KATZUP_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "katzup/graph.hpp"

namespace katzup {

enum class SelectionPolicy { UniformRandom, TopKatz, MinProductEdge };
enum class TargetKind { Node, Edge };

SelectionPolicy parse_policy(const std::string &name);
TargetKind parse_kind(const std::string &name);
const char *to_string(SelectionPolicy p) noexcept;
const char *to_string(TargetKind k) noexcept;

struct ExperimentConfig {
    /// Exactly one of graph_path / gen_spec ("erdrey:n,m" or "pref:n,d").
    std::string graph_path;
    std::string gen_spec;
    double alpha_factor = 0.85;
    double tol = 1e-4;
    /// CG tolerance for the recompute baselines; unset means tol / 10.
    std::optional<double> tol_pcg;
    std::size_t lmax_node = 30;
    std::size_t lmax_edge = 30;
    double removal_fraction = 0.01;
    SelectionPolicy policy = SelectionPolicy::UniformRandom;
    TargetKind kind = TargetKind::Node;
    std::size_t trials = 30;
    std::uint64_t seed = 1;
    bool zero_based = false;
    bool stale_bounds = false;
    bool recompute_on_maxlen = false;
    /// Output path; empty means the caller's stream.
    std::string out;

    double pcg_tolerance() const { return tol_pcg ? *tol_pcg : tol / 10.0; }
    /// Throws InvalidParameters.
    void validate() const;
};

/// One CSV row. NaN fields and time_ns < 0 print as empty cells.
struct ExperimentRecord {
    static constexpr double kNone = std::numeric_limits<double>::quiet_NaN();

    std::size_t trial = 0;
    /// Mean over trials; prints "mean" in the trial column.
    bool mean = false;
    std::size_t step = 0;
    std::string method;
    std::string target_kind;
    std::string target_id;
    double L = kNone;
    double spmv_count = kNone;
    std::int64_t time_ns = -1;
    double rel_err = kNone;
    double isim = kNone;
    double tc_drop = kNone;
    double tc_bound = kNone;
    std::string converged_by;
};

struct ExperimentResult {
    std::vector<ExperimentRecord> rows;
    /// Human-readable summary, one item per line.
    std::vector<std::string> summary;
    std::size_t bound_violations = 0;
};

/// Graph for trial `trial`: generators are re-drawn per trial (Erdos-Renyi
/// retries until connected), file inputs are loaded as-is.
Graph experiment_graph(const ExperimentConfig &cfg, std::size_t trial);

/// Per-node scores and solver facts for one graph.
ExperimentResult cmd_compute(const ExperimentConfig &cfg, std::ostream &scores);

/// Recompute baselines vs. the truncated updates on one sampled node and edge per trial.
ExperimentResult cmd_compare(const ExperimentConfig &cfg);

/// Sequential removals driven by the truncated update, checked against exact solves.
ExperimentResult cmd_sequential(const ExperimentConfig &cfg);

/// Total communicability drop vs. its upper bound, per removal.
ExperimentResult cmd_tc_bounds(const ExperimentConfig &cfg);

/// Writes the generated graph (seeded by cfg.seed) as an edge list.
void cmd_gen(const ExperimentConfig &cfg, std::ostream &out);

/// Rows sorted by (trial, step, method) with mean rows last; time_ns left empty.
void write_csv(std::ostream &out, std::vector<ExperimentRecord> rows);

/// trial,step,method,time_ns for rows that carry a timing.
void write_timing_csv(std::ostream &out, std::vector<ExperimentRecord> rows);

/// Appends one mean row per (step, method, target_kind) over all trials.
void append_means(std::vector<ExperimentRecord> &rows);

} // namespace katzup

#endif // KATZUP_HARNESS_HPP
