#include <CLI11.hpp>

#include <cstdio>
#include <string>

#include "katzup/katzup.h"

namespace {

enum Exit { kOk = 0, kInternal = 1, kConfig = 2, kData = 3, kNumerical = 4 };

int exit_code(katzup_status st) {
    switch (st) {
    case KATZUP_OK:
        return kOk;
    case KATZUP_ERR_INVALID_PARAMETERS:
    case KATZUP_ERR_INVALID_DEPTH:
    case KATZUP_ERR_TOO_MANY_EDGES:
    case KATZUP_ERR_NULL_ARGUMENT:
        return kConfig;
    case KATZUP_ERR_NO_CONVERGENCE:
    case KATZUP_ERR_NOT_POSITIVE_DEFINITE:
    case KATZUP_ERR_INTEGER_OVERFLOW:
    case KATZUP_ERR_BOUND_VIOLATION:
        return kNumerical;
    case KATZUP_ERR_INTERNAL:
        return kInternal;
    default:
        return kData;
    }
}

struct Flags {
    std::string graph, gen, out, policy = "random", kind = "node";
    double alpha_factor = 0.85, tol = 1e-4, tol_pcg = 0.0, fraction = 0.01;
    std::size_t lmax_node = 30, lmax_edge = 30, trials = 30;
    std::uint64_t seed = 1;
    bool zero_based = false, stale_bounds = false, recompute_on_maxlen = false;
};

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Katz centrality after node and edge removals"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "Flat key=value file; command-line flags take precedence");

    Flags f;
    auto *source = app.add_option_group("source");
    source->add_option("--graph", f.graph, "Edge list or Matrix Market (.mtx) file");
    source->add_option("--gen", f.gen, "Generator: erdrey:n,m or pref:n,d");
    source->require_option(1);
    app.add_option("--alpha-factor", f.alpha_factor, "alpha = factor / rho(A)")->capture_default_str();
    app.add_option("--tol", f.tol, "Tolerance of the approximate methods")->capture_default_str();
    app.add_option("--tol-pcg", f.tol_pcg, "CG tolerance of the baselines (default tol/10)");
    app.add_option("--lmax-node", f.lmax_node, "Walk length cap for node removals")->capture_default_str();
    app.add_option("--lmax-edge", f.lmax_edge, "Walk length cap for edge removals")->capture_default_str();
    app.add_option("--removal-fraction", f.fraction, "Share of nodes or edges removed")->capture_default_str();
    app.add_option("--trials", f.trials, "Independent trials")->capture_default_str();
    app.add_option("--seed", f.seed, "Base seed; trial i uses seed xor i")->capture_default_str();
    app.add_option("--policy", f.policy, "random | top-katz | min-product")
        ->check(CLI::IsMember({"random", "top-katz", "min-product"}))
        ->capture_default_str();
    app.add_option("--kind", f.kind, "node | edge")
        ->check(CLI::IsMember({"node", "edge"}))
        ->capture_default_str();
    app.add_option("--out", f.out, "Output path (stdout when omitted)");
    app.add_flag("--zero-based", f.zero_based, "Node ids in files start at 0");
    app.add_flag("--stale-bounds", f.stale_bounds, "Also report bounds from the initial scores");
    app.add_flag("--recompute-on-maxlen", f.recompute_on_maxlen,
                 "Solve exactly when an update hits its length cap");

    const char *commands[][2] = {
        {"compute", "Katz scores of one graph"},
        {"compare", "Recompute baselines vs. truncated updates"},
        {"sequential", "Sequential removals with exact reference"},
        {"tc-bounds", "Total communicability drop vs. its bound"},
        {"gen", "Write a generated graph as an edge list"},
    };
    for (const auto &c : commands)
        app.add_subcommand(c[0], c[1]);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? kOk : kConfig;
    }

    katzup_config cfg;
    katzup_config_init(&cfg);
    cfg.graph_path = f.graph.empty() ? nullptr : f.graph.c_str();
    cfg.gen_spec = f.gen.empty() ? nullptr : f.gen.c_str();
    cfg.out = f.out.empty() ? nullptr : f.out.c_str();
    cfg.policy = f.policy.c_str();
    cfg.kind = f.kind.c_str();
    cfg.alpha_factor = f.alpha_factor;
    cfg.tol = f.tol;
    cfg.tol_pcg = f.tol_pcg;
    cfg.removal_fraction = f.fraction;
    cfg.lmax_node = f.lmax_node;
    cfg.lmax_edge = f.lmax_edge;
    cfg.trials = f.trials;
    cfg.seed = f.seed;
    cfg.zero_based = f.zero_based;
    cfg.stale_bounds = f.stale_bounds;
    cfg.recompute_on_maxlen = f.recompute_on_maxlen;

    char *output = nullptr;
    char *summary = nullptr;
    const std::string command = app.get_subcommands().front()->get_name();
    const katzup_status st = katzup_run_command(command.c_str(), &cfg, &output, &summary);
    if (output)
        std::fputs(output, stdout);
    if (summary)
        std::fputs(summary, stderr);
    katzup_string_free(output);
    katzup_string_free(summary);
    if (st != KATZUP_OK)
        std::fprintf(stderr, "error: %s: %s\n", katzup_status_string(st), katzup_last_error());
    return exit_code(st);
}
