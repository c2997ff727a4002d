#include "katzup/katzup.h"

#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "katzup/error.hpp"
#include "katzup/graph.hpp"
#include "katzup/harness.hpp"
#include "katzup/katz.hpp"
#include "katzup/metrics.hpp"
#include "katzup/update.hpp"

struct katzup_graph {
    katzup::Graph g;
};

struct katzup_state {
    katzup::KatzState s;
};

namespace {

using katzup::ErrorCode;
using katzup::fail;

thread_local std::string last_error;

struct NullArgument {};

template <class P>
void need(P *p) {
    if (p == nullptr)
        throw NullArgument{};
}

template <class F>
katzup_status guarded(F &&body) noexcept {
    try {
        body();
        last_error.clear();
        return KATZUP_OK;
    } catch (const katzup::Error &e) {
        last_error = e.what();
        return static_cast<katzup_status>(e.code());
    } catch (const NullArgument &) {
        last_error = "null argument";
        return KATZUP_ERR_NULL_ARGUMENT;
    } catch (const std::bad_alloc &) {
        last_error = "out of memory";
        return KATZUP_ERR_INTERNAL;
    } catch (const std::exception &e) {
        last_error = e.what();
        return KATZUP_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown exception";
        return KATZUP_ERR_INTERNAL;
    }
}

katzup::NodeId internal_id(std::uint32_t id, std::size_t n) {
    if (id == 0 || id > n)
        fail(ErrorCode::MissingElement, "node " + std::to_string(id) + " not in graph");
    return id - 1;
}

std::vector<katzup::Edge> edge_pairs(const std::uint32_t *pairs, std::size_t count,
                                     std::size_t n) {
    std::vector<katzup::Edge> edges;
    edges.reserve(count);
    for (std::size_t k = 0; k < count; ++k)
        edges.emplace_back(internal_id(pairs[2 * k], n), internal_id(pairs[2 * k + 1], n));
    return edges;
}

katzup_graph *wrap(katzup::Graph g) { return new katzup_graph{std::move(g)}; }
katzup_state *wrap(katzup::KatzState s) { return new katzup_state{std::move(s)}; }

char *duplicate(const std::string &text) {
    char *out = static_cast<char *>(std::malloc(text.size() + 1));
    if (out == nullptr)
        throw std::bad_alloc();
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

katzup::ExperimentConfig convert(const katzup_config &c) {
    katzup::ExperimentConfig cfg;
    if (c.graph_path)
        cfg.graph_path = c.graph_path;
    if (c.gen_spec)
        cfg.gen_spec = c.gen_spec;
    if (c.out)
        cfg.out = c.out;
    cfg.policy = katzup::parse_policy(c.policy ? c.policy : "random");
    cfg.kind = katzup::parse_kind(c.kind ? c.kind : "node");
    cfg.alpha_factor = c.alpha_factor;
    cfg.tol = c.tol;
    if (c.tol_pcg > 0.0)
        cfg.tol_pcg = c.tol_pcg;
    cfg.removal_fraction = c.removal_fraction;
    cfg.lmax_node = c.lmax_node;
    cfg.lmax_edge = c.lmax_edge;
    cfg.trials = c.trials;
    cfg.seed = c.seed;
    cfg.zero_based = c.zero_based != 0;
    cfg.stale_bounds = c.stale_bounds != 0;
    cfg.recompute_on_maxlen = c.recompute_on_maxlen != 0;
    return cfg;
}

void write_file(const std::string &path, const std::string &text) {
    std::ofstream file(path, std::ios::binary);
    if (!file)
        fail(ErrorCode::Io, "cannot write '" + path + "'");
    file << text;
    if (!file)
        fail(ErrorCode::Io, "write failed for '" + path + "'");
}

katzup_status update_common(const katzup_graph *g, const katzup_state *s,
                            const katzup::RemovalSet &set, std::size_t lmax, double tol,
                            katzup_state **out, katzup_update_info *info) {
    return guarded([&] {
        katzup::UpdateResult res = katzup::update_set_removal(g->g, s->s, set, lmax, tol);
        katzup_update_info facts{res.L_used, res.converged_by == katzup::ConvergedBy::MaxLength,
                                 res.work_spmv};
        *out = wrap(katzup::apply_update(s->s, std::move(res)));
        if (info)
            *info = facts;
    });
}

} // namespace

extern "C" {

const char *katzup_status_string(katzup_status status) {
    if (status == KATZUP_ERR_NULL_ARGUMENT)
        return "null argument";
    return katzup::to_string(static_cast<ErrorCode>(status));
}

const char *katzup_last_error(void) { return last_error.c_str(); }

katzup_status katzup_graph_from_edges(size_t n, const uint32_t *pairs, size_t m,
                                      katzup_graph **out) {
    return guarded([&] {
        need(out);
        if (m > 0)
            need(pairs);
        std::vector<katzup::Edge> edges;
        edges.reserve(m);
        for (std::size_t k = 0; k < m; ++k) {
            const std::uint32_t u = pairs[2 * k], v = pairs[2 * k + 1];
            if (u == 0 || v == 0 || u > n || v > n)
                fail(ErrorCode::IndexOutOfRange, "edge endpoint outside 1.." + std::to_string(n));
            if (u == v)
                fail(ErrorCode::SelfLoop, "self-loop at node " + std::to_string(u));
            edges.emplace_back(u - 1, v - 1);
        }
        *out = wrap(katzup::Graph::from_edges(n, edges));
    });
}

katzup_status katzup_graph_load(const char *path, int zero_based, katzup_graph **out) {
    return guarded([&] {
        need(path);
        need(out);
        *out = wrap(katzup::load_graph_file(path, zero_based == 0).graph);
    });
}

katzup_status katzup_graph_parse_edge_list(const char *text, int zero_based, katzup_graph **out) {
    return guarded([&] {
        need(text);
        need(out);
        std::istringstream in(text);
        *out = wrap(katzup::load_edge_list(in, zero_based == 0).graph);
    });
}

katzup_status katzup_graph_parse_matrix_market(const char *text, katzup_graph **out) {
    return guarded([&] {
        need(text);
        need(out);
        std::istringstream in(text);
        *out = wrap(katzup::load_matrix_market(in).graph);
    });
}

katzup_status katzup_graph_erdos_renyi(size_t n, size_t m, uint64_t seed, katzup_graph **out) {
    return guarded([&] {
        need(out);
        *out = wrap(katzup::gen_erdos_renyi(n, m, seed));
    });
}

katzup_status katzup_graph_preferential(size_t n, size_t d, uint64_t seed, katzup_graph **out) {
    return guarded([&] {
        need(out);
        *out = wrap(katzup::gen_preferential_attachment(n, d, seed));
    });
}

void katzup_graph_free(katzup_graph *g) { delete g; }

size_t katzup_graph_node_count(const katzup_graph *g) { return g ? g->g.node_count() : 0; }
size_t katzup_graph_edge_count(const katzup_graph *g) { return g ? g->g.edge_count() : 0; }

katzup_status katzup_graph_degree(const katzup_graph *g, uint32_t node, size_t *out) {
    return guarded([&] {
        need(g);
        need(out);
        *out = g->g.degree(internal_id(node, g->g.node_count()));
    });
}

katzup_status katzup_graph_write_edge_list(const katzup_graph *g, const char *path,
                                           int zero_based) {
    return guarded([&] {
        need(g);
        need(path);
        std::ostringstream text;
        katzup::write_edge_list(text, g->g, zero_based == 0);
        write_file(path, text.str());
    });
}

katzup_status katzup_graph_remove_nodes(const katzup_graph *g, const uint32_t *nodes,
                                        size_t count, katzup_graph **out) {
    return guarded([&] {
        need(g);
        need(nodes);
        need(out);
        std::vector<katzup::NodeId> ids;
        for (std::size_t k = 0; k < count; ++k)
            ids.push_back(internal_id(nodes[k], g->g.node_count()));
        *out = wrap(katzup::remove_elements(g->g, katzup::RemovalSet::nodes(std::move(ids))));
    });
}

katzup_status katzup_graph_remove_edges(const katzup_graph *g, const uint32_t *pairs,
                                        size_t count, katzup_graph **out) {
    return guarded([&] {
        need(g);
        need(pairs);
        need(out);
        auto set = katzup::RemovalSet::edges(edge_pairs(pairs, count, g->g.node_count()));
        *out = wrap(katzup::remove_elements(g->g, set));
    });
}

katzup_status katzup_graph_get_stats(const katzup_graph *g, katzup_graph_stats *out) {
    return guarded([&] {
        need(g);
        need(out);
        const katzup::GraphStats st = katzup::graph_stats(g->g);
        *out = {st.diameter, st.mean_eccentricity, st.mean_degree, st.connected ? 1 : 0,
                st.component_size};
    });
}

katzup_status katzup_spectral_radius(const katzup_graph *g, double *out) {
    return guarded([&] {
        need(g);
        need(out);
        *out = katzup::spectral_radius(g->g);
    });
}

katzup_status katzup_katz(const katzup_graph *g, double alpha, const double *seed, double tol,
                          katzup_state **out) {
    return guarded([&] {
        need(g);
        need(out);
        katzup::KatzOptions opts;
        opts.tol = tol;
        const std::size_t n = g->g.node_count();
        katzup::Vector ones(n, 1.0);
        std::span<const double> rhs = seed ? std::span<const double>(seed, n) : ones;
        *out = wrap(katzup::katz(g->g, alpha, rhs, opts));
    });
}

void katzup_state_free(katzup_state *s) { delete s; }

size_t katzup_state_size(const katzup_state *s) { return s ? s->s.size() : 0; }
double katzup_state_alpha(const katzup_state *s) { return s ? s->s.alpha : 0.0; }
int katzup_state_is_exact(const katzup_state *s) { return s && s->s.provenance.exact() ? 1 : 0; }

katzup_status katzup_state_scores(const katzup_state *s, double *out, size_t len) {
    return guarded([&] {
        need(s);
        need(out);
        if (len < s->s.size())
            fail(ErrorCode::DimensionMismatch, "output buffer too small");
        std::copy(s->s.x.begin(), s->s.x.end(), out);
    });
}

double katzup_total_communicability(const katzup_state *s) {
    return s ? katzup::total_communicability(s->s) : 0.0;
}

katzup_status katzup_update_node(const katzup_graph *g, const katzup_state *s, uint32_t node,
                                 size_t lmax, double tol, katzup_state **out,
                                 katzup_update_info *info) {
    if (!g || !s || !out) {
        last_error = "null argument";
        return KATZUP_ERR_NULL_ARGUMENT;
    }
    std::optional<katzup::RemovalSet> set;
    const katzup_status st = guarded(
        [&] { set = katzup::RemovalSet::node(internal_id(node, g->g.node_count())); });
    return st != KATZUP_OK ? st : update_common(g, s, *set, lmax, tol, out, info);
}

katzup_status katzup_update_edge(const katzup_graph *g, const katzup_state *s, uint32_t u,
                                 uint32_t v, size_t lmax, double tol, katzup_state **out,
                                 katzup_update_info *info) {
    if (!g || !s || !out) {
        last_error = "null argument";
        return KATZUP_ERR_NULL_ARGUMENT;
    }
    std::optional<katzup::RemovalSet> set;
    const katzup_status st = guarded([&] {
        const std::uint32_t pair[2] = {u, v};
        set = katzup::RemovalSet::edges(edge_pairs(pair, 1, g->g.node_count()));
    });
    return st != KATZUP_OK ? st : update_common(g, s, *set, lmax, tol, out, info);
}

katzup_status katzup_tc_bound_node(const katzup_graph *g, const katzup_state *s, uint32_t node,
                                   double *bound) {
    return guarded([&] {
        need(g);
        need(s);
        need(bound);
        const katzup::NodeId w = internal_id(node, g->g.node_count());
        *bound = katzup::tc_bound_node(s->s, w, g->g.degree(w)).bound;
    });
}

katzup_status katzup_tc_bound_edge(const katzup_graph *g, const katzup_state *s, uint32_t u,
                                   uint32_t v, double *bound) {
    return guarded([&] {
        need(g);
        need(s);
        need(bound);
        const std::uint32_t pair[2] = {u, v};
        const katzup::Edge e = edge_pairs(pair, 1, g->g.node_count()).front();
        if (!g->g.has_edge(e.u, e.v))
            fail(ErrorCode::MissingElement, "edge not in graph");
        *bound = katzup::tc_bound_edge(s->s, e).bound;
    });
}

katzup_status katzup_downdate_pick(const katzup_graph *g, const katzup_state *s, uint32_t *u,
                                   uint32_t *v, int *regime_holds) {
    return guarded([&] {
        need(g);
        need(s);
        need(u);
        need(v);
        const katzup::DowndatePick pick = katzup::downdate_edge_pick(s->s, g->g);
        *u = pick.edge.u + 1;
        *v = pick.edge.v + 1;
        if (regime_holds)
            *regime_holds = pick.regime_holds ? 1 : 0;
    });
}

katzup_status katzup_intersection_similarity(const double *a, const double *b, size_t n,
                                             size_t depth, double *out) {
    return guarded([&] {
        need(a);
        need(b);
        need(out);
        const auto ra = katzup::ranking(std::span<const double>(a, n));
        const auto rb = katzup::ranking(std::span<const double>(b, n));
        *out = katzup::intersection_similarity(ra, rb, depth);
    });
}

void katzup_config_init(katzup_config *cfg) {
    if (!cfg)
        return;
    const katzup::ExperimentConfig d;
    *cfg = {};
    cfg->policy = "random";
    cfg->kind = "node";
    cfg->alpha_factor = d.alpha_factor;
    cfg->tol = d.tol;
    cfg->tol_pcg = 0.0;
    cfg->removal_fraction = d.removal_fraction;
    cfg->lmax_node = d.lmax_node;
    cfg->lmax_edge = d.lmax_edge;
    cfg->trials = d.trials;
    cfg->seed = d.seed;
}

katzup_status katzup_run_command(const char *command, const katzup_config *c, char **output,
                                 char **summary) {
    if (output)
        *output = nullptr;
    if (summary)
        *summary = nullptr;
    std::size_t violations = 0;
    const katzup_status st = guarded([&] {
        need(command);
        need(c);
        const katzup::ExperimentConfig cfg = convert(*c);
        const std::string cmd = command;
        std::ostringstream text;
        katzup::ExperimentResult result;
        bool timed = false;
        if (cmd == "compute") {
            result = katzup::cmd_compute(cfg, text);
        } else if (cmd == "gen") {
            katzup::cmd_gen(cfg, text);
        } else if (cmd == "compare" || cmd == "sequential" || cmd == "tc-bounds") {
            result = cmd == "compare"      ? katzup::cmd_compare(cfg)
                     : cmd == "sequential" ? katzup::cmd_sequential(cfg)
                                           : katzup::cmd_tc_bounds(cfg);
            katzup::write_csv(text, result.rows);
            timed = cmd != "tc-bounds";
        } else {
            fail(ErrorCode::InvalidParameters, "unknown command '" + cmd + "'");
        }

        if (cfg.out.empty()) {
            if (output)
                *output = duplicate(text.str());
        } else {
            write_file(cfg.out, text.str());
            if (timed) {
                std::ostringstream timing;
                katzup::write_timing_csv(timing, result.rows);
                write_file(cfg.out + ".timing.csv", timing.str());
            }
        }
        if (summary) {
            std::string lines;
            for (const auto &line : result.summary)
                lines += line + "\n";
            *summary = duplicate(lines);
        }
        violations = result.bound_violations;
    });
    if (st != KATZUP_OK)
        return st;
    if (violations > 0) {
        last_error = std::to_string(violations) + " bound violation(s)";
        return KATZUP_ERR_BOUND_VIOLATION;
    }
    return KATZUP_OK;
}

void katzup_string_free(char *s) { std::free(s); }

} // extern "C"
