#include <doctest.h>

#include "fixtures.hpp"
#include "katzup/error.hpp"
#include "katzup/metrics.hpp"
#include "katzup/update.hpp"
#include "oracles.hpp"

using namespace katzup;

namespace {

KatzState exact(const Graph &g, double alpha) {
    KatzOptions opts;
    opts.tol = 1e-14;
    return katz(g, alpha, opts);
}

KatzState recompute(const Graph &g, const RemovalSet &s, double alpha) {
    return exact(remove_elements(g, s), alpha);
}

ErrorCode code_of(auto &&fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.code();
    }
    return ErrorCode::Ok;
}

} // namespace

TEST_CASE("exact edge update: pair") {
    const Graph p2 = fixtures::pair2();
    const KatzState s = exact(p2, 0.5);
    const KatzState after = exact_update_edges(p2, s, RemovalSet::edge(Edge(0, 1)));
    CHECK(after.x[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(after.x[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(after.provenance.exact());
}

TEST_CASE("exact edge update: removing an absent edge fails") {
    const Graph p2 = fixtures::pair2();
    const KatzState s = exact(p2, 0.5);
    const auto e = RemovalSet::edge(Edge(0, 1));
    const Graph reduced = remove_elements(p2, e);
    const KatzState after = exact_update_edges(p2, s, e);
    CHECK(code_of([&] { exact_update_edges(reduced, after, e); }) == ErrorCode::MissingElement);
}

TEST_CASE("exact edge update: toy network") {
    const Graph t5 = fixtures::toy5();
    const double alpha = choose_alpha(t5);
    const auto e = RemovalSet::edge(Edge(0, 1));
    const KatzState after = exact_update_edges(t5, exact(t5, alpha), e, 1e-14);
    CHECK(relative_error(recompute(t5, e, alpha).x, after.x) < 1e-10);
    const KatzState stale = apply_update(exact(t5, alpha), UpdateResult{Vector(5, 1.0)});
    CHECK(code_of([&] { exact_update_edges(t5, stale, e); }) == ErrorCode::InvalidParameters);
}

TEST_CASE("node update: pair") {
    const Graph p2 = fixtures::pair2();
    const auto res = update_node_removal(p2, exact(p2, 0.5), 0, 50, 1e-12);
    CHECK(res.x_new[0] == 1.0);
    CHECK(res.x_new[1] == doctest::Approx(1.0).epsilon(1e-12));
    // the second term is already zero
    CHECK(res.L_used == 2);
    CHECK(res.work_spmv == 2);
    CHECK(res.converged_by == ConvergedBy::Tolerance);
}

TEST_CASE("node update: star center leaves every leaf at one") {
    const Graph s = fixtures::star(6);
    const double alpha = choose_alpha(s);
    const auto res = update_node_removal(s, exact(s, alpha), 0, 50, 1e-12);
    for (double v : res.x_new)
        CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("node update: toy hub") {
    const Graph t5 = fixtures::toy5();
    const double alpha = choose_alpha(t5);
    const auto res = update_node_removal(t5, exact(t5, alpha), 4, 50, 1e-8);
    CHECK(relative_error(recompute(t5, RemovalSet::node(4), alpha).x, res.x_new) < 1e-6);
    CHECK(res.work_spmv == res.L_used);
    CHECK(res.L_used <= 50);
}

TEST_CASE("node update: errors and caps") {
    const Graph t5 = fixtures::toy5();
    const KatzState s = exact(t5, choose_alpha(t5));
    CHECK(code_of([&] { update_node_removal(t5, s, 9, 10, 1e-8); }) == ErrorCode::MissingElement);
    const Graph reduced = remove_elements(t5, RemovalSet::node(4));
    const auto after = apply_update(s, update_node_removal(t5, s, 4, 50, 1e-8));
    CHECK(code_of([&] { update_node_removal(reduced, after, 4, 10, 1e-8); }) ==
          ErrorCode::IsolatedNode);
    CHECK(code_of([&] { update_node_removal(t5, s, 4, 0, 1e-8); }) == ErrorCode::InvalidParameters);
    const auto capped = update_node_removal(t5, s, 4, 2, 1e-15);
    CHECK(capped.converged_by == ConvergedBy::MaxLength);
    CHECK(capped.L_used == 2);
    CHECK(capped.work_spmv == 2);
}

TEST_CASE("edge update: pair truncates after the first term") {
    const Graph p2 = fixtures::pair2();
    for (double tol : {1e-1, 1e-6, 1e-14}) {
        const auto res = update_edge_removal(p2, exact(p2, 0.5), Edge(0, 1), 50, tol);
        CHECK(res.x_new[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(res.x_new[1] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(res.L_used == 1);
        CHECK(res.work_spmv == 2);
    }
}

TEST_CASE("edge update: pendant edge of a path") {
    const Graph p3 = fixtures::path(3);
    const double alpha = choose_alpha(p3);
    const auto e = Edge(1, 2);
    const auto res = update_edge_removal(p3, exact(p3, alpha), e, 100, 1e-10);
    CHECK(relative_error(recompute(p3, RemovalSet::edge(e), alpha).x, res.x_new) < 1e-9);
}

TEST_CASE("edge update: toy network") {
    const Graph t5 = fixtures::toy5();
    const double alpha = choose_alpha(t5);
    const auto e = Edge(2, 4);
    const auto res = update_edge_removal(t5, exact(t5, alpha), e, 100, 1e-8);
    CHECK(relative_error(recompute(t5, RemovalSet::edge(e), alpha).x, res.x_new) < 1e-6);
    CHECK(res.work_spmv == 2 * res.L_used);
    CHECK(code_of([&] { update_edge_removal(t5, exact(t5, alpha), Edge(0, 2), 10, 1e-8); }) ==
          ErrorCode::MissingElement);
}

TEST_CASE("updates never increase scores") {
    std::mt19937_64 rng(14);
    for (int rep = 0; rep < 10; ++rep) {
        const Graph g = fixtures::random_graph(60, 0.08, rng);
        const auto active = fixtures::non_isolated(g);
        if (active.empty())
            continue;
        const double alpha = choose_alpha(g);
        const KatzState s = exact(g, alpha);
        const auto node = update_node_removal(g, s, active[rep % active.size()], 30, 1e-4);
        const auto edge =
            update_edge_removal(g, s, fixtures::random_edges(g, 1, rng).front(), 30, 1e-4);
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(node.x_new[i] <= s.x[i] + 1e-12);
            CHECK(edge.x_new[i] <= s.x[i] + 1e-12);
        }
    }
}

TEST_CASE("set update: singletons reproduce the single-element updates bit for bit") {
    const Graph t5 = fixtures::toy5();
    const KatzState s = exact(t5, choose_alpha(t5));
    CHECK(update_set_removal(t5, s, RemovalSet::node(2), 30, 1e-6).x_new ==
          update_node_removal(t5, s, 2, 30, 1e-6).x_new);
    CHECK(update_set_removal(t5, s, RemovalSet::edge(Edge(1, 4)), 30, 1e-6).x_new ==
          update_edge_removal(t5, s, Edge(1, 4), 30, 1e-6).x_new);
}

TEST_CASE("set update: adjacent node pair needs the joint formula") {
    const Graph t5 = fixtures::toy5();
    const double alpha = choose_alpha(t5);
    const KatzState s = exact(t5, alpha);
    const auto set = RemovalSet::nodes({0, 1});
    const auto truth = recompute(t5, set, alpha);
    const auto joint = update_set_removal(t5, s, set, 200, 1e-12);
    CHECK(relative_error(truth.x, joint.x_new) < 1e-6);

    Vector naive = s.x;
    for (NodeId w : {0u, 1u}) {
        const auto single = update_node_removal(t5, s, w, 200, 1e-12);
        for (std::size_t i = 0; i < naive.size(); ++i)
            naive[i] -= s.x[i] - single.x_new[i];
    }
    naive[0] = naive[1] = 1.0;
    CHECK(relative_error(truth.x, naive) > 1e-3);
}

TEST_CASE("set update: singleton updates overcount even for non-adjacent nodes") {
    const Graph t5 = fixtures::toy5();
    const double alpha = choose_alpha(t5);
    const KatzState s = exact(t5, alpha);
    const double tol = 1e-12;
    const auto set = RemovalSet::nodes({0, 2});
    const auto joint = update_set_removal(t5, s, set, 200, tol);
    CHECK(relative_error(recompute(t5, set, alpha).x, joint.x_new) < 1e-9);
    Vector summed = s.x;
    for (NodeId w : {0u, 2u}) {
        const auto single = update_node_removal(t5, s, w, 200, tol);
        for (std::size_t i = 0; i < summed.size(); ++i)
            summed[i] -= s.x[i] - single.x_new[i];
    }
    for (std::size_t i : {1u, 3u, 4u})
        CHECK(summed[i] < joint.x_new[i] - 1e-6);
}

TEST_CASE("set update: random sets match recomputation") {
    std::mt19937_64 rng(22);
    for (int rep = 0; rep < 10; ++rep) {
        const Graph g = fixtures::random_graph(50, 0.1, rng);
        const auto active = fixtures::non_isolated(g);
        if (active.size() < 4)
            continue;
        const double alpha = choose_alpha(g);
        const KatzState s = exact(g, alpha);
        std::vector<NodeId> pick{active[0], active[active.size() / 2], active.back()};
        const auto ns = RemovalSet::nodes(pick);
        const auto es = RemovalSet::edges(fixtures::random_edges(g, 3, rng));
        CHECK(relative_error(recompute(g, ns, alpha).x,
                             update_set_removal(g, s, ns, 300, 1e-13).x_new) < 1e-9);
        CHECK(relative_error(recompute(g, es, alpha).x,
                             update_set_removal(g, s, es, 300, 1e-13).x_new) < 1e-9);
    }
}

TEST_CASE("personalized seed: removed node takes its seed value") {
    const Graph t5 = fixtures::toy5();
    const double alpha = choose_alpha(t5);
    KatzOptions opts;
    opts.tol = 1e-14;
    const KatzState s = katz(t5, alpha, Vector{0, 0, 1, 0, 0}, opts);
    const auto res = update_node_removal(t5, s, 4, 300, 1e-13);
    const KatzState truth =
        katz(remove_elements(t5, RemovalSet::node(4)), alpha, Vector{0, 0, 1, 0, 0}, opts);
    CHECK(res.x_new[4] == 0.0);
    CHECK(relative_error(truth.x, res.x_new) < 1e-9);
}

TEST_CASE("driver: single step equals a single update") {
    const Graph t5 = fixtures::toy5();
    const KatzState s = exact(t5, choose_alpha(t5));
    SequentialDriver driver(t5, s, RemovalPolicy::ApproxUpdate);
    driver.step(RemovalSet::node(4));
    CHECK(driver.state().x == update_node_removal(t5, s, 4, 30, 1e-4).x_new);
    CHECK(driver.state().provenance.approximate_updates == 1);
    CHECK_FALSE(driver.state().provenance.exact());
    CHECK(driver.graph() == remove_elements(t5, RemovalSet::node(4)));
}

TEST_CASE("driver: independent edges commute") {
    const Graph c6 = fixtures::cycle(6);
    const double alpha = choose_alpha(c6);
    const KatzState s = exact(c6, alpha);
    DriverParams params;
    params.tol = 1e-10;
    params.lmax_edge = 200;
    const std::vector<RemovalSet> ab{RemovalSet::edge(Edge(0, 1)), RemovalSet::edge(Edge(3, 4))};
    const std::vector<RemovalSet> ba{ab[1], ab[0]};
    const auto first = sequential_removal_driver(c6, s, ab, RemovalPolicy::ApproxUpdate, params);
    const auto second = sequential_removal_driver(c6, s, ba, RemovalPolicy::ApproxUpdate, params);
    CHECK(relative_error(first.final_state.x, second.final_state.x) < 2 * params.tol);
}

TEST_CASE("driver: failure returns the partial trace") {
    const Graph t5 = fixtures::toy5();
    const KatzState s = exact(t5, choose_alpha(t5));
    const std::vector<RemovalSet> plan{RemovalSet::edge(Edge(0, 1)), RemovalSet::edge(Edge(0, 1))};
    const auto trace = sequential_removal_driver(t5, s, plan, RemovalPolicy::ApproxUpdate);
    REQUIRE(trace.failure.has_value());
    CHECK(trace.failure->code() == ErrorCode::MissingElement);
    CHECK(trace.failed_step == 1);
    CHECK(trace.steps.size() == 1);
    CHECK(trace.final_state.x == trace.steps[0].result.x_new);
}

TEST_CASE("driver: recompute policies") {
    const Graph t5 = fixtures::toy5();
    const double alpha = choose_alpha(t5);
    const KatzState s = exact(t5, alpha);
    const auto truth = recompute(t5, RemovalSet::node(0), alpha);
    for (RemovalPolicy p : {RemovalPolicy::RecomputeCG, RemovalPolicy::RecomputeNeumann}) {
        DriverParams params;
        params.solver_tol = 1e-12;
        SequentialDriver driver(t5, s, p, params);
        const auto &res = driver.step(RemovalSet::node(0));
        CHECK(relative_error(truth.x, driver.state().x) < 1e-9);
        CHECK(driver.state().x[0] == 1.0);
        CHECK(driver.state().provenance.exact());
        CHECK(res.L_used > 0);
    }
    DriverParams warm;
    warm.warm_start = true;
    SequentialDriver driver(t5, s, RemovalPolicy::RecomputeCG, warm);
    driver.step(RemovalSet::node(0));
    CHECK(relative_error(truth.x, driver.state().x) < 1e-4);
}

TEST_CASE("driver: fallback to an exact solve at the length cap") {
    const Graph t5 = fixtures::toy5();
    const double alpha = choose_alpha(t5);
    DriverParams params;
    params.lmax_node = 1;
    params.tol = 1e-12;
    params.solver_tol = 1e-12;
    params.recompute_on_maxlen = true;
    SequentialDriver driver(t5, exact(t5, alpha), RemovalPolicy::ApproxUpdate, params);
    const auto &res = driver.step(RemovalSet::node(4));
    CHECK(res.converged_by == ConvergedBy::MaxLength);
    CHECK(driver.state().provenance.exact());
    CHECK(relative_error(recompute(t5, RemovalSet::node(4), alpha).x, driver.state().x) < 1e-9);
}

TEST_CASE("driver: leaves the state unchanged on error") {
    const Graph t5 = fixtures::toy5();
    const KatzState s = exact(t5, choose_alpha(t5));
    SequentialDriver driver(t5, s, RemovalPolicy::ApproxUpdate);
    CHECK_THROWS_AS(driver.step(RemovalSet::edge(Edge(0, 2))), Error);
    CHECK(driver.state().x == s.x);
    CHECK(driver.steps_taken() == 0);
}

TEST_CASE("driver: repeated node removal is rejected") {
    const Graph t5 = fixtures::toy5();
    SequentialDriver driver(t5, exact(t5, choose_alpha(t5)), RemovalPolicy::ApproxUpdate);
    driver.step(RemovalSet::node(3));
    CHECK(code_of([&] { driver.step(RemovalSet::node(3)); }) == ErrorCode::IsolatedNode);
}
