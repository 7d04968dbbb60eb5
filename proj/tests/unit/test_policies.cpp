#include "doctest.h"

#include <cmath>
#include <sstream>

#include "pace/errors.hpp"
#include "pace/policies.hpp"
#include "support/generators.hpp"
#include "support/golden.hpp"

using namespace pace;
using pace::testing::load_fixture;

namespace {

// P_Nominal with two successors whose utilities and costs are chosen per test.
PaceGraph fork(double u_a, double u_b, double cost_a, double cost_b, double p_a = 0.1, double p_b = 0.1) {
    std::vector<StateNode> states = {{"P_Nominal", Layer::Primary, 1.0, StateClass::Nominal},
                                     {"A_One", Layer::Alternate, u_a, StateClass::Degraded},
                                     {"A_Two", Layer::Alternate, u_b, StateClass::Degraded},
                                     {"E_Failed", Layer::Emergency, 0.0, StateClass::Failure}};
    return PaceGraph::build(states, {{"P_Nominal", "A_One", p_a, cost_a},
                                     {"P_Nominal", "A_Two", p_b, cost_b},
                                     {"A_One", "E_Failed", 0.1, 1.0},
                                     {"A_Two", "E_Failed", 0.1, 1.0}});
}

// Successors of A_One/A_Two style states whose stay reward is below every move.
PaceGraph low_start(double u_a, double u_b) {
    std::vector<StateNode> states = {{"P_Nominal", Layer::Primary, 1.0, StateClass::Nominal},
                                     {"A_One", Layer::Alternate, u_a, StateClass::Degraded},
                                     {"A_Two", Layer::Alternate, u_b, StateClass::Degraded},
                                     {"E_Low", Layer::Emergency, 0.0, StateClass::Degraded},
                                     {"E_Failed", Layer::Emergency, 0.0, StateClass::Failure}};
    return PaceGraph::build(states, {{"P_Nominal", "A_One", 0.1, 0.0},
                                     {"E_Low", "A_One", 0.1, 0.0},
                                     {"E_Low", "A_Two", 0.1, 0.0},
                                     {"A_One", "E_Failed", 0.1, 1.0},
                                     {"A_Two", "E_Failed", 0.1, 1.0}});
}

EnvironmentState calm() {
    EnvironmentState env;
    env.jamming = 0.0;
    env.concurrency = 1;
    return env;
}

std::string describe(const Action& a, const PaceGraph& g) {
    if (is_stay(a)) return "STAY";
    const auto& m = std::get<Move>(a);
    std::ostringstream out;
    out.precision(17);
    out << "MOVE " << g.id(m.edge.from) << " -> " << g.id(m.edge.to) << " cost " << m.effective_cost;
    return out.str();
}

} // namespace

TEST_CASE("adaptive probability and cost scaling") {
    PolicyParams p;
    p.lambda = 0.5;
    EnvironmentState env;
    env.jamming = 0.8;
    env.concurrency = 1;
    const TransitionEdge e{0, 1, 0.2, 0.0, EdgeKind::Downward, 0};
    CHECK(std::abs(adapt_edge(e, env, p).p - 0.28) <= 1e-12);

    p.gamma = 0.25;
    p.alpha = 0.1;
    env.concurrency = 2;
    const TransitionEdge c{0, 1, 0.0, 0.5, EdgeKind::Downward, 0};
    CHECK(std::abs(adapt_edge(c, env, p).cost - 0.6) <= 1e-12);

    p.gamma = 0.1;
    p.alpha = 0.2;
    env.jamming = 0.0;
    env.concurrency = 3;
    const TransitionEdge cheap{0, 1, 0.0, 0.05, EdgeKind::Downward, 0};
    CHECK(adapt_edge(cheap, env, p).cost == 0.0);
}

TEST_CASE("adaptive distribution residual and renormalization") {
    PolicyParams p;
    std::vector<TransitionEdge> edges = {{0, 1, 0.3, 1.0, EdgeKind::Downward, 0},
                                         {0, 2, 0.1, 1.0, EdgeKind::Horizontal, 1}};
    auto d = adaptive_distribution(edges, calm(), p);
    CHECK(std::abs(d.move[0] - 0.3) <= 1e-12);
    CHECK(std::abs(d.move[1] - 0.1) <= 1e-12);
    CHECK(std::abs(d.stay - 0.6) <= 1e-12);

    p.lambda = 0.0;
    edges[0].p = 0.8;
    edges[1].p = 0.9;
    d = adaptive_distribution(edges, calm(), p);
    CHECK(d.stay == 0.0);
    CHECK(std::abs(d.move[0] - 0.8 / 1.7) <= 1e-12);
    CHECK(std::abs(d.move[1] - 0.9 / 1.7) <= 1e-12);

    p.lambda = 0.5;
    EnvironmentState env;
    env.jamming = 0.8;
    const std::vector<TransitionEdge> one = {{0, 1, 0.2, 1.0, EdgeKind::Downward, 0}};
    d = adaptive_distribution(one, env, p);
    CHECK(std::abs(d.move[0] - 0.28) <= 1e-12);
    CHECK(std::abs(d.stay - 0.72) <= 1e-12);
}

TEST_CASE("downward-only scaling leaves other edges at base probability") {
    PolicyParams p;
    p.lambda = 1.0;
    p.adaptive_scale_scope = ScaleScope::Downward;
    EnvironmentState env;
    env.jamming = 0.5;
    const std::vector<TransitionEdge> edges = {{0, 1, 0.2, 1.0, EdgeKind::Downward, 0},
                                               {0, 2, 0.2, 1.0, EdgeKind::Upward, 1}};
    const auto d = adaptive_distribution(edges, env, p);
    CHECK(std::abs(d.move[0] - 0.3) <= 1e-12);
    CHECK(std::abs(d.move[1] - 0.2) <= 1e-12);
}

TEST_CASE("greedy reward is target utility minus adapted cost") {
    const auto g = fork(0.7, 0.5, 0.3, 0.0);
    const auto& e = g.successors(g.nominal())[0];
    CHECK(std::abs(greedy_reward(e, calm(), PolicyParams{}, g) - 0.4) <= 1e-12);
}

TEST_CASE("all policies stay on an empty edge list") {
    const auto g = fork(0.7, 0.5, 0.3, 0.0);
    Rng rng(3);
    PolicyParams p;
    p.epsilon = 1.0;
    p.p_stay = 0.0;
    for (auto kind : kAllPolicies) CHECK(is_stay(decide(kind, {}, calm(), p, g, rng)));
}

TEST_CASE("static policy with p_stay 1 always stays") {
    const auto g = fork(0.7, 0.5, 0.3, 0.0);
    PolicyParams p;
    p.p_stay = 1.0;
    Rng rng(4);
    for (int i = 0; i < 200; ++i) CHECK(is_stay(decide_static(g.successors(g.nominal()), p, rng)));
}

TEST_CASE("pure exploitation picks the best reward") {
    // Rewards 0.4 and 0.9 from a state worth less than both.
    const auto g = low_start(0.4, 0.9);
    const auto edges = g.successors("E_Low");
    PolicyParams p;
    p.epsilon = 0.0;
    p.gamma = 0.0;
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        const auto a = decide_greedy(edges, calm(), p, g, rng);
        REQUIRE_FALSE(is_stay(a));
        CHECK(g.id(std::get<Move>(a).edge.to) == "A_Two");
    }
}

TEST_CASE("greedy stays when every move is strictly worse than staying") {
    const auto g = fork(0.7, 0.5, 0.3, 0.0);
    PolicyParams p;
    p.epsilon = 0.0;
    Rng rng(6);
    CHECK(is_stay(decide_greedy(g.successors(g.nominal()), calm(), p, g, rng)));
}

TEST_CASE("greedy ties go to the smallest target id") {
    const auto g = low_start(0.6, 0.6);
    PolicyParams p;
    p.epsilon = 0.0;
    Rng rng(7);
    const auto a = decide_greedy(g.successors("E_Low"), calm(), p, g, rng);
    REQUIRE_FALSE(is_stay(a));
    CHECK(g.id(std::get<Move>(a).edge.to) == "A_One");
}

TEST_CASE("pure exploration is uniform over valid edges") {
    const auto g = low_start(0.1, 0.9);
    PolicyParams p;
    p.epsilon = 1.0;
    Rng rng(8);
    int first = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const auto a = decide_greedy(g.successors("E_Low"), calm(), p, g, rng);
        REQUIRE_FALSE(is_stay(a));
        if (g.id(std::get<Move>(a).edge.to) == "A_One") ++first;
    }
    // 5 standard errors of a fair coin.
    CHECK(std::abs(first / double(n) - 0.5) < 5 * std::sqrt(0.25 / n));
}

TEST_CASE("moves charge the adapted cost") {
    const auto g = low_start(0.4, 0.9);
    PolicyParams p;
    p.gamma = 0.5;
    p.alpha = 0.0;
    p.epsilon = 0.0;
    EnvironmentState env;
    env.jamming = 0.4;
    Rng rng(9);
    const auto a = decide_greedy(g.successors("E_Low"), env, p, g, rng);
    CHECK(charged_cost(a) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(charged_cost(Stay{}) == 0.0);
}

TEST_CASE("policy parameter validation names the field") {
    PolicyParams p;
    p.epsilon = 1.5;
    try {
        validate(p);
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("policy.epsilon") != std::string::npos);
    }
    p = {};
    p.lambda = -1.0;
    CHECK_THROWS_AS(validate(p), ValidationError);
    CHECK(parse_policy("adaptive") == PolicyKind::Adaptive);
    CHECK_THROWS_AS(parse_policy("random"), LookupError);
    CHECK(parse_scale_scope(to_string(ScaleScope::Downward)) == ScaleScope::Downward);
}

TEST_CASE("golden: static decisions at P_Nominal with seed 42") {
    const auto cfg = load_fixture("reference.scenario");
    const auto& g = cfg.scenario.graph;
    Rng rng(42);
    std::string text;
    for (int i = 0; i < 20; ++i) {
        text += describe(decide_static(g.successors(g.nominal()), cfg.scenario.policy, rng), g) + "\n";
    }
    CHECK(text == pace::testing::golden("decide_static_seed42.txt", text));
}

TEST_CASE("property: adaptive distributions are proper and monotone in jamming") {
    Rng rng(401);
    for (int i = 0; i < 3000; ++i) {
        const std::size_t n = rng.index(6);
        std::vector<TransitionEdge> edges;
        for (std::size_t k = 0; k < n; ++k) {
            const auto kind = static_cast<EdgeKind>(rng.index(3));
            edges.push_back({0, k + 1, pace::testing::random_probability(rng), rng.uniform(0.0, 3.0), kind, k});
        }
        const auto params = pace::testing::random_params(rng);
        auto env = pace::testing::random_environment(rng);
        const auto d = adaptive_distribution(edges, env, params);
        REQUIRE(pace::testing::all_nonnegative(d));
        REQUIRE(std::abs(pace::testing::mass(d) - 1.0) <= 1e-12);

        auto hotter = env;
        hotter.jamming = std::min(1.0, env.jamming + rng.uniform01());
        for (const auto& e : edges) {
            REQUIRE(adapt_edge(e, hotter, params).p >= adapt_edge(e, env, params).p);
            REQUIRE(adapt_edge(e, env, params).cost >= 0.0);
        }

        env.jamming = 0.0;
        env.concurrency = 1;
        for (const auto& e : edges) {
            const auto a = adapt_edge(e, env, params);
            REQUIRE(a.p == e.p);
            REQUIRE(a.cost == e.cost);
        }
    }
}

TEST_CASE("property: degenerate exploration rates") {
    Rng rng(402);
    for (int i = 0; i < 1000; ++i) {
        const auto g = pace::testing::random_graph(rng);
        const auto s = rng.index(g.size());
        const auto edges = g.successors(s);
        const auto env = pace::testing::random_environment(rng);
        auto params = pace::testing::random_params(rng);

        // epsilon = 0: deterministic, and invariant under rescaling of rewards
        // (scaling every utility and cost together).
        params.epsilon = 0.0;
        Rng r1(i);
        Rng r2(i + 7919);
        const auto a1 = decide_greedy(edges, env, params, g, r1);
        const auto a2 = decide_greedy(edges, env, params, g, r2);
        REQUIRE(a1 == a2);

        const double k = rng.uniform(0.1, 0.99);
        std::vector<StateNode> states = g.states();
        for (auto& st : states) st.utility *= k;
        std::vector<EdgeSpec> scaled;
        for (const auto& e : g.edges()) scaled.push_back({g.id(e.from), g.id(e.to), e.p, e.cost * k});
        const auto gk = PaceGraph::build(states, scaled);
        auto pk = params;
        pk.gamma *= k;
        pk.alpha *= k;
        Rng r3(i);
        const auto ak = decide_greedy(gk.successors(s), env, pk, gk, r3);
        REQUIRE(is_stay(a1) == is_stay(ak));
        if (!is_stay(a1)) REQUIRE(std::get<Move>(a1).edge.to == std::get<Move>(ak).edge.to);

        // epsilon = 1: always a move over the valid edges, never a stay.
        params.epsilon = 1.0;
        Rng r4(i);
        const auto a4 = decide_greedy(edges, env, params, g, r4);
        REQUIRE(is_stay(a4) == edges.empty());
    }
}

TEST_CASE("property: every decider stays on empty successor sets") {
    Rng rng(403);
    for (int i = 0; i < 1000; ++i) {
        const auto g = pace::testing::random_graph(rng);
        const auto params = pace::testing::random_params(rng);
        const auto env = pace::testing::random_environment(rng);
        for (auto kind : kAllPolicies) {
            REQUIRE(is_stay(decide(kind, {}, env, params, g, rng)));
        }
        for (StateIndex s = 0; s < g.size(); ++s) {
            if (!g.successors(s).empty()) continue;
            for (auto kind : kAllPolicies) REQUIRE(is_stay(decide(kind, g.successors(s), env, params, g, rng)));
        }
    }
}
