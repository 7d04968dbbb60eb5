#include "doctest.h"

#include <cmath>

#include "pace/errors.hpp"
#include "pace/pace_graph.hpp"
#include "support/generators.hpp"

using namespace pace;
using pace::testing::load_fixture;

namespace {

std::vector<StateNode> two_states() {
    return {{"P_Nominal", Layer::Primary, 1.0, StateClass::Nominal},
            {"E_Failed", Layer::Emergency, 0.0, StateClass::Failure}};
}

std::vector<TransitionEdge> edges_with(std::initializer_list<double> ps) {
    std::vector<TransitionEdge> out;
    std::size_t i = 0;
    for (double p : ps) out.push_back({0, ++i, p, 1.0, EdgeKind::Downward, i});
    return out;
}

} // namespace

TEST_CASE("reference fixture builds a valid eight-state graph") {
    const auto cfg = load_fixture("reference.scenario");
    const auto& g = cfg.scenario.graph;
    CHECK(g.size() == 8);
    CHECK_NOTHROW(g.validate());
    CHECK(g.id(g.nominal()) == "P_Nominal");
    CHECK(g.classification(g.index_of("E_Failed")) == StateClass::Failure);
    CHECK(g.classification(g.index_of("C_Active")) == StateClass::Degraded);
}

TEST_CASE("successors of the reference fixture") {
    const auto g = load_fixture("reference.scenario").scenario.graph;
    CHECK(g.successors("E_Failed").empty());
    const auto nom = g.successors("P_Nominal");
    REQUIRE(nom.size() == 2);
    CHECK(g.id(nom[0].to) == "A_Active");
    CHECK(g.id(nom[1].to) == "P_Degraded");
    CHECK(nom[0].kind == EdgeKind::Downward);
    CHECK(nom[1].kind == EdgeKind::Horizontal);
    CHECK(g.successors("A_Active")[2].kind == EdgeKind::Upward);
    CHECK_THROWS_AS((void)g.successors("X"), LookupError);
    CHECK_THROWS_AS((void)g.index_of("X"), LookupError);
}

TEST_CASE("graph validation rejects malformed inputs") {
    CHECK_THROWS_AS(PaceGraph::build(two_states(), {{"P_Nominal", "E_Failed", 1.3, 1.0}}), ValidationError);
    CHECK_THROWS_AS(PaceGraph::build(two_states(), {{"P_Nominal", "E_Failed", 0.3, -1.0}}), ValidationError);
    CHECK_THROWS_AS(PaceGraph::build(two_states(), {{"P_Nominal", "P_Nominal", 0.3, 1.0}}), ValidationError);
    CHECK_THROWS_AS(PaceGraph::build(two_states(), {{"P_Nominal", "Z", 0.3, 1.0}}), ValidationError);
    CHECK_THROWS_AS(PaceGraph::build(two_states(), {{"P_Nominal", "E_Failed", 0.3, 1.0},
                                                    {"P_Nominal", "E_Failed", 0.1, 1.0}}),
                    ValidationError);

    std::vector<StateNode> no_nominal = {{"P_Main", Layer::Primary, 1.0, StateClass::Nominal},
                                         {"E_Failed", Layer::Emergency, 0.0, StateClass::Failure}};
    CHECK_THROWS_AS(PaceGraph::build(no_nominal, {{"P_Main", "E_Failed", 0.3, 1.0}}), ValidationError);

    auto misplaced_failure = two_states();
    misplaced_failure[1].layer = Layer::Contingency;
    CHECK_THROWS_AS(PaceGraph::build(misplaced_failure, {{"P_Nominal", "E_Failed", 0.3, 1.0}}),
                    ValidationError);

    auto no_failure = two_states();
    no_failure[1].classification = StateClass::Degraded;
    CHECK_THROWS_AS(PaceGraph::build(no_failure, {{"P_Nominal", "E_Failed", 0.3, 1.0}}), ValidationError);

    // A non-failure state without successors.
    CHECK_THROWS_AS(PaceGraph::build(two_states(), {}), ValidationError);

    auto dup = two_states();
    dup.push_back({"E_Failed", Layer::Emergency, 0.0, StateClass::Failure});
    CHECK_THROWS_AS(PaceGraph::build(dup, {{"P_Nominal", "E_Failed", 0.3, 1.0}}), ValidationError);

    auto too_good = two_states();
    too_good.push_back({"A_Best", Layer::Alternate, 1.0, StateClass::Degraded});
    too_good[0].utility = 0.9;
    CHECK_THROWS_AS(PaceGraph::build(too_good, {{"P_Nominal", "E_Failed", 0.3, 1.0},
                                                {"A_Best", "E_Failed", 0.3, 1.0}}),
                    ValidationError);
}

TEST_CASE("edge kinds follow layer order") {
    CHECK(classify_edge(Layer::Primary, Layer::Primary) == EdgeKind::Horizontal);
    CHECK(classify_edge(Layer::Primary, Layer::Emergency) == EdgeKind::Downward);
    CHECK(classify_edge(Layer::Contingency, Layer::Alternate) == EdgeKind::Upward);
}

TEST_CASE("normalized move distribution splits the move mass by base probability") {
    auto d = normalized_move_distribution(edges_with({0.3, 0.1}), 0.6);
    CHECK(d.stay == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(std::abs(d.move[0] - 0.3) <= 1e-12);
    CHECK(std::abs(d.move[1] - 0.1) <= 1e-12);

    d = normalized_move_distribution(edges_with({0.2, 0.2}), 0.5);
    CHECK(d.stay == 0.5);
    CHECK(std::abs(d.move[0] - 0.25) <= 1e-12);
    CHECK(std::abs(d.move[1] - 0.25) <= 1e-12);

    d = normalized_move_distribution({}, 0.55);
    CHECK(d.stay == 1.0);
    CHECK(d.move.empty());

    d = normalized_move_distribution(edges_with({0.0, 0.0, 0.0, 0.0}), 0.2);
    for (double m : d.move) CHECK(std::abs(m - 0.2) <= 1e-12);

    CHECK_THROWS_AS(normalized_move_distribution(edges_with({0.1}), 1.5), ConfigError);
}

TEST_CASE("move distribution sampling follows the cumulative masses") {
    MoveDistribution d{0.5, {0.0, 0.25, 0.25}};
    CHECK_FALSE(d.sample(0.0).has_value());
    CHECK_FALSE(d.sample(0.4999).has_value());
    CHECK(d.sample(0.5) == 1u);
    CHECK(d.sample(0.7499) == 1u);
    CHECK(d.sample(0.75) == 2u);
    CHECK(d.sample(0.9999999) == 2u);
}

TEST_CASE("layer and class names round-trip") {
    for (auto l : {Layer::Primary, Layer::Alternate, Layer::Contingency, Layer::Emergency}) {
        CHECK(parse_layer(to_string(l)) == l);
    }
    for (auto c : {StateClass::Nominal, StateClass::Degraded, StateClass::Failure}) {
        CHECK(parse_state_class(to_string(c)) == c);
    }
    CHECK_THROWS_AS(parse_layer("Q"), ValidationError);
    CHECK_THROWS_AS(parse_state_class("broken"), ValidationError);
}

TEST_CASE("property: random graphs validate, are idempotent and have consistent kinds") {
    Rng rng(201);
    for (int i = 0; i < 1500; ++i) {
        const auto g = pace::testing::random_graph(rng);
        REQUIRE_NOTHROW(g.validate());
        REQUIRE_NOTHROW(g.validate());
        for (const auto& e : g.edges()) {
            const auto from = static_cast<int>(g.state(e.from).layer);
            const auto to = static_cast<int>(g.state(e.to).layer);
            const auto expected = from == to ? EdgeKind::Horizontal
                                             : (to > from ? EdgeKind::Downward : EdgeKind::Upward);
            REQUIRE(e.kind == expected);
        }
        for (StateIndex s = 0; s < g.size(); ++s) {
            const auto succ = g.successors(s);
            if (succ.empty()) REQUIRE(g.classification(s) == StateClass::Failure);
            for (std::size_t k = 1; k < succ.size(); ++k) REQUIRE(g.id(succ[k - 1].to) < g.id(succ[k].to));
        }
    }
}

TEST_CASE("property: normalized move distribution is a proper distribution") {
    Rng rng(202);
    for (int i = 0; i < 3000; ++i) {
        const std::size_t n = rng.index(7);
        std::vector<TransitionEdge> edges;
        for (std::size_t k = 0; k < n; ++k) {
            edges.push_back({0, k + 1, pace::testing::random_probability(rng), 1.0, EdgeKind::Downward, k});
        }
        const double p_stay = pace::testing::random_probability(rng);
        const auto d = normalized_move_distribution(edges, p_stay);
        REQUIRE(pace::testing::all_nonnegative(d));
        REQUIRE(std::abs(pace::testing::mass(d) - 1.0) <= 1e-12);
        REQUIRE(d.move.size() == n);
        if (n == 0) REQUIRE(d.stay == 1.0);
    }
}
