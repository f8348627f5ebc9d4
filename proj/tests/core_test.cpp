#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "capdl/hypergraph.hpp"
#include "capdl/model_io.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace capdl;

namespace {

ParsedModel telco() {
    std::ifstream in(std::string(CAPDL_FIXTURE_DIR) + "/telco.cap");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model_text(buf.str());
}

AtomSet atoms(const SafetyModel& sm, std::initializer_list<const char*> names) {
    AtomSet s(sm.atom_count());
    for (const char* n : names) s.set(sm.names.id_of(n));
    return s;
}

}  // namespace

TEST(Normalize, SplitsMultiHeadEdges) {
    // ({c1}, {c3, c7}) becomes two singleton-head edges.
    Hypergraph h = normalize({{{0}, {2, 6}}}, 7);
    EXPECT_EQ(h.edge_count(), 2u);
    EXPECT_EQ(h.edge(0).head, 2u);
    EXPECT_EQ(h.edge(1).head, 6u);
    EXPECT_EQ(h.edge(0).tail, std::vector<AtomId>{0});
    EXPECT_TRUE(h.check_invariants());
}

TEST(Normalize, AllowsFactEdges) {
    Hypergraph h = normalize({{{}, {0}}}, 2);
    EXPECT_EQ(h.edge_count(), 1u);
    EXPECT_TRUE(h.edge(0).tail.empty());
    EXPECT_EQ(h.max_tail_size(), 0u);
}

TEST(Normalize, RejectsHeadInTail) {
    EXPECT_THROW(normalize({{{0}, {0}}}, 1), InvalidEdge);
    EXPECT_THROW(normalize({{{0, 1}, {2, 0}}}, 3), InvalidEdge);
}

TEST(Closure, TelcoJointSessionDepths) {
    ParsedModel pm = telco();
    AtomSet a = atoms(pm.sm, {"c1", "c2"});
    AtomSet closed = closure(pm.sm.h, a);
    EXPECT_EQ(closed, atoms(pm.sm, {"c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8", "c9"}));

    auto depth = oracles::naive_closure_depths(pm.sm.h, a);
    EXPECT_EQ(depth[pm.sm.names.id_of("c6")], 2);
    EXPECT_EQ(depth[pm.sm.names.id_of("c9")], 2);
    EXPECT_EQ(depth[pm.sm.names.id_of("c3")], 1);
    EXPECT_EQ(depth[pm.sm.names.id_of("c10")], -1);
}

TEST(Closure, EmptyConfigNoFactEdges) {
    ParsedModel pm = telco();
    EXPECT_TRUE(closure(pm.sm.h, AtomSet(pm.sm.atom_count())).empty());
}

TEST(Closure, MatchesNaiveIterationOnRandomModels) {
    testgen::Rng rng(7001);
    for (int i = 0; i < 300; ++i) {
        SafetyModel sm = testgen::random_model(rng, 10, 20, 3);
        AtomSet a = testgen::random_config(rng, sm.atom_count());
        EXPECT_EQ(closure(sm.h, a), oracles::naive_closure(sm.h, a));
    }
}

TEST(Closure1, TelcoExcludesConjunctiveDerivations) {
    ParsedModel pm = telco();
    AtomSet a = atoms(pm.sm, {"c1", "c2"});
    EXPECT_EQ(closure1(pm.sm.h, a), atoms(pm.sm, {"c1", "c2", "c3", "c4", "c5", "c7", "c8"}));
}

TEST(Closure1, EqualsClosureOnSingletonOnlyGraphs) {
    Hypergraph h = normalize({{{0}, {1}}, {{1}, {2}}}, 3);
    AtomSet a = AtomSet::of(3, {0});
    EXPECT_EQ(closure1(h, a), closure(h, a));
}

TEST(Closure1, MatchesNaiveRestrictionOnRandomModels) {
    testgen::Rng rng(7002);
    for (int i = 0; i < 300; ++i) {
        SafetyModel sm = testgen::random_model(rng, 10, 20, 3);
        AtomSet a = testgen::random_config(rng, sm.atom_count());
        EXPECT_EQ(closure1(sm.h, a), oracles::naive_closure1(sm.h, a));
    }
}

TEST(Closure1, ExcludesFactEdges) {
    Hypergraph h = normalize({{{}, {0}}, {{0}, {1}}}, 2);
    EXPECT_TRUE(closure1(h, AtomSet(2)).empty());
    EXPECT_EQ(closure(h, AtomSet(2)), AtomSet::of(2, {0, 1}));
}

TEST(ClosureProperties, ExtensiveMonotoneIdempotent) {
    testgen::Rng rng(7003);
    for (int i = 0; i < 200; ++i) {
        SafetyModel sm = testgen::random_model(rng, 12, 24, 4);
        AtomSet a = testgen::random_config(rng, sm.atom_count());
        AtomSet b = a | testgen::random_config(rng, sm.atom_count());
        AtomSet ca = closure(sm.h, a);
        AtomSet cb = closure(sm.h, b);
        EXPECT_TRUE(a.is_subset_of(ca));
        EXPECT_TRUE(ca.is_subset_of(cb));
        EXPECT_EQ(closure(sm.h, ca), ca);
    }
}

TEST(ClosureProperties, WorkBounds) {
    testgen::Rng rng(7004);
    for (int i = 0; i < 200; ++i) {
        SafetyModel sm = testgen::random_model(rng, 12, 24, 4);
        AtomSet a = testgen::random_config(rng, sm.atom_count());
        ClosureStats stats;
        closure(sm.h, a, nullptr, &stats);
        EXPECT_LE(stats.insertions, sm.atom_count());
        EXPECT_LE(stats.tail_decrements,
                  uint64_t{sm.h.edge_count()} * std::max(1u, sm.h.max_tail_size()));
    }
}

TEST(Trace, ReplayReproducesClosure) {
    testgen::Rng rng(7005);
    for (int i = 0; i < 200; ++i) {
        SafetyModel sm = testgen::random_model(rng, 12, 24, 4);
        AtomSet a = testgen::random_config(rng, sm.atom_count());
        FiringTrace trace;
        AtomSet closed = closure(sm.h, a, &trace);
        auto replayed = replay_trace(sm.h, a, trace);
        ASSERT_TRUE(replayed.has_value());
        EXPECT_EQ(*replayed, closed);
    }
}

TEST(Trace, DeterministicAcrossRuns) {
    ParsedModel pm = telco();
    AtomSet a = atoms(pm.sm, {"c1", "c2"});
    FiringTrace t1, t2;
    closure(pm.sm.h, a, &t1);
    closure(pm.sm.h, a, &t2);
    ASSERT_EQ(t1.steps.size(), t2.steps.size());
    for (size_t i = 0; i < t1.steps.size(); ++i) EXPECT_TRUE(t1.steps[i] == t2.steps[i]);
}

TEST(Hypergraph, RemoveEdgeKeepsInvariants) {
    Hypergraph h = normalize({{{0, 1}, {2}}, {{2}, {3}}}, 4);
    h.remove_edge(0);
    EXPECT_EQ(h.edge_count(), 1u);
    EXPECT_EQ(h.max_tail_size(), 1u);
    EXPECT_TRUE(h.check_invariants());
    EXPECT_THROW(h.remove_edge(0), UnknownEdge);
    EXPECT_TRUE(closure(h, AtomSet::of(4, {0, 1})) == AtomSet::of(4, {0, 1}));
}
