#include "bce/kernelize.hpp"

#include <random>

#include "bce/oracle.hpp"
#include "doctest.h"
#include "test_graphs.hpp"

using namespace bce;
using namespace bce::testing;

namespace {

// Independent trace replay: applying the recorded steps to the original
// instance must reproduce the kernelizer's output.
Instance replay(const Instance& start, const KernelTrace& trace) {
    Instance cur = start;
    for (const KernelStep& st : trace.steps) {
        if (st.rule == 3) {
            EditSet e;
            e.deletions.insert(*st.deleted_edge);
            cur.graph = cur.graph.apply_edits(e);
            cur.budget -= st.budget_delta;
        } else {
            cur.graph = cur.graph.without_vertices(st.removed);
        }
    }
    return cur;
}

// R = {a,b,c} with S = {s}; sister t with a degree-1 extra neighbor;
// two twins in W (not sisters).
BipartiteGraph make_sister_config() {
    return BipartiteGraph::from_edges(
        6, 3, {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {3, 1}, {4, 0}, {4, 2}, {5, 0}, {5, 2}});
}

}  // namespace

TEST_CASE("rule 1 removes exactly the bicluster components") {
    SUBCASE("complete block beside a P6") {
        BipartiteGraph g = disjoint_union(make_complete(2, 2), make_p6());
        KernelResult r = rule1({g, 5});
        CHECK(r.instance.graph.vertex_count() == 6);
        CHECK(r.instance.budget == 5);
        REQUIRE(r.trace.steps.size() == 1);
        CHECK(r.trace.steps[0].rule == 1);
        CHECK(r.trace.steps[0].removed.size() == 4);
    }
    SUBCASE("a bicluster graph reduces to nothing") {
        BipartiteGraph g = disjoint_union(make_complete(1, 3), make_complete(2, 1));
        KernelResult r = rule1({g, 0});
        CHECK(r.instance.graph.empty());
    }
    SUBCASE("P6 is untouched") {
        KernelResult r = rule1({make_p6(), 1});
        CHECK(r.instance.graph.vertex_count() == 6);
        CHECK(r.trace.steps.empty());
    }
}

TEST_CASE("rule 2 removes the largest-index member of an oversized twin class") {
    // a, b adjacent to {x, y}; w adjacent to {y} only: |{a,b}| > |{w}|.
    BipartiteGraph g = BipartiteGraph::from_edges(3, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 1}});
    KernelResult r = rule2({g, 3});
    REQUIRE(r.trace.steps.size() == 1);
    CHECK(r.trace.steps[0].rule == 2);
    CHECK(r.trace.steps[0].removed == std::vector<VertexRef>{left_vertex(1)});
    CHECK(r.instance.budget == 3);
    CHECK_FALSE(r.instance.graph.is_alive(left_vertex(1)));

    CHECK(rule2({make_p6(), 1}).trace.steps.empty());
    CHECK(rule2({make_tight9(), 2}).trace.steps.empty());
}

TEST_CASE("sister detection") {
    SUBCASE("the P6 end class has one sister") {
        BipartiteGraph p6 = make_p6();
        SisterSet ss = sisters(p6, Side::Left, {0});
        CHECK(ss.neighborhood == std::vector<int>{0});
        REQUIRE(ss.sisters.size() == 1);
        CHECK(ss.sisters[0].t == left_vertex(1));
        CHECK(ss.sisters[0].extra == right_vertex(1));
    }
    SUBCASE("twins inside W are not sisters") {
        BipartiteGraph g = make_sister_config();
        SisterSet ss = sisters(g, Side::Left, {0, 1, 2});
        REQUIRE(ss.sisters.size() == 1);
        CHECK(ss.sisters[0].t == left_vertex(3));
        CHECK(ss.sisters[0].extra == right_vertex(1));
    }
    SUBCASE("a bicluster component has no sisters") {
        BipartiteGraph k = make_complete(2, 2);
        CHECK(sisters(k, Side::Left, {0, 1}).sisters.empty());
    }
}

TEST_CASE("rule 3") {
    SUBCASE("P6 with budget 1: the sister edge goes, leaving two P3 blocks") {
        KernelResult r = rule3({make_p6(), 1});
        REQUIRE(r.trace.steps.size() == 1);
        CHECK(r.trace.steps[0].rule == 3);
        CHECK(*r.trace.steps[0].deleted_edge == Edge{1, 1});
        CHECK(r.instance.budget == 0);
        CHECK(r.instance.graph.edge_count() == 4);
        CHECK(is_bicluster_graph(r.instance.graph));
        CHECK_FALSE(r.no_certificate);
    }
    SUBCASE("not applicable to the tight graph") {
        KernelResult r = rule3({make_tight9(), 2});
        CHECK(r.trace.steps.empty());
        CHECK_FALSE(r.no_certificate);
    }
    SUBCASE("sister configuration: the edge to the degree-1 extra goes") {
        KernelResult r = rule3({make_sister_config(), 4});
        REQUIRE(r.trace.steps.size() == 1);
        CHECK(*r.trace.steps[0].deleted_edge == Edge{3, 1});
        CHECK(r.instance.budget == 3);
    }
    SUBCASE("firing with budget 0 certifies NO instead of clamping") {
        KernelResult r = rule3({make_p6(), 0});
        CHECK(r.no_certificate);
        CHECK(r.trace.steps.empty());
        CHECK(r.instance.budget == 0);
    }
}

TEST_CASE("kernelize") {
    SUBCASE("k disjoint P6 copies empty out with k rule-3 steps") {
        const int k = 3;
        BipartiteGraph g = make_p6();
        for (int i = 1; i < k; ++i) g = disjoint_union(g, make_p6());
        KernelResult r = kernelize({g, k});
        CHECK_FALSE(r.no_certificate);
        CHECK(r.instance.graph.empty());
        CHECK(r.instance.budget == 0);
        int rule3_steps = 0;
        for (const auto& st : r.trace.steps) rule3_steps += st.rule == 3;
        CHECK(rule3_steps == k);
        CHECK(r.trace.budget_spent() == k);
    }
    SUBCASE("the tight graph is a fixpoint of all three rules") {
        KernelResult r = kernelize({make_tight9(), 2});
        CHECK(r.trace.steps.empty());
        CHECK(r.instance.graph.vertex_count() == 9);
        CHECK(r.instance.budget == 2);
    }
    SUBCASE("bicluster graph with budget 0 empties without spending") {
        KernelResult r = kernelize({make_complete(2, 2), 0});
        CHECK(r.instance.graph.empty());
        CHECK(r.instance.budget == 0);
        CHECK_FALSE(r.no_certificate);
    }
    SUBCASE("P6 with budget 0 is a certified NO") {
        KernelResult r = kernelize({make_p6(), 0});
        CHECK(r.no_certificate);
    }
    SUBCASE("P6 with budget 1: frozen trace") {
        KernelResult r = kernelize({make_p6(), 1});
        CHECK(r.trace.to_text() == "R3 2 2\nR1 l1 l2 r1\nR1 l3 r2 r3\n");
    }
}

TEST_CASE("kernelize traces replay to the same instance and shrink monotonically") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        int nl = 1 + static_cast<int>(rng() % 4), nr = 1 + static_cast<int>(rng() % 4);
        Instance inst{graph_from_mask(nl, nr, rng() % (1u << (nl * nr))),
                      static_cast<int>(rng() % 5)};
        KernelResult r = kernelize(inst);
        CHECK(r.instance.budget <= inst.budget);
        CHECK(r.instance.budget >= 0);
        CHECK(r.instance.graph.vertex_count() <= inst.graph.vertex_count());
        if (!r.no_certificate) {
            Instance again = replay(inst, r.trace);
            CHECK(again.graph == r.instance.graph);
            CHECK(again.budget == r.instance.budget);
            // fixpoint: no rule applies to the output
            CHECK(rule1(r.instance).trace.steps.empty());
            CHECK(rule2(r.instance).trace.steps.empty());
            CHECK(rule3(r.instance).trace.steps.empty());
        }
    }
}

TEST_CASE("kernelization preserves the decision for all budgets, oracle-checked") {
    auto check = [&](const BipartiteGraph& g, int opt) {
        for (int k = 0; k <= 6; ++k) {
            KernelResult r = kernelize({g, k});
            bool reduced_yes =
                !r.no_certificate && oracle_opt(r.instance.graph).cost <= r.instance.budget;
            CHECK((opt <= k) == reduced_yes);
        }
    };
    for (unsigned mask = 0; mask < 512; ++mask) {
        BipartiteGraph g = graph_from_mask(3, 3, mask);
        check(g, oracle_opt(g).cost);
    }
    // sampled slice of the 4x4 universe
    for (unsigned mask = 0; mask < 65536; mask += 11) {
        BipartiteGraph g = graph_from_mask(4, 4, mask);
        check(g, oracle_opt(g).cost);
    }
}

TEST_CASE("kernelizing at the optimal budget leaves at most 4.5k vertices") {
    std::mt19937 rng(606);
    for (int trial = 0; trial < 120; ++trial) {
        int nl = 1 + static_cast<int>(rng() % 5), nr = 1 + static_cast<int>(rng() % 5);
        BipartiteGraph g = graph_from_mask(nl, nr, rng() % (1u << (nl * nr)));
        int kstar = oracle_opt(g).cost;
        if (kstar < 1) continue;
        KernelResult r = kernelize({g, kstar});
        REQUIRE_FALSE(r.no_certificate);
        CHECK(r.instance.graph.vertex_count() <= 9 * kstar / 2);
    }
}

TEST_CASE("rule safety against the oracle on tiny graphs") {
    for (unsigned mask = 0; mask < 256; mask += 3) {
        BipartiteGraph g = graph_from_mask(2, 4, mask);
        int opt = oracle_opt(g).cost;
        KernelResult r2 = rule2({g, 6});
        if (!r2.trace.steps.empty()) {
            for (int k = 0; k <= 4; ++k)
                CHECK((opt <= k) == (oracle_opt(r2.instance.graph).cost <= k));
        }
        KernelResult r3 = rule3({g, 6});
        if (!r3.trace.steps.empty()) {
            for (int k = 1; k <= 4; ++k)
                CHECK((opt <= k) == (oracle_opt(r3.instance.graph).cost <= k - 1));
        }
    }
}
