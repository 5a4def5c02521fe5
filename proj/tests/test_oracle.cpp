#include "bce/oracle.hpp"

#include <algorithm>
#include <random>

#include "doctest.h"
#include "test_graphs.hpp"

using namespace bce;
using namespace bce::testing;

TEST_CASE("biclustering cost") {
    BipartiteGraph p6 = make_p6();
    SUBCASE("all-singleton clustering pays every edge as a deletion") {
        Biclustering b{{0, 1, 2}, {3, 4, 5}};
        CHECK(biclustering_cost(p6, b) == p6.edge_count());
    }
    SUBCASE("the components of a bicluster graph cost nothing") {
        BipartiteGraph g = BipartiteGraph::from_edges(3, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
        Biclustering b{{0, 0, 1}, {0, 0}};
        CHECK(biclustering_cost(g, b) == 0);
    }
    SUBCASE("splitting the P6 in the middle costs one deletion") {
        Biclustering b{{0, 0, 1}, {0, 1, 1}};
        CHECK(biclustering_cost(p6, b) == 1);
        CHECK(edits_of(p6, b).deletions == std::set<Edge>{{1, 1}});
    }
    SUBCASE("vertex mismatch is a usage error") {
        CHECK_THROWS_AS(biclustering_cost(p6, Biclustering{{0, 0}, {0, 1, 1}}),
                        std::invalid_argument);
        CHECK_THROWS_AS(biclustering_cost(p6, Biclustering{{0, 0, -1}, {0, 1, 1}}),
                        std::invalid_argument);
    }
}

TEST_CASE("oracle optimum on the named instances") {
    CHECK(oracle_opt(make_p6()).cost == 1);
    CHECK(oracle_opt(make_tight9()).cost == 2);
    CHECK(oracle_opt(make_complete(2, 2)).cost == 0);
    CHECK(oracle_opt(make_cycle(6)).cost == 2);
}

TEST_CASE("oracle refuses instances over the state limit") {
    CHECK_THROWS_AS(oracle_opt(make_complete(4, 4), /*limit=*/10.0), OracleSizeError);
}

TEST_CASE("restricted oracles agree with the unrestricted one") {
    SUBCASE("tight graph") {
        auto t = make_tight9();
        CHECK(oracle_opt_twin_respecting(t).cost == 2);
        CHECK(oracle_opt_deletion_maximal(t).cost == 2);
        auto w = oracle_opt_twin_respecting(t);
        // the twin-respecting witness keeps each left pair together
        CHECK(w.clustering.left_cluster[0] == w.clustering.left_cluster[1]);
        CHECK(w.clustering.left_cluster[2] == w.clustering.left_cluster[3]);
        CHECK(w.clustering.left_cluster[4] == w.clustering.left_cluster[5]);
    }
    SUBCASE("single edge and P6") {
        BipartiteGraph one = BipartiteGraph::from_edges(1, 1, {{0, 0}});
        CHECK(oracle_opt_deletion_maximal(one).cost == 0);
        CHECK(oracle_opt_deletion_maximal(make_p6()).cost == 1);
        CHECK(oracle_opt_twin_respecting(make_p6()).cost == 1);
    }
    SUBCASE("exhaustive 2x3 universe") {
        for (unsigned mask = 0; mask < 64; ++mask) {
            BipartiteGraph g = graph_from_mask(2, 3, mask);
            int opt = oracle_opt(g).cost;
            CHECK(oracle_opt_twin_respecting(g).cost == opt);
            CHECK(oracle_opt_deletion_maximal(g).cost == opt);
        }
    }
}

TEST_CASE("oracle witnesses realize their reported cost") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        int nl = 1 + static_cast<int>(rng() % 4), nr = 1 + static_cast<int>(rng() % 4);
        BipartiteGraph g = graph_from_mask(nl, nr, rng() % (1u << (nl * nr)));
        for (auto fn : {oracle_opt, oracle_opt_twin_respecting, oracle_opt_deletion_maximal}) {
            OracleResult r = fn(g, 1e8);
            CHECK(biclustering_cost(g, r.clustering) == r.cost);
            CHECK(is_bicluster_graph(g.apply_edits(edits_of(g, r.clustering))));
        }
    }
}

TEST_CASE("relabeling vertices preserves the optimum") {
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 20; ++trial) {
        int nl = 2 + static_cast<int>(rng() % 3), nr = 2 + static_cast<int>(rng() % 3);
        BipartiteGraph g = graph_from_mask(nl, nr, rng() % (1u << (nl * nr)));
        std::vector<int> pl(nl), pr(nr);
        for (int i = 0; i < nl; ++i) pl[i] = i;
        for (int j = 0; j < nr; ++j) pr[j] = j;
        std::shuffle(pl.begin(), pl.end(), rng);
        std::shuffle(pr.begin(), pr.end(), rng);
        std::vector<Edge> es;
        for (const Edge& e : g.edges()) es.push_back({pl[e.left], pr[e.right]});
        BipartiteGraph h = BipartiteGraph::from_edges(nl, nr, es);
        CHECK(oracle_opt(g).cost == oracle_opt(h).cost);
    }
}

TEST_CASE("oracle works on masked graphs") {
    BipartiteGraph g = make_tight9().without_vertices({left_vertex(0), left_vertex(1)});
    // what remains is {c,d}x{g,h} plus {e,f}x{h,i}: one conflict around h
    OracleResult r = oracle_opt(g);
    CHECK(r.cost == 2);
    CHECK(r.clustering.left_cluster[0] == -1);
}
