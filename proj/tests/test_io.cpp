#include "bce/io.hpp"

#include <sstream>

#include "bce/oracle.hpp"
#include "doctest.h"
#include "test_graphs.hpp"

using namespace bce;
using namespace bce::testing;

TEST_CASE("instance parsing") {
    SUBCASE("the P6 file") {
        std::string text =
            "c a comment\n"
            "p bce 3 3 5\n"
            "e 1 1\ne 2 1\ne 2 2\ne 3 2\ne 3 3\n";
        CHECK(parse_instance_text(text) == make_p6());
    }
    SUBCASE("empty graph") {
        BipartiteGraph g = parse_instance_text("p bce 0 0 0\n");
        CHECK(g.n_left() == 0);
        CHECK(g.n_right() == 0);
    }
    SUBCASE("errors carry line numbers") {
        CHECK_THROWS_WITH_AS(parse_instance_text("p bce 1 1 2\ne 1 1\ne 1 1\n"),
                             "line 3: duplicate edge 1 1", ParseError);
        CHECK_THROWS_AS(parse_instance_text("p bce 1 1 1\ne 2 1\n"), ParseError);
        CHECK_THROWS_AS(parse_instance_text("p bce 1 1 2\ne 1 1\n"), ParseError);
        CHECK_THROWS_AS(parse_instance_text("p wrong 1 1 0\n"), ParseError);
        CHECK_THROWS_AS(parse_instance_text("e 1 1\n"), ParseError);
        CHECK_THROWS_AS(parse_instance_text(""), ParseError);
        CHECK_THROWS_AS(parse_instance_text("p bce 2 2 0\nq 1\n"), ParseError);
    }
}

TEST_CASE("solutions round-trip and verify") {
    BipartiteGraph p6 = make_p6();
    SUBCASE("P6 optimum serializes with the middle deletion") {
        SolveResult r = solve_optimal(p6);
        std::string text = write_solution(p6, r);
        CHECK(text == "s YES 1\n- 2 2\nb 1 l1 l2 r1\nb 2 l3 r2 r3\n");
        std::istringstream in(text);
        Solution sol = parse_solution(in);
        CHECK(sol.yes);
        CHECK(sol.claimed_cost == 1);
        CHECK(verify(p6, sol).empty());
    }
    SUBCASE("a NO result is a bare status line") {
        SolveResult r = solve_decision({make_tight9(), 1});
        CHECK(write_solution(make_tight9(), r) == "s NO\n");
    }
    SUBCASE("verify flags a wrong deletion") {
        std::istringstream in("s YES 1\n- 1 1\n");
        auto violations = verify(p6, parse_solution(in));
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].category == "not-bicluster");
    }
    SUBCASE("verify flags a non-edge deletion") {
        std::istringstream in("s YES 1\n- 1 3\n");
        auto violations = verify(p6, parse_solution(in));
        REQUIRE_FALSE(violations.empty());
        CHECK(violations[0].category == "bad-edit");
    }
    SUBCASE("verify flags an understated cost") {
        std::istringstream in("s YES 0\n- 2 2\n");
        auto violations = verify(p6, parse_solution(in));
        REQUIRE_FALSE(violations.empty());
        CHECK(violations[0].category == "cost-mismatch");
    }
    SUBCASE("a NO solution has nothing to verify") {
        std::istringstream in("s NO\n");
        CHECK(verify(p6, parse_solution(in)).empty());
    }
}

TEST_CASE("generators") {
    SUBCASE("p6 family") {
        CHECK(gen_p6(1) == make_p6());
        BipartiteGraph g2 = gen_p6(2);
        CHECK(g2.vertex_count() == 12);
        CHECK(oracle_opt(g2).cost == 2);
        CHECK_THROWS_AS(gen_p6(0), std::invalid_argument);
    }
    SUBCASE("tight family") {
        CHECK(gen_tight(1) == make_tight9());
        CHECK(gen_tight(2).vertex_count() == 18);
        CHECK(oracle_opt(gen_tight(1)).cost == 2);
        CHECK_THROWS_AS(gen_tight(0), std::invalid_argument);
    }
    SUBCASE("random graphs are reproducible and respect the extremes") {
        CHECK(gen_random(4, 4, 0.0, 7).edge_count() == 0);
        CHECK(gen_random(4, 4, 1.0, 7).edge_count() == 16);
        BipartiteGraph a = gen_random(5, 5, 0.4, 123);
        BipartiteGraph b = gen_random(5, 5, 0.4, 123);
        CHECK(a == b);
        CHECK(write_instance(a) == write_instance(b));
        CHECK_FALSE(gen_random(5, 5, 0.4, 124) == a);
    }
    SUBCASE("planted instances bound the optimum by their flips") {
        PlantedInstance clean = gen_planted({{2, 2}, {1, 2}}, 0.0, 1);
        CHECK(clean.flips == 0);
        CHECK(is_bicluster_graph(clean.graph));
        for (std::uint32_t seed = 0; seed < 20; ++seed) {
            PlantedInstance p = gen_planted({{2, 2}, {2, 1}}, 0.15, seed);
            CHECK(oracle_opt(p.graph).cost <= p.flips);
        }
        CHECK_THROWS_AS(gen_planted({}, 0.1, 1), std::invalid_argument);
    }
}

TEST_CASE("instances round-trip through the text form") {
    std::mt19937 rng(55);
    for (int trial = 0; trial < 20; ++trial) {
        BipartiteGraph g = gen_random(1 + static_cast<int>(rng() % 6),
                                      1 + static_cast<int>(rng() % 6),
                                      0.4, static_cast<std::uint32_t>(rng()));
        CHECK(parse_instance_text(write_instance(g)) == g);
    }
    CHECK(parse_instance_text(write_instance(gen_tight(2))) == gen_tight(2));
}
