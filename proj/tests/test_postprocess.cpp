#include <doctest.h>

#include <cmath>

#include "iset/errors.hpp"
#include "iset/gen.hpp"
#include "iset/oracle.hpp"
#include "iset/postprocess.hpp"
#include "iset/rng.hpp"

using namespace iset;
using namespace iset::postprocess;

TEST_SUITE("postprocess") {

TEST_CASE("complete_to_maximal") {
    Graph p3 = gen::path(3);
    SUBCASE("from empty reaches one of the two maximal sets") {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            auto out = complete_to_maximal(p3, make_vertex_set(p3, {}), seed);
            bool ok = out.members == std::vector<int>{1} || out.members == std::vector<int>{0, 2};
            CHECK(ok);
        }
    }
    SUBCASE("forced completion from {0}") {
        for (std::uint64_t seed = 0; seed < 10; ++seed)
            CHECK(complete_to_maximal(p3, make_vertex_set(p3, {0}), seed).members ==
                  std::vector<int>{0, 2});
    }
    SUBCASE("empty graph completes to everything") {
        Graph g = gen::empty(4);
        CHECK(complete_to_maximal(g, make_vertex_set(g, {}), 7).members.size() == 4);
    }
    SUBCASE("non-independent input is a repair error") {
        CHECK_THROWS_AS(complete_to_maximal(p3, VertexSet{{0, 1}, 2.0}, 1), InputError);
    }
    SUBCASE("output is maximal independent, hence dominating") {
        Rng rng(3);
        for (int t = 0; t < 20; ++t) {
            Graph g = gen::erdos_renyi(12, 0.3, rng);
            auto out = complete_to_maximal(g, make_vertex_set(g, {}), static_cast<std::uint64_t>(t));
            auto f = classify_set(g, out);
            CHECK(f.maximal_independent);
            CHECK(f.dominating);
        }
    }
}

TEST_CASE("repair_to_independent") {
    Graph k3 = gen::complete(3);
    SUBCASE("triangle repairs to a singleton") {
        auto out = repair_to_independent(k3, make_vertex_set(k3, {0, 1, 2}), 5);
        CHECK(out.members.size() == 1);
    }
    SUBCASE("independent input is a fixed point") {
        Graph p3 = gen::path(3);
        auto s = make_vertex_set(p3, {0, 2});
        CHECK(repair_to_independent(p3, s, 1).members == s.members);
    }
    SUBCASE("P3 {0,1} drops either endpoint with equal frequency") {
        Graph p3 = gen::path(3);
        int kept0 = 0;
        const int trials = 4000;
        for (int s = 0; s < trials; ++s) {
            auto out = repair_to_independent(p3, make_vertex_set(p3, {0, 1}),
                                             static_cast<std::uint64_t>(s));
            REQUIRE(out.members.size() == 1);
            if (out.members[0] == 0) ++kept0;
        }
        CHECK(std::abs(kept0 / double(trials) - 0.5) < 0.03);
    }
    SUBCASE("never grows and terminates within |s| removals") {
        Rng rng(19);
        for (int t = 0; t < 20; ++t) {
            Graph g = gen::erdos_renyi(12, 0.5, rng);
            std::vector<int> all;
            for (int v = 0; v < g.n(); ++v) all.push_back(v);
            PipelineTrace trace;
            auto out = repair_to_independent(g, make_vertex_set(g, all),
                                             static_cast<std::uint64_t>(t), &trace);
            CHECK(out.members.size() <= all.size());
            CHECK(trace.removed.size() <= all.size());
            CHECK(classify_set(g, out).independent);
        }
    }
}

TEST_CASE("connect_dominating") {
    SUBCASE("already-connected dominating set is unchanged") {
        Graph star = gen::star(3);
        auto out = connect_dominating(star, make_vertex_set(star, {0}));
        CHECK(out.members == std::vector<int>{0});
    }
    SUBCASE("P5 gets one connector") {
        Graph p5 = gen::path(5);
        auto out = connect_dominating(p5, make_vertex_set(p5, {1, 3}));
        CHECK(out.members == std::vector<int>{1, 2, 3});
    }
    SUBCASE("P7 gets two connectors") {
        Graph p7 = gen::path(7);
        auto out = connect_dominating(p7, make_vertex_set(p7, {1, 3, 5}));
        CHECK(out.members == std::vector<int>{1, 2, 3, 4, 5});
    }
    SUBCASE("rejects non-dominating input and disconnected graphs") {
        Graph p5 = gen::path(5);
        CHECK_THROWS_AS(connect_dominating(p5, make_vertex_set(p5, {0})), InputError);
        CHECK_THROWS_AS(connect_dominating(gen::empty(3), make_vertex_set(gen::empty(3), {0, 1, 2})),
                        InputError);
    }
    SUBCASE("output is connected dominating within 3x, on random UDGs") {
        Rng rng(23);
        for (int t = 0; t < 15; ++t) {
            Graph g = gen::random_connected_unit_disk(12, 1.0, 2.6, rng);
            auto mds = oracle::mds_exact(g);
            auto out = connect_dominating(g, mds.set);
            auto f = classify_set(g, out);
            CHECK(f.dominating);
            CHECK(f.connected);
            CHECK(out.members.size() <= 3 * mds.set.members.size());
            CHECK(out.members.size() >= mds.set.members.size());
        }
    }
}

TEST_CASE("laplacian_lambda_max") {
    // Single edge: Laplacian eigenvalues {0, 2}.
    CHECK(laplacian_lambda_max(gen::path(2)) == doctest::Approx(2.0).epsilon(1e-6));
    // K3: eigenvalues {0, 3, 3}.
    CHECK(laplacian_lambda_max(gen::complete(3)) == doctest::Approx(3.0).epsilon(1e-6));
    // Star K1,4: largest eigenvalue n = 5.
    CHECK(laplacian_lambda_max(gen::star(4)) == doctest::Approx(5.0).epsilon(1e-6));
    CHECK(laplacian_lambda_max(gen::empty(4)) == 0.0);
}

TEST_CASE("immunize_budget") {
    SUBCASE("full budget immunizes everything") {
        Graph g = gen::complete(4);
        auto plan = immunize_budget(g, 4, 1);
        CHECK(plan.immunized.members.size() == 4);
        CHECK(plan.spread_score == 0.0);
        CHECK(plan.residual_edgeless);
    }
    SUBCASE("P3 with k=1 picks the middle cover") {
        auto plan = immunize_budget(gen::path(3), 1, 2);
        CHECK(plan.immunized.members == std::vector<int>{1});
        CHECK(plan.spread_score == 0.0);
        CHECK(plan.residual_edgeless);
    }
    SUBCASE("K3 with k=1 leaves one edge, lambda = 2") {
        auto plan = immunize_budget(gen::complete(3), 1, 3);
        CHECK(plan.immunized.members.size() == 1);
        CHECK_FALSE(plan.residual_edgeless);
        CHECK(plan.spread_score == doctest::Approx(2.0).epsilon(1e-6));
    }
    SUBCASE("budget above the cover size still clears all edges") {
        Rng rng(29);
        for (int t = 0; t < 10; ++t) {
            Graph g = gen::erdos_renyi(10, 0.3, rng);
            auto plan = immunize_budget(g, g.n() - 1, static_cast<std::uint64_t>(t));
            // tau <= n-1 unless the graph is complete on n vertices
            if (static_cast<int>(plan.immunized.members.size()) <= g.n() - 1)
                CHECK((plan.residual_edgeless || plan.spread_score > 0.0));
        }
    }
    SUBCASE("score nonincreasing in k for a fixed seed") {
        Rng rng(31);
        Graph g = gen::erdos_renyi(9, 0.4, rng);
        double prev = 1e300;
        for (int k = 0; k <= g.n(); ++k) {
            auto plan = immunize_budget(g, k, 7);
            CHECK(plan.spread_score <= prev + 1e-7);
            prev = plan.spread_score;
        }
    }
    SUBCASE("bad budget rejected") {
        CHECK_THROWS_AS(immunize_budget(gen::path(3), -1, 1), InputError);
        CHECK_THROWS_AS(immunize_budget(gen::path(3), 4, 1), InputError);
    }
}

}
