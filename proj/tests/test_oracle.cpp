#include <doctest.h>

#include <cmath>

#include "iset/errors.hpp"
#include "iset/gen.hpp"
#include "iset/oracle.hpp"
#include "iset/rng.hpp"
#include "ref_oracles.hpp"

using namespace iset;
using namespace iset::oracle;

TEST_SUITE("oracle") {

TEST_CASE("enumerate_independent_sets") {
    SUBCASE("P3 emits the five sets in increasing mask order") {
        Graph p3 = gen::path(3);
        auto sets = all_independent_sets(p3);
        REQUIRE(sets.size() == 5); // brute force: 5 of the 8 subsets are independent
        CHECK(sets[0].members.empty());
        CHECK(sets[1].members == std::vector<int>{0});
        CHECK(sets[2].members == std::vector<int>{1});
        CHECK(sets[3].members == std::vector<int>{2});
        CHECK(sets[4].members == std::vector<int>{0, 2});
    }
    SUBCASE("K3 has four independent sets") {
        CHECK(all_independent_sets(gen::complete(3)).size() == 4);
    }
    SUBCASE("empty graph emits all subsets") {
        CHECK(all_independent_sets(gen::empty(3)).size() == 8);
    }
    SUBCASE("matches brute force on random graphs") {
        Rng rng(41);
        for (int t = 0; t < 10; ++t) {
            Graph g = gen::erdos_renyi(8, 0.4, rng);
            auto sets = all_independent_sets(g);
            auto masks = ref::all_independent_sets(g);
            REQUIRE(sets.size() == masks.size());
            for (std::size_t i = 0; i < sets.size(); ++i)
                CHECK(mask_from_set(sets[i]) == masks[i]); // same order, too
        }
    }
    SUBCASE("cap is enforced") {
        Caps tiny;
        tiny.enumeration = 4;
        CHECK_THROWS_AS(all_independent_sets(gen::empty(5), tiny), SizeCapError);
    }
}

TEST_CASE("mwis_exact") {
    SUBCASE("P3 uniform prefers the ends") {
        auto sol = mwis_exact(gen::path(3));
        CHECK(sol.set.members == std::vector<int>{0, 2});
        CHECK(sol.objective == 2.0);
        CHECK(sol.optimal);
    }
    SUBCASE("P3 with a heavy middle prefers the middle") {
        auto sol = mwis_exact(gen::path(3).with_weights({1, 5, 1}));
        CHECK(sol.set.members == std::vector<int>{1});
        CHECK(sol.objective == 5.0);
    }
    SUBCASE("empty graph takes everything") {
        auto sol = mwis_exact(gen::empty(4));
        CHECK(sol.set.members == std::vector<int>{0, 1, 2, 3});
        CHECK(sol.objective == 4.0);
    }
    SUBCASE("nonpositive weights are rejected") {
        CHECK_THROWS_AS(mwis_exact(gen::path(2).with_weights({1, -1})), InputError);
        CHECK_THROWS_AS(mwis_exact(gen::path(2).with_weights({1, 0})), InputError);
    }
    SUBCASE("matches brute force with random weights") {
        Rng rng(42);
        for (int t = 0; t < 40; ++t) {
            Graph g = gen::erdos_renyi(10, 0.35, rng);
            std::vector<double> w;
            for (int i = 0; i < 10; ++i) w.push_back(0.25 + rng.uniform() * 2.0);
            g = g.with_weights(w);
            auto sol = mwis_exact(g);
            CHECK(sol.objective == doctest::Approx(ref::mwis_weight(g)).epsilon(1e-12));
            CHECK(classify_set(g, sol.set).independent);
        }
    }
    SUBCASE("tie broken to lexicographically smallest member list") {
        // C4: the two MIS are {0,2} and {1,3}.
        auto sol = mwis_exact(gen::cycle(4));
        CHECK(sol.set.members == std::vector<int>{0, 2});
        // C6 uniform: {0,2,4} is the lex-smallest of several optima.
        auto sol6 = mwis_exact(gen::cycle(6));
        CHECK(sol6.set.members == std::vector<int>{0, 2, 4});
    }
    SUBCASE("tiny node budget returns best-so-far, flagged") {
        Caps caps;
        caps.max_nodes = 3;
        Rng rng(1);
        auto sol = mwis_exact(gen::erdos_renyi(12, 0.3, rng), caps);
        CHECK_FALSE(sol.optimal);
    }
}

TEST_CASE("partition_function") {
    SUBCASE("P3 counting") {
        auto r = partition_function(gen::path(3), 1.0);
        CHECK(r.z == 5.0);
        CHECK(r.count_mode);
    }
    SUBCASE("paths count as Fibonacci(n+2)") {
        double fib[30];
        fib[0] = 0;
        fib[1] = 1;
        for (int i = 2; i < 30; ++i) fib[i] = fib[i - 1] + fib[i - 2];
        for (int n = 1; n <= 20; ++n) {
            auto r = partition_function(gen::path(n), 1.0);
            CHECK(r.z == fib[n + 2]);
        }
    }
    SUBCASE("single vertex with activity") {
        auto r = partition_function(gen::empty(1), 0.25);
        CHECK(r.z == doctest::Approx(1.25));
        CHECK_FALSE(r.count_mode);
    }
    SUBCASE("matches brute force with per-vertex activities") {
        Rng rng(17);
        for (int t = 0; t < 20; ++t) {
            Graph g = gen::erdos_renyi(9, 0.4, rng);
            std::vector<double> nu;
            for (int i = 0; i < 9; ++i) nu.push_back(rng.uniform() * 3.0);
            auto r = partition_function(g, nu);
            double zref = ref::partition_function(g, nu);
            CHECK(r.z == doctest::Approx(zref).epsilon(1e-12));
        }
    }
    SUBCASE("deletion-contraction recurrence holds at every vertex") {
        Rng rng(18);
        for (double nu : {0.3, 1.0, 3.0}) {
            Graph g = gen::erdos_renyi(12, 0.3, rng);
            double z = partition_function(g, nu).z;
            for (int v = 0; v < g.n(); ++v) {
                auto s = make_vertex_set(g, {v});
                double zm = partition_function(delete_vertices(g, s, false).graph, nu).z;
                double zc = partition_function(delete_vertices(g, s, true).graph, nu).z;
                CHECK(std::abs(z - (zm + nu * zc)) <= 1e-12 * std::abs(z));
            }
        }
    }
    SUBCASE("negative activity is an input error") {
        CHECK_THROWS_AS(partition_function(gen::path(2), -0.5), InputError);
    }
}

TEST_CASE("expectation") {
    Graph one = gen::empty(1);
    std::vector<double> nu1{1.0};
    auto size_f = [](const VertexSet& s) { return static_cast<double>(s.members.size()); };
    CHECK(expectation(one, nu1, size_f) == doctest::Approx(0.5));

    Graph p3 = gen::path(3);
    std::vector<double> nu3(3, 1.0);
    // Sizes over the five independent sets of P3 are 0,1,1,1,2.
    CHECK(expectation(p3, nu3, size_f) == doctest::Approx(1.0));
    CHECK(expectation(p3, nu3, [](const VertexSet&) { return 1.0; }) == doctest::Approx(1.0));
}

TEST_CASE("dominating set family") {
    Graph star = gen::star(3);
    SUBCASE("star center dominates") {
        CHECK(mds_exact(star).set.members == std::vector<int>{0});
        CHECK(mcds_exact(star).set.members == std::vector<int>{0});
        CHECK(min_maximal_is_exact(star).set.members == std::vector<int>{0});
    }
    SUBCASE("P5 needs two dominators") {
        auto sol = mds_exact(gen::path(5));
        CHECK(sol.set.members.size() == 2); // exhaustive: e.g. {1,3}
        CHECK(classify_set(gen::path(5), sol.set).dominating);
    }
    SUBCASE("K3 dominated by any singleton") {
        auto sol = mds_exact(gen::complete(3));
        CHECK(sol.set.members.size() == 1);
    }
    SUBCASE("mcds requires connectivity") {
        CHECK_THROWS_AS(mcds_exact(gen::empty(2)), InputError);
    }
    SUBCASE("sizes match brute force on random graphs") {
        Rng rng(23);
        for (int t = 0; t < 15; ++t) {
            Graph g = gen::erdos_renyi(8, 0.35, rng);
            CHECK(static_cast<int>(mds_exact(g).set.members.size()) == ref::mds_size(g));
        }
    }
    SUBCASE("every result re-passes its defining predicate") {
        Rng rng(29);
        for (int t = 0; t < 10; ++t) {
            Graph g = gen::random_connected_unit_disk(9, 1.0, 2.2, rng);
            auto mds = mds_exact(g);
            CHECK(classify_set(g, mds.set).dominating);
            auto mcds = mcds_exact(g);
            auto fc = classify_set(g, mcds.set);
            CHECK(fc.dominating);
            CHECK(fc.connected);
            auto mmis = min_maximal_is_exact(g);
            CHECK(classify_set(g, mmis.set).maximal_independent);
            CHECK(mds.set.members.size() <= mcds.set.members.size());
            CHECK(mcds.set.members.size() <= 3 * mds.set.members.size());
            CHECK(mmis.set.members.size() >= mds.set.members.size());
            double mis = mwis_exact(g).objective;
            CHECK(mis <= 3.8 * static_cast<double>(mcds.set.members.size()) + 1.2);
        }
    }
}

TEST_CASE("chromatic number") {
    CHECK(chromatic_number_exact(gen::complete(3)).chromatic_number == 3);
    CHECK(chromatic_number_exact(gen::path(3)).chromatic_number == 2);
    CHECK(chromatic_number_exact(gen::cycle(5)).chromatic_number == 3); // odd cycle
    SUBCASE("witness coloring is proper") {
        Rng rng(31);
        for (int t = 0; t < 10; ++t) {
            Graph g = gen::erdos_renyi(8, 0.5, rng);
            auto res = chromatic_number_exact(g);
            int used = 0;
            for (auto [u, v] : g.edges())
                CHECK(res.colors[static_cast<std::size_t>(u)] != res.colors[static_cast<std::size_t>(v)]);
            for (int c : res.colors) used = std::max(used, c + 1);
            CHECK(used == res.chromatic_number);
        }
    }
}

TEST_CASE("gallai and clique dualities") {
    Rng rng(37);
    for (int t = 0; t < 25; ++t) {
        Graph g = gen::erdos_renyi(10, 0.3, rng);
        auto mis = mwis_exact(g);
        int alpha = static_cast<int>(mis.set.members.size());
        CHECK(alpha + ref::min_vertex_cover_size(g) == g.n());
        CHECK(alpha == ref::max_clique_size(complement(g)));
    }
}

TEST_CASE("solution json shape") {
    auto sol = mwis_exact(gen::path(3));
    auto j = solution_to_json(sol);
    CHECK(j["problem"] == "mwis");
    CHECK(j["set"] == std::vector<int>{0, 2});
    CHECK(j["objective"] == 2.0);
    CHECK(j["optimal"] == true);
}

}
