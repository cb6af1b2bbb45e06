#include <doctest.h>

#include <cmath>

#include "iset/apps.hpp"
#include "iset/errors.hpp"
#include "iset/json_io.hpp"
#include "iset/reductions.hpp"
#include "iset/gen.hpp"
#include "iset/rng.hpp"
#include "ref_oracles.hpp"

using namespace iset;
using namespace iset::apps;

namespace {

RouteSet make_route_set(const Graph& network, std::vector<std::vector<int>> routes, double nu) {
    RouteSet rs;
    rs.network = network;
    rs.routes = std::move(routes);
    rs.activity = nu;
    return rs;
}

// Straight double loop over all maximal independent sets (test oracle).
std::vector<double> brute_site_scores(const Graph& g) {
    auto mis_list = ref::all_maximal_independent_sets(g);
    double z = static_cast<double>(mis_list.size());
    std::vector<double> scores(static_cast<std::size_t>(g.n()), 0.0);
    for (int s = 0; s < g.n(); ++s) {
        double acc = 0.0;
        for (auto mask : mis_list)
            if (mask & (1u << s)) acc += ref::set_weight(g, mask);
        scores[static_cast<std::size_t>(s)] = acc / z;
    }
    return scores;
}

} // namespace

TEST_SUITE("apps") {

TEST_CASE("route interaction graph") {
    // network: a path with 4 links
    Graph net = gen::path(5);
    SUBCASE("disjoint routes do not interact") {
        auto rs = make_route_set(net, {{0}, {2}, {3}}, 1.0);
        Graph g = route_interaction_graph(rs);
        CHECK(g.n() == 3);
        CHECK(g.edge_count() == 0);
    }
    SUBCASE("shared link creates an edge") {
        auto rs = make_route_set(net, {{0, 1}, {1, 2}}, 1.0);
        Graph g = route_interaction_graph(rs);
        CHECK(g.edge_count() == 1);
    }
    SUBCASE("chain of overlaps gives a path shape") {
        auto rs = make_route_set(net, {{0, 1}, {1, 2}, {3}}, 1.0);
        Graph g = route_interaction_graph(rs);
        CHECK(g.edges() == std::vector<std::pair<int, int>>{{0, 1}});
    }
    SUBCASE("unknown link id rejected") {
        nlohmann::json j;
        j["network"] = graph_to_json(net);
        j["routes"] = {{9}};
        CHECK_THROWS_AS(route_set_from_json(j), InputError);
    }
}

TEST_CASE("blocking probabilities") {
    Graph net = gen::path(5);
    SUBCASE("single route has P = 1/(1+nu)") {
        for (double nu : {0.25, 1.0, 4.0}) {
            auto rep = blocking_probabilities(make_route_set(net, {{0, 1}}, nu));
            CHECK(rep.success[0] == doctest::Approx(1.0 / (1.0 + nu)).epsilon(1e-12));
        }
    }
    SUBCASE("two disjoint routes at nu=1 have P = 1/2") {
        auto rep = blocking_probabilities(make_route_set(net, {{0}, {2}}, 1.0));
        CHECK(rep.success[0] == doctest::Approx(0.5));
        CHECK(rep.success[1] == doctest::Approx(0.5));
    }
    SUBCASE("vanishing activity frees every route") {
        auto rep = blocking_probabilities(make_route_set(net, {{0, 1}, {1, 2}, {2, 3}}, 1e-9));
        for (double p : rep.success) CHECK(p == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("probabilities live in (0,1] and fall as nu grows") {
        Rng rng(3);
        for (int t = 0; t < 5; ++t) {
            // random route set over a random network
            Graph network = gen::erdos_renyi(8, 0.4, rng);
            if (network.edge_count() == 0) continue;
            std::vector<std::vector<int>> routes;
            for (int r = 0; r < 6; ++r) {
                std::vector<int> links;
                int len = 1 + static_cast<int>(rng.below(3));
                for (int i = 0; i < len; ++i)
                    links.push_back(static_cast<int>(rng.below(network.edge_count())));
                routes.push_back(links);
            }
            std::vector<double> prev;
            for (double nu : {0.3, 1.0, 3.0}) {
                auto rep = blocking_probabilities(make_route_set(network, routes, nu));
                for (std::size_t r = 0; r < rep.success.size(); ++r) {
                    CHECK(rep.success[r] > 0.0);
                    CHECK(rep.success[r] <= 1.0 + 1e-12);
                    if (!prev.empty()) CHECK(rep.success[r] <= prev[r] + 1e-12);
                }
                prev = rep.success;
            }
        }
    }
}

TEST_CASE("site planning") {
    SUBCASE("single candidate") {
        SitePlanProblem p;
        p.candidates = {{0, 0}};
        p.min_distance = 1.0;
        auto res = next_store_selection_exact(p);
        CHECK(res.best == 0);
        CHECK(res.ranked[0].score == doctest::Approx(1.0)); // w * P / Z with one plan
        CHECK(res.n_plans == 1);
    }
    SUBCASE("two far candidates tie, broken by lower id") {
        SitePlanProblem p;
        p.candidates = {{0, 0}, {5, 0}};
        p.min_distance = 1.0;
        auto res = next_store_selection_exact(p);
        CHECK(res.best == 0);
        CHECK(res.ranked[0].score == doctest::Approx(res.ranked[1].score));
    }
    SUBCASE("P3-shaped candidates prefer the ends") {
        SitePlanProblem p;
        p.candidates = {{0, 0}, {1, 0}, {2, 0}};
        p.min_distance = 1.2;
        auto res = next_store_selection_exact(p);
        // plans: {1} and {0,2}; ends score 2/2 = 1, middle scores 1/2
        CHECK(res.n_plans == 2);
        CHECK(res.best == 0);
        REQUIRE(res.ranked.size() == 3);
        CHECK(res.ranked[0].score == doctest::Approx(1.0));
        CHECK(res.ranked[1].score == doctest::Approx(1.0));
        CHECK(res.ranked[2].candidate == 1);
        CHECK(res.ranked[2].score == doctest::Approx(0.5));
    }
    SUBCASE("exact matches the straight double loop on random instances") {
        Rng rng(7);
        for (int t = 0; t < 10; ++t) {
            int n = 4 + static_cast<int>(rng.below(5));
            SitePlanProblem p;
            for (int i = 0; i < n; ++i)
                p.candidates.push_back({rng.uniform() * 3.0, rng.uniform() * 3.0});
            p.min_distance = 1.0;
            auto res = next_store_selection_exact(p);
            Graph g = Graph::unit_disk(p.candidates, p.min_distance);
            auto brute = brute_site_scores(g);
            for (const auto& sc : res.ranked)
                CHECK(sc.score ==
                      doctest::Approx(brute[static_cast<std::size_t>(sc.candidate)]).epsilon(1e-10));
        }
    }
    SUBCASE("sampler agrees with exact within three standard errors") {
        Rng rng(11);
        for (int t = 0; t < 5; ++t) {
            SitePlanProblem p;
            for (int i = 0; i < 7; ++i)
                p.candidates.push_back({rng.uniform() * 2.5, rng.uniform() * 2.5});
            p.min_distance = 1.0;
            auto exact = next_store_selection_exact(p);
            auto sampled = next_store_selection_sampled(p, 20000, 17 + t);
            std::vector<double> exact_by_id(7), sampled_by_id(7), se_by_id(7);
            for (const auto& sc : exact.ranked)
                exact_by_id[static_cast<std::size_t>(sc.candidate)] = sc.score;
            for (const auto& sc : sampled.ranked) {
                sampled_by_id[static_cast<std::size_t>(sc.candidate)] = sc.score;
                se_by_id[static_cast<std::size_t>(sc.candidate)] = sc.std_error;
            }
            for (int v = 0; v < 7; ++v) {
                double tol = 3.0 * se_by_id[static_cast<std::size_t>(v)] + 1e-9;
                CHECK(std::abs(sampled_by_id[static_cast<std::size_t>(v)] -
                               exact_by_id[static_cast<std::size_t>(v)]) <= tol);
            }
        }
    }
    SUBCASE("conditional sampler agrees with conditional exact scores") {
        Rng rng(19);
        SitePlanProblem p;
        for (int i = 0; i < 6; ++i)
            p.candidates.push_back({rng.uniform() * 2.2, rng.uniform() * 2.2});
        p.min_distance = 1.0;
        auto exact = next_store_selection_exact(p, true);
        auto sampled = next_store_selection_sampled(p, 20000, 23, true);
        std::vector<double> exact_by_id(6), sampled_by_id(6), se_by_id(6);
        for (const auto& sc : exact.ranked)
            exact_by_id[static_cast<std::size_t>(sc.candidate)] = sc.score;
        for (const auto& sc : sampled.ranked) {
            sampled_by_id[static_cast<std::size_t>(sc.candidate)] = sc.score;
            se_by_id[static_cast<std::size_t>(sc.candidate)] = sc.std_error;
        }
        for (int v = 0; v < 6; ++v)
            CHECK(std::abs(sampled_by_id[static_cast<std::size_t>(v)] -
                           exact_by_id[static_cast<std::size_t>(v)]) <=
                  3.0 * se_by_id[static_cast<std::size_t>(v)] + 1e-9);
    }
    SUBCASE("conditional normalization flag changes the denominator") {
        SitePlanProblem p;
        p.candidates = {{0, 0}, {1, 0}, {2, 0}};
        p.min_distance = 1.2;
        auto res = next_store_selection_exact(p, true);
        // conditional on being in the plan, the middle candidate scores its own plan weight
        for (const auto& sc : res.ranked)
            if (sc.candidate == 1) CHECK(sc.score == doctest::Approx(1.0));
    }
    SUBCASE("cap enforced") {
        SitePlanProblem p;
        for (int i = 0; i < 20; ++i) p.candidates.push_back({static_cast<double>(i), 0.0});
        p.min_distance = 0.5;
        CHECK_THROWS_AS(next_store_selection_exact(p), SizeCapError);
    }
}

TEST_CASE("market graph") {
    SUBCASE("identical series correlate at +1") {
        ReturnsMatrix r;
        r.series = {{1, 2, 3}, {1, 2, 3}};
        r.mode = MarketMode::correlated;
        r.threshold = 0.5;
        auto res = market_graph(r);
        CHECK(res.graph.edge_count() == 1);

        r.mode = MarketMode::anticorrelated;
        r.threshold = -0.5;
        CHECK(market_graph(r).graph.edge_count() == 0);
    }
    SUBCASE("a series and its negation correlate at -1") {
        ReturnsMatrix r;
        r.series = {{1, -2, 3}, {-1, 2, -3}};
        r.mode = MarketMode::anticorrelated;
        r.threshold = -0.5;
        auto res = market_graph(r);
        CHECK(res.graph.edge_count() == 1);
    }
    SUBCASE("anticorrelated triangle becomes the max clique") {
        // three series pairwise correlated at -1/2, one outlier tracking #0
        ReturnsMatrix r;
        r.series = {{1.0, -0.5, -0.5},
                    {-0.5, 1.0, -0.5},
                    {-0.5, -0.5, 1.0},
                    {1.0, -0.5, -0.4}};
        r.mode = MarketMode::anticorrelated;
        r.threshold = -0.4;
        auto res = market_graph(r);
        REQUIRE(res.kept.size() == 4);
        // max clique of the market graph = MIS of its complement
        auto cert = iset::reduce::clique_or_cover(res.graph, iset::reduce::Which::max_clique);
        auto mis = oracle::mwis_exact(cert.derived.with_weights(std::vector<double>(4, 1.0)));
        CHECK(ref::max_clique_size(res.graph) == 3);
        CHECK(mis.set.members.size() == 3);
        auto ans = std::get<iset::reduce::CliqueAnswer>(
            iset::reduce::decode(cert, make_vertex_set(cert.derived, mis.set.members)));
        CHECK(ans.clique == std::vector<int>{0, 1, 2});
    }
    SUBCASE("zero-variance assets are excluded with a warning entry") {
        ReturnsMatrix r;
        r.series = {{1, 1, 1}, {1, 2, 3}, {3, 1, 2}};
        r.mode = MarketMode::correlated;
        r.threshold = 0.0;
        auto res = market_graph(r);
        CHECK(res.excluded == std::vector<int>{0});
        CHECK(res.kept == std::vector<int>{1, 2});
        CHECK(res.graph.n() == 2);
    }
    SUBCASE("threshold sign must match the mode") {
        ReturnsMatrix r;
        r.series = {{1, 2}, {2, 1}};
        r.mode = MarketMode::anticorrelated;
        r.threshold = 0.3;
        CHECK_THROWS_AS(market_graph(r), InputError);
    }
    SUBCASE("weights are positive after the recorded shift") {
        ReturnsMatrix r;
        r.series = {{-1, -2, -3}, {1, 2, 3}};
        r.mode = MarketMode::correlated;
        r.threshold = 0.0;
        auto res = market_graph(r);
        for (double w : res.graph.weights()) CHECK(w > 0.0);
        CHECK(res.weight_shift > 0.0);
    }
    SUBCASE("at threshold zero the two signed modes cover every correlated pair") {
        Rng rng(13);
        ReturnsMatrix r;
        for (int i = 0; i < 5; ++i) {
            std::vector<double> s;
            for (int k = 0; k < 6; ++k) s.push_back(rng.uniform() * 2.0 - 1.0);
            r.series.push_back(s);
        }
        r.mode = MarketMode::anticorrelated;
        r.threshold = 0.0;
        auto anti = market_graph(r);
        r.mode = MarketMode::correlated;
        auto corr = market_graph(r);
        for (int i = 0; i < 5; ++i)
            for (int j = i + 1; j < 5; ++j) {
                double theta = anti.correlation[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                bool in_anti = anti.graph.adjacent(i, j);
                bool in_corr = corr.graph.adjacent(i, j);
                if (theta != 0.0) CHECK(in_anti != in_corr);
            }
    }
}

TEST_CASE("task scheduling") {
    SUBCASE("disjoint tasks fit in one round") {
        ScheduleProblem p;
        p.tasks = {{0}, {1}, {2}};
        p.rounds = 1;
        auto res = schedule_tasks(p);
        CHECK(res.feasible);
        CHECK(res.round == std::vector<int>{0, 0, 0});
    }
    SUBCASE("two clashing tasks cannot share one round") {
        ScheduleProblem p;
        p.tasks = {{0, 1}, {1, 2}};
        p.rounds = 1;
        auto res = schedule_tasks(p);
        CHECK_FALSE(res.feasible);
        CHECK(res.excluded.size() == 1);
    }
    SUBCASE("five mutually clashing tasks with four rounds exclude exactly one") {
        ScheduleProblem p;
        // all tasks share asset 0, so the conflict graph is K5 (chromatic number 5)
        p.tasks = {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}};
        p.rounds = 4;
        CHECK(oracle::chromatic_number_exact(
                  schedule_tasks(p).conflict_graph)
                  .chromatic_number == 5);
        auto res = schedule_tasks(p);
        CHECK_FALSE(res.feasible);
        CHECK(res.excluded.size() == 1);
    }
    SUBCASE("assignments are proper colorings of the conflict graph") {
        Rng rng(17);
        for (int t = 0; t < 10; ++t) {
            ScheduleProblem p;
            int n_tasks = 4 + static_cast<int>(rng.below(3));
            for (int i = 0; i < n_tasks; ++i) {
                std::vector<int> assets;
                int len = 1 + static_cast<int>(rng.below(3));
                for (int a = 0; a < len; ++a) assets.push_back(static_cast<int>(rng.below(6)));
                p.tasks.push_back(assets);
            }
            p.rounds = 2 + static_cast<int>(rng.below(2));
            auto res = schedule_tasks(p);
            for (auto [u, v] : res.conflict_graph.edges()) {
                int ru = res.round[static_cast<std::size_t>(u)];
                int rv = res.round[static_cast<std::size_t>(v)];
                if (ru >= 0 && rv >= 0) CHECK(ru != rv);
            }
        }
    }
}

TEST_CASE("antenna placement") {
    SUBCASE("far antennas both broadcast") {
        AntennaProblem p;
        p.locations = {{0, 0}, {3, 0}};
        p.ranges = {1, 1};
        auto plan = antenna_plan(p);
        CHECK(plan.placement.set.members == std::vector<int>{0, 1});
        CHECK(plan.unit_disk);
        CHECK(plan.compiled.has_value());
    }
    SUBCASE("overlapping coverage keeps the more valuable antenna") {
        AntennaProblem p;
        p.locations = {{0, 0}, {1.5, 0}};
        p.ranges = {1, 1};
        p.values = {1.0, 2.0};
        auto plan = antenna_plan(p);
        CHECK(plan.placement.set.members == std::vector<int>{1});
    }
    SUBCASE("three collinear antennas keep the ends") {
        AntennaProblem p;
        p.locations = {{0, 0}, {1.5, 0}, {3.0, 0}};
        p.ranges = {1, 1, 1};
        auto plan = antenna_plan(p);
        CHECK(plan.placement.set.members == std::vector<int>{0, 2});
        CHECK(plan.placement.objective == doctest::Approx(2.0));
    }
    SUBCASE("mixed ranges flag a non-unit-disk conflict graph") {
        AntennaProblem p;
        p.locations = {{0, 0}, {2.2, 0}};
        p.ranges = {1, 1.5};
        auto plan = antenna_plan(p);
        CHECK_FALSE(plan.unit_disk);
        CHECK_FALSE(plan.compiled.has_value());
        CHECK(plan.conflict_graph.edge_count() == 1); // 2.2 <= 1 + 1.5
    }
}

}
