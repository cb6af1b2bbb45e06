#include <doctest.h>

#include <cmath>
#include <map>

#include "iset/errors.hpp"
#include "iset/gen.hpp"
#include "iset/oracle.hpp"
#include "iset/sampling.hpp"
#include "ref_oracles.hpp"

using namespace iset;
using namespace iset::sampling;

namespace {

// Total variation between empirical sample frequencies and the exact
// hard-core Gibbs distribution from enumeration.
double tv_against_exact(const Graph& g, const std::vector<VertexSet>& samples, double nu) {
    std::vector<double> act(static_cast<std::size_t>(g.n()), nu);
    double z = oracle::partition_function(g, act).z;
    std::map<std::uint64_t, double> exact;
    oracle::enumerate_independent_sets(g, [&](const VertexSet& s) {
        exact[mask_from_set(s)] = std::pow(nu, static_cast<double>(s.members.size())) / z;
    });
    std::map<std::uint64_t, double> freq;
    for (const auto& s : samples) freq[mask_from_set(s)] += 1.0 / static_cast<double>(samples.size());
    double tv = 0.0;
    for (const auto& [mask, p] : exact) {
        auto it = freq.find(mask);
        double q = it == freq.end() ? 0.0 : it->second;
        tv += std::abs(p - q);
    }
    for (const auto& [mask, q] : freq)
        if (!exact.count(mask)) tv += q;
    return tv / 2.0;
}

} // namespace

TEST_SUITE("sampling") {

TEST_CASE("greedy_maximal_is basics") {
    SUBCASE("empty graph takes all vertices") {
        Graph g = gen::empty(5);
        for (std::uint64_t seed : {1ull, 2ull, 3ull})
            CHECK(greedy_maximal_is(g, seed).members.size() == 5);
    }
    SUBCASE("K3 yields a singleton") {
        Graph g = gen::complete(3);
        for (std::uint64_t seed : {1ull, 2ull, 3ull})
            CHECK(greedy_maximal_is(g, seed).members.size() == 1);
    }
    SUBCASE("deterministic for a fixed seed") {
        Rng rng(4);
        Graph g = gen::erdos_renyi(20, 0.3, rng);
        CHECK(greedy_maximal_is(g, 99).members == greedy_maximal_is(g, 99).members);
    }
    SUBCASE("P3 hits only the two maximal sets with the exact greedy odds") {
        // First pick uniform over {0,1,2}: picking the middle gives {1},
        // either end gives {0,2}; so P({0,2}) = 2/3 by Markov analysis.
        Graph p3 = gen::path(3);
        int ends = 0, middle = 0;
        const int trials = 10000;
        for (int s = 0; s < trials; ++s) {
            auto m = greedy_maximal_is(p3, static_cast<std::uint64_t>(s)).members;
            if (m == std::vector<int>{0, 2})
                ++ends;
            else if (m == std::vector<int>{1})
                ++middle;
        }
        CHECK(ends + middle == trials);
        CHECK(std::abs(ends / double(trials) - 2.0 / 3.0) < 0.02);
    }
    SUBCASE("outputs are maximal independent, hence dominating") {
        Rng rng(8);
        for (int t = 0; t < 20; ++t) {
            Graph g = gen::erdos_renyi(15, 0.3, rng);
            auto s = greedy_maximal_is(g, static_cast<std::uint64_t>(t));
            auto f = classify_set(g, s);
            CHECK(f.independent);
            CHECK(f.maximal_independent);
            CHECK(f.dominating);
        }
    }
    SUBCASE("degree-biased order still yields maximal sets") {
        Rng rng(9);
        Graph g = gen::erdos_renyi(12, 0.4, rng);
        auto s = greedy_maximal_is(g, 5, GreedyOrder::degree_biased);
        CHECK(classify_set(g, s).maximal_independent);
    }
}

TEST_CASE("gibbs sampler") {
    SUBCASE("single vertex at nu=1 occupies half the time") {
        Graph g = gen::empty(1);
        auto samples = gibbs_sample_is(g, uniform_config(g, 11), 20000);
        double occ = 0;
        for (const auto& s : samples) occ += s.members.empty() ? 0.0 : 1.0;
        occ /= static_cast<double>(samples.size());
        CHECK(std::abs(occ - 0.5) < 0.02);
    }
    SUBCASE("P3 at nu=1 is near-uniform over the five sets") {
        Graph g = gen::path(3);
        auto samples = gibbs_sample_is(g, uniform_config(g, 12), 20000);
        CHECK(tv_against_exact(g, samples, 1.0) < 0.05);
    }
    SUBCASE("K3 at large nu leaves the empty set with probability 1/(1+3nu)") {
        Graph g = gen::complete(3);
        double nu = 100.0;
        auto samples = gibbs_sample_is(g, uniform_config(g, 13, nu), 40000);
        double empty_freq = 0, singleton = 0;
        for (const auto& s : samples) {
            if (s.members.empty())
                ++empty_freq;
            else if (s.members.size() == 1)
                ++singleton;
        }
        empty_freq /= static_cast<double>(samples.size());
        singleton /= static_cast<double>(samples.size());
        CHECK(std::abs(empty_freq - 1.0 / (1.0 + 3 * nu)) < 0.01);
        CHECK(singleton > 0.98);
    }
    SUBCASE("every emitted set is independent") {
        Rng rng(21);
        Graph g = gen::erdos_renyi(10, 0.4, rng);
        auto samples = gibbs_sample_is(g, uniform_config(g, 14, 2.0), 500);
        for (const auto& s : samples) CHECK(classify_set(g, s).independent);
    }
    SUBCASE("detailed balance on small graphs at mixed activities") {
        for (double nu : {0.5, 2.0}) {
            Graph g = gen::cycle(4);
            auto samples = gibbs_sample_is(g, uniform_config(g, 15, nu), 30000);
            CHECK(tv_against_exact(g, samples, nu) < 0.05);
        }
    }
    SUBCASE("per-vertex activities weight the stationary distribution") {
        Graph g = gen::path(3);
        SamplerConfig cfg = uniform_config(g, 18);
        cfg.activities = {0.5, 3.0, 0.5};
        auto samples = gibbs_sample_is(g, cfg, 30000);
        double z = oracle::partition_function(g, cfg.activities).z;
        std::map<std::uint64_t, double> exact;
        oracle::enumerate_independent_sets(g, [&](const VertexSet& s) {
            double p = 1.0;
            for (int v : s.members) p *= cfg.activities[static_cast<std::size_t>(v)];
            exact[mask_from_set(s)] = p / z;
        });
        std::map<std::uint64_t, double> freq;
        for (const auto& s : samples)
            freq[mask_from_set(s)] += 1.0 / static_cast<double>(samples.size());
        double tv = 0.0;
        for (const auto& [mask, p] : exact) {
            auto it = freq.find(mask);
            tv += std::abs(p - (it == freq.end() ? 0.0 : it->second));
        }
        CHECK(tv / 2.0 < 0.05);
    }
    SUBCASE("fixed seed reproduces the stream bit for bit") {
        Graph g = gen::path(5);
        auto a = gibbs_sample_is(g, uniform_config(g, 16), 50);
        auto b = gibbs_sample_is(g, uniform_config(g, 16), 50);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].members == b[i].members);
    }
    SUBCASE("invalid activities rejected") {
        Graph g = gen::path(2);
        SamplerConfig cfg = uniform_config(g, 1);
        cfg.activities[0] = 0.0;
        CHECK_THROWS_AS(gibbs_sample_is(g, cfg, 1), InputError);
    }
}

TEST_CASE("estimate_expectation") {
    Graph p3 = gen::path(3);
    auto size_f = [](const VertexSet& s) { return static_cast<double>(s.members.size()); };
    auto weight_f = [](const VertexSet& s) { return s.weight; };

    SUBCASE("constant function has zero error") {
        auto samples = gibbs_sample_is(p3, uniform_config(p3, 31), 100);
        auto est = estimate_expectation(samples, [](const VertexSet&) { return 1.0; });
        CHECK(est.mean == doctest::Approx(1.0));
        CHECK(est.std_error == doctest::Approx(0.0));
    }
    SUBCASE("mean set size converges to the oracle expectation") {
        auto samples = gibbs_sample_is(p3, uniform_config(p3, 32), 20000);
        auto est = estimate_expectation(samples, size_f);
        std::vector<double> ones(3, 1.0);
        double exact = oracle::expectation(p3, ones, size_f);
        CHECK(std::abs(est.mean - exact) < 5 * est.std_error + 0.02);
    }
    SUBCASE("weighted mean converges to 9/5 on P3 with weights 1,5,1") {
        Graph g = gen::path(3).with_weights({1, 5, 1});
        auto samples = gibbs_sample_is(g, uniform_config(g, 33), 20000);
        auto est = estimate_expectation(samples, weight_f);
        CHECK(std::abs(est.mean - 9.0 / 5.0) < 5 * est.std_error + 0.05);
    }
    SUBCASE("fewer than two samples is an error") {
        std::vector<VertexSet> none;
        CHECK_THROWS_AS(estimate_expectation(none, size_f), InputError);
    }
}

}
