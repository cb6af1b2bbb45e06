#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iset/graph.hpp"
#include "iset/oracle.hpp"
#include "iset/rydberg.hpp"
#include <json.hpp>

namespace iset::apps {

// ---- telecommunication loss networks ----------------------------------

struct RouteSet {
    Graph network;                        // nodes + links
    std::vector<std::vector<int>> routes; // link indices into network.edges()
    double activity = 1.0;                // uniform nu > 0
};

RouteSet route_set_from_json(const nlohmann::json& j);
nlohmann::json route_set_to_json(const RouteSet& rs);

// One vertex per route, an edge when two routes share a link.
Graph route_interaction_graph(const RouteSet& rs);

struct BlockingReport {
    std::vector<double> success;    // P(r) = Z(G\r)/Z(G)
    std::vector<double> failure;    // 1 - P(r)
    double z = 1.0;
};

BlockingReport blocking_probabilities(const RouteSet& rs, const oracle::Caps& caps = {});

// ---- incremental site planning -----------------------------------------

struct SitePlanProblem {
    std::vector<Vec2> candidates;
    double min_distance = 1.0;
    std::vector<double> weights;                  // empty = all 1
    std::vector<std::pair<std::uint64_t, double>> plan_probability; // by set mask; empty = uniform
};

SitePlanProblem site_plan_from_json(const nlohmann::json& j);

struct SiteScore {
    int candidate = 0;
    double score = 0.0;      // <w>_s
    double std_error = 0.0;  // sampler mode only
};

struct SitePlanResult {
    std::vector<SiteScore> ranked; // descending score, ties by lower id
    int best = 0;
    double z = 0.0;
    std::size_t n_plans = 0; // exact mode: number of maximal independent sets
    bool exact = true;
};

// Exact mode enumerates every maximal independent set (n <= cap); the
// normalization sums P over all plans, matching the displayed equations.
// conditional=true switches to the per-candidate conditional normalization.
SitePlanResult next_store_selection_exact(const SitePlanProblem& p, bool conditional = false,
                                          int cap = 18);

// Sequential greedy sampler with exact path-probability importance weights;
// unbiased for the same sums at any size.
SitePlanResult next_store_selection_sampled(const SitePlanProblem& p, std::size_t n_samples,
                                            std::uint64_t seed, bool conditional = false);

// ---- market graphs -------------------------------------------------------

enum class MarketMode { anticorrelated, correlated, uncorrelated };
const char* to_string(MarketMode m);
MarketMode market_mode_from_string(const std::string& s);

struct ReturnsMatrix {
    std::vector<std::string> names;          // per asset
    std::vector<std::vector<double>> series; // per asset, >= 2 points
    double threshold = 0.0;
    MarketMode mode = MarketMode::anticorrelated;
};

ReturnsMatrix returns_from_json(const nlohmann::json& j);

struct MarketGraphResult {
    Graph graph;                 // weights = shifted mean returns
    std::vector<int> kept;       // asset indices with defined correlations
    std::vector<int> excluded;   // zero-variance assets, dropped with warning
    std::vector<std::vector<double>> correlation; // over kept assets
    double weight_shift = 0.0;
};

MarketGraphResult market_graph(const ReturnsMatrix& r);

// ---- task scheduling -----------------------------------------------------

struct ScheduleProblem {
    std::vector<std::vector<int>> tasks; // asset-id sets
    int rounds = 1;                      // K
    std::vector<double> weights;         // per task, empty = 1
};

ScheduleProblem schedule_from_json(const nlohmann::json& j);

struct ScheduleResult {
    bool feasible = false;               // every task placed into a round
    std::vector<int> round;              // per task, -1 when excluded
    std::vector<int> excluded;
    Graph conflict_graph;
};

ScheduleResult schedule_tasks(const ScheduleProblem& p, const oracle::Caps& caps = {});

// ---- antenna placement ----------------------------------------------------

struct AntennaProblem {
    std::vector<Vec2> locations;
    std::vector<double> ranges;
    std::vector<double> values; // empty = 1
};

AntennaProblem antenna_from_json(const nlohmann::json& j);

struct AntennaPlan {
    Graph conflict_graph; // edge iff |x_i - x_j| <= r_i + r_j
    bool unit_disk = false; // all ranges equal
    oracle::ExactSolution placement;
    std::optional<rydberg::CompiledRun> compiled; // uniform-range case only
};

AntennaPlan antenna_plan(const AntennaProblem& p, const oracle::Caps& caps = {});

} // namespace iset::apps
