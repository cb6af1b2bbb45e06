#pragma once

#include <cstdint>
#include <vector>

#include "iset/graph.hpp"
#include <json.hpp>

namespace iset::postprocess {

// Audit record for one classical pipeline step.
struct PipelineTrace {
    std::string stage;
    VertexSet input_set;
    VertexSet output_set;
    std::vector<int> added;   // in application order
    std::vector<int> removed; // in application order
    double objective_before = 0.0;
    double objective_after = 0.0;
};

nlohmann::json trace_to_json(const PipelineTrace& t);

// Maximal independent superset of s, grown along a random eligible-vertex
// order. s must already be independent.
VertexSet complete_to_maximal(const Graph& g, const VertexSet& s, std::uint64_t seed,
                              PipelineTrace* trace = nullptr);

// Removes, while violations exist, a uniformly random vertex among those
// with the maximal conflict count. Never grows the set.
VertexSet repair_to_independent(const Graph& g, const VertexSet& s, std::uint64_t seed,
                                PipelineTrace* trace = nullptr);

// Connects a dominating set by greedy component merging along shortest
// paths (length <= 3 between dominating-set components). Deterministic.
// Output size is at most 3x the input size.
VertexSet connect_dominating(const Graph& g, const VertexSet& d, PipelineTrace* trace = nullptr);

struct ImmunizationPlan {
    VertexSet immunized;
    double spread_score = 0.0; // lambda_max of the residual Laplacian
    bool residual_edgeless = false;
    PipelineTrace trace;
};

// k-budget immunization. With budget >= the vertex-cover size the residual
// graph is edgeless (score 0); otherwise a greedy 1-step-lookahead removal
// from a sampled cover minimizes the Laplacian spectral radius proxy.
ImmunizationPlan immunize_budget(const Graph& g, int k, std::uint64_t seed);

// Largest Laplacian eigenvalue by power iteration (tol 1e-9, <=1000 iters).
double laplacian_lambda_max(const Graph& g, std::uint64_t seed = 1);

} // namespace iset::postprocess
