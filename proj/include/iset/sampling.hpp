#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "iset/graph.hpp"

namespace iset::sampling {

// Gibbs chain configuration. Negative burn_in/thinning select the defaults
// calibrated on small graphs: burn_in = 10 * n * max(1, nu_max), thinning = n.
struct SamplerConfig {
    std::uint64_t seed = 0;
    long long burn_in = -1;
    long long thinning = -1;
    std::vector<double> activities; // per-vertex nu > 0
};

SamplerConfig uniform_config(const Graph& g, std::uint64_t seed, double activity = 1.0);

enum class GreedyOrder { uniform, degree_biased };

// Maximal independent set grown along a uniformly random vertex order.
// Deterministic for a fixed seed. The degree-biased order (vertices drawn
// with probability proportional to 1/(1+deg)) is available but non-default.
VertexSet greedy_maximal_is(const Graph& g, std::uint64_t seed,
                            GreedyOrder order = GreedyOrder::uniform);

// Single-site Metropolis chain over the independent-set family, stationary
// for P(I) proportional to prod_{i in I} nu_i. Every emitted set is
// independent by construction.
std::vector<VertexSet> gibbs_sample_is(const Graph& g, const SamplerConfig& cfg,
                                       std::size_t n_samples);

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};

// Sample mean and standard error of f; requires at least two samples.
Estimate estimate_expectation(const std::vector<VertexSet>& samples,
                              const std::function<double(const VertexSet&)>& f);

// JSON-lines dump: one header record with config + seed, then one set per line.
void write_samples_jsonl(const std::filesystem::path& path, const Graph& g,
                         const SamplerConfig& cfg, const std::vector<VertexSet>& samples,
                         const std::string& sampler_name);

} // namespace iset::sampling
