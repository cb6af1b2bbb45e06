#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "iset/graph.hpp"
#include <json.hpp>

namespace iset::oracle {

struct Caps {
    int enumeration = 24;      // enumerate_independent_sets / expectation
    int branch_and_bound = 60; // mwis_exact (64 is the hard bitset limit)
    int subset_search = 20;    // mds / mcds / minimum maximal IS
    int chromatic = 12;
    std::uint64_t max_nodes = 200'000'000; // deterministic search budget
    std::size_t memo_bytes = 1ull << 30;   // partition-function memo budget
};

struct PartitionFunctionResult {
    double z = 1.0;
    std::vector<double> activities;
    bool count_mode = false; // all activities exactly 1: z counts independent sets
};

struct ExactSolution {
    std::string problem;
    VertexSet set;
    double objective = 0.0;
    bool optimal = false;
    std::uint64_t nodes_explored = 0;
};

nlohmann::json solution_to_json(const ExactSolution& s);

// Emits every independent set exactly once, the empty set first, in
// increasing bitmask order (vertex 0 is the least significant bit).
void enumerate_independent_sets(const Graph& g, const std::function<void(const VertexSet&)>& emit,
                                const Caps& caps = {});
std::vector<VertexSet> all_independent_sets(const Graph& g, const Caps& caps = {});

// Maximum-weight independent set by branch and bound on the max-degree
// vertex with a greedy clique-cover weight bound. Ties in the optimum are
// broken to the lexicographically smallest member list. If the node budget
// runs out the incumbent is returned with optimal=false.
ExactSolution mwis_exact(const Graph& g, const Caps& caps = {});

// Z = sum over independent sets I of prod_{i in I} nu_i, computed by the
// deletion/contraction recurrence Z(G) = Z(G-v) + nu_v * Z(G-N[v]) with
// memoization on induced-subgraph bitmask keys.
PartitionFunctionResult partition_function(const Graph& g, std::vector<double> activities,
                                           const Caps& caps = {});
PartitionFunctionResult partition_function(const Graph& g, double activity, const Caps& caps = {});

// Exact weighted average of f over all independent sets.
double expectation(const Graph& g, const std::vector<double>& activities,
                   const std::function<double(const VertexSet&)>& f, const Caps& caps = {});

ExactSolution mds_exact(const Graph& g, const Caps& caps = {});
ExactSolution mcds_exact(const Graph& g, const Caps& caps = {}); // requires g connected
ExactSolution min_maximal_is_exact(const Graph& g, const Caps& caps = {});

struct ColoringResult {
    int chromatic_number = 0;
    std::vector<int> colors; // witness, one color per vertex
};

ColoringResult chromatic_number_exact(const Graph& g, const Caps& caps = {});

} // namespace iset::oracle
