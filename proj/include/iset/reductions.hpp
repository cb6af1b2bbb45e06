#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "iset/graph.hpp"
#include <json.hpp>

namespace iset::reduce {

enum class SourceKind { coloring, sat, paintshop, clique, vertex_cover };
const char* to_string(SourceKind k);

struct Cnf {
    int n_vars = 0;
    std::vector<std::vector<int>> clauses; // signed DIMACS literals, 1-based
};

Cnf parse_dimacs(const std::string& text);
std::string to_dimacs(const Cnf& cnf);

struct ColoringGadget {
    int k = 0;
    int source_n = 0;
    std::vector<std::pair<int, int>> source_edges;
};

struct SatGadget {
    Cnf cnf;
    std::vector<std::pair<int, int>> occurrences; // derived vertex -> (clause, literal)
};

struct PaintshopGadget {
    std::vector<int> seq; // car id per position, each car exactly twice
    int n_cars = 0;
    double base = 0.0; // switches = base - MWIS objective
};

struct CliqueGadget {};
struct CoverGadget {};

using GadgetInfo = std::variant<ColoringGadget, SatGadget, PaintshopGadget, CliqueGadget, CoverGadget>;

// Derived MIS/MWIS instance plus everything needed to decode its solutions
// back to the source problem.
struct ReductionCertificate {
    SourceKind source_kind = SourceKind::clique;
    Graph derived;
    double threshold = 0.0; // derived objective certifying a YES decision
    GadgetInfo gadget;
};

nlohmann::json certificate_to_json(const ReductionCertificate& cert);
ReductionCertificate certificate_from_json(const nlohmann::json& j);

// K copies of each vertex joined into per-vertex cliques; color-respecting
// edges mirror the source edges. MIS(derived) = |V| iff g is K-colorable.
ReductionCertificate coloring_to_mis(const Graph& g, int k);

// One vertex per literal occurrence, a clique per clause, and an edge
// between every pair of complementary occurrences; satisfiable iff the MIS
// size reaches the clause count. Returns nullopt when an empty clause makes
// the formula trivially unsatisfiable (no graph is built).
std::optional<ReductionCertificate> sat_to_mis(const Cnf& cnf);

// Binary paint shop as MWIS: a two-vertex choice gadget per car plus
// bonus vertices rewarding switch-free boundaries; the optimal switch count
// is base - MWIS weight.
ReductionCertificate paintshop_to_mwis(const std::vector<int>& seq);
std::vector<int> paintshop_seq_from_string(const std::string& word); // "ABAB" style

enum class Which { max_clique, min_vertex_cover };
ReductionCertificate clique_or_cover(const Graph& g, Which which);

struct ColoringAnswer {
    bool complete = false;        // every source vertex colored
    std::vector<int> colors;      // -1 where uncolored
    std::vector<int> uncolored;
    bool valid = false; // selected colors are proper on the colored subgraph
};

struct SatAnswer {
    bool satisfiable_at_threshold = false;
    std::vector<char> assignment; // per variable, unconstrained default false
    bool valid = false;           // assignment verified against every clause
};

struct PaintshopAnswer {
    std::vector<int> first_colors;    // 0=R, 1=B per car
    std::vector<int> position_colors; // per sequence position
    int switches = 0;
    bool valid = false; // exactly one choice vertex selected per car
};

struct CliqueAnswer {
    std::vector<int> clique;
    bool valid = false;
};

struct CoverAnswer {
    std::vector<int> cover;
    bool valid = false;
};

using Decoded = std::variant<ColoringAnswer, SatAnswer, PaintshopAnswer, CliqueAnswer, CoverAnswer>;

// Maps an independent set of the derived graph back to a typed source-domain
// answer, with a validity flag from direct source-side verification.
Decoded decode(const ReductionCertificate& cert, const VertexSet& solution);

nlohmann::json decoded_to_json(const Decoded& d);

} // namespace iset::reduce
