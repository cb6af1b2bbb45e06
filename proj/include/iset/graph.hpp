#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace iset {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

double distance(const Vec2& a, const Vec2& b);

enum class GraphKind { general, geometric, unitdisk };

const char* to_string(GraphKind k);
GraphKind graph_kind_from_string(const std::string& s);

// Immutable vertex-weighted undirected graph on dense ids 0..n-1.
// Adjacency lives in per-vertex bit-rows (the operational source of truth);
// the sorted edge list is kept alongside for serialization.
class Graph {
public:
    Graph() = default;

    static Graph general(int n, std::vector<std::pair<int, int>> edges,
                         std::vector<double> weights = {});
    static Graph geometric(std::vector<Vec2> coords, std::vector<std::pair<int, int>> edges,
                           std::vector<double> weights = {});
    // Edge (i,j) iff |x_i - x_j| <= radius, boundary inclusive.
    static Graph unit_disk(std::vector<Vec2> coords, double radius,
                           std::vector<double> weights = {});

    int n() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<double>& weights() const { return weights_; }
    double weight(int v) const { return weights_[static_cast<std::size_t>(v)]; }
    GraphKind kind() const { return kind_; }
    const std::vector<Vec2>& coords() const { return coords_; } // empty when non-geometric
    std::optional<double> radius() const { return radius_; }

    std::size_t words() const { return words_; }
    std::span<const std::uint64_t> row(int v) const;
    bool adjacent(int u, int v) const;
    int degree(int v) const;
    bool connected() const;

    // Same structure, new weights (length n, finite).
    Graph with_weights(std::vector<double> w) const;

    std::vector<int> neighbors(int v) const;

private:
    int n_ = 0;
    std::size_t words_ = 0;
    GraphKind kind_ = GraphKind::general;
    std::vector<double> weights_;
    std::vector<std::pair<int, int>> edges_; // sorted, i < j
    std::vector<std::uint64_t> rows_;        // n * words bit-matrix
    std::vector<Vec2> coords_;
    std::optional<double> radius_;

    void build_rows();
    void validate() const;
};

// Vertex subset with cached total weight. Always construct through
// make_vertex_set so the cache matches the graph it was taken from.
struct VertexSet {
    std::vector<int> members; // sorted, distinct
    double weight = 0.0;
};

VertexSet make_vertex_set(const Graph& g, std::vector<int> members);
VertexSet vertex_set_from_mask(const Graph& g, std::uint64_t mask);
std::uint64_t mask_from_set(const VertexSet& s); // requires max member < 64

struct SetFlags {
    bool independent = false;
    bool maximal_independent = false;
    bool clique = false;
    bool vertex_cover = false;
    bool dominating = false;
    bool connected = false; // empty set counts as connected
};

SetFlags classify_set(const Graph& g, const VertexSet& s);

Graph complement(const Graph& g);

struct Deletion {
    Graph graph;
    std::vector<int> old_of_new; // surviving old id per new id
    std::vector<int> new_of_old; // -1 for removed vertices
};

// closed=false removes s; closed=true removes s together with all neighbors.
Deletion delete_vertices(const Graph& g, const VertexSet& s, bool closed);

// Induced subgraph on `keep` (sorted old ids).
Deletion induced_subgraph(const Graph& g, const std::vector<int>& keep);

} // namespace iset
