#include "iset/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <queue>

#include "iset/errors.hpp"
#include "iset/kernels.hpp"

namespace iset {

double distance(const Vec2& a, const Vec2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

const char* to_string(GraphKind k) {
    switch (k) {
        case GraphKind::general: return "general";
        case GraphKind::geometric: return "geometric";
        case GraphKind::unitdisk: return "unitdisk";
    }
    return "general";
}

GraphKind graph_kind_from_string(const std::string& s) {
    if (s == "general") return GraphKind::general;
    if (s == "geometric") return GraphKind::geometric;
    if (s == "unitdisk") return GraphKind::unitdisk;
    throw InputError("unknown graph kind: " + s);
}

namespace {

std::vector<std::pair<int, int>> canonical_edges(int n, std::vector<std::pair<int, int>> edges) {
    for (auto& [u, v] : edges) {
        if (u == v) throw InputError("self-loop on vertex " + std::to_string(u));
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw InputError("edge endpoint out of range");
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

std::vector<double> default_weights(int n, std::vector<double> w) {
    if (w.empty()) w.assign(static_cast<std::size_t>(n), 1.0);
    if (static_cast<int>(w.size()) != n) throw InputError("weight vector length mismatch");
    for (double x : w)
        if (!std::isfinite(x)) throw InputError("non-finite vertex weight");
    return w;
}

} // namespace

void Graph::build_rows() {
    words_ = static_cast<std::size_t>((n_ + 63) / 64);
    if (n_ == 0) words_ = 0;
    rows_.assign(static_cast<std::size_t>(n_) * words_, 0);
    for (const auto& [u, v] : edges_) {
        rows_[static_cast<std::size_t>(u) * words_ + static_cast<std::size_t>(v) / 64] |=
            1ull << (v % 64);
        rows_[static_cast<std::size_t>(v) * words_ + static_cast<std::size_t>(u) / 64] |=
            1ull << (u % 64);
    }
}

void Graph::validate() const {
    if (n_ < 0) throw InputError("negative vertex count");
    if (kind_ != GraphKind::general && static_cast<int>(coords_.size()) != n_)
        throw InputError("geometric graph requires one coordinate per vertex");
    for (const auto& c : coords_)
        if (!std::isfinite(c.x) || !std::isfinite(c.y)) throw InputError("non-finite coordinate");
}

Graph Graph::general(int n, std::vector<std::pair<int, int>> edges, std::vector<double> weights) {
    Graph g;
    g.n_ = n;
    g.kind_ = GraphKind::general;
    g.edges_ = canonical_edges(n, std::move(edges));
    g.weights_ = default_weights(n, std::move(weights));
    g.validate();
    g.build_rows();
    return g;
}

Graph Graph::geometric(std::vector<Vec2> coords, std::vector<std::pair<int, int>> edges,
                       std::vector<double> weights) {
    Graph g;
    g.n_ = static_cast<int>(coords.size());
    g.kind_ = GraphKind::geometric;
    g.coords_ = std::move(coords);
    g.edges_ = canonical_edges(g.n_, std::move(edges));
    g.weights_ = default_weights(g.n_, std::move(weights));
    g.validate();
    g.build_rows();
    return g;
}

Graph Graph::unit_disk(std::vector<Vec2> coords, double radius, std::vector<double> weights) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InputError("unit-disk radius must be positive");
    Graph g;
    g.n_ = static_cast<int>(coords.size());
    g.kind_ = GraphKind::unitdisk;
    g.coords_ = std::move(coords);
    g.radius_ = radius;
    g.weights_ = default_weights(g.n_, std::move(weights));
    g.validate();
    for (int i = 0; i < g.n_; ++i)
        for (int j = i + 1; j < g.n_; ++j)
            if (distance(g.coords_[static_cast<std::size_t>(i)],
                         g.coords_[static_cast<std::size_t>(j)]) <= radius)
                g.edges_.emplace_back(i, j);
    g.build_rows();
    return g;
}

std::span<const std::uint64_t> Graph::row(int v) const {
    return {rows_.data() + static_cast<std::size_t>(v) * words_, words_};
}

bool Graph::adjacent(int u, int v) const {
    if (u < 0 || v < 0 || u >= n_ || v >= n_) throw InputError("vertex id out of range");
    return (row(u)[static_cast<std::size_t>(v) / 64] >> (v % 64)) & 1ull;
}

int Graph::degree(int v) const {
    auto r = row(v);
    return static_cast<int>(kernels::active().popcount(r.data(), r.size()));
}

std::vector<int> Graph::neighbors(int v) const {
    std::vector<int> out;
    auto r = row(v);
    for (std::size_t w = 0; w < r.size(); ++w) {
        std::uint64_t bits = r[w];
        while (bits) {
            int b = std::countr_zero(bits);
            out.push_back(static_cast<int>(w * 64) + b);
            bits &= bits - 1;
        }
    }
    return out;
}

bool Graph::connected() const {
    if (n_ <= 1) return true;
    std::vector<char> seen(static_cast<std::size_t>(n_), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int u : neighbors(v)) {
            if (!seen[static_cast<std::size_t>(u)]) {
                seen[static_cast<std::size_t>(u)] = 1;
                ++count;
                q.push(u);
            }
        }
    }
    return count == n_;
}

Graph Graph::with_weights(std::vector<double> w) const {
    Graph g = *this;
    g.weights_ = default_weights(n_, std::move(w));
    return g;
}

VertexSet make_vertex_set(const Graph& g, std::vector<int> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    double w = 0.0;
    for (int v : members) {
        if (v < 0 || v >= g.n()) throw InputError("vertex id out of range in set");
        w += g.weight(v);
    }
    return VertexSet{std::move(members), w};
}

VertexSet vertex_set_from_mask(const Graph& g, std::uint64_t mask) {
    std::vector<int> members;
    while (mask) {
        int b = std::countr_zero(mask);
        members.push_back(b);
        mask &= mask - 1;
    }
    return make_vertex_set(g, std::move(members));
}

std::uint64_t mask_from_set(const VertexSet& s) {
    std::uint64_t m = 0;
    for (int v : s.members) {
        internal_check(v >= 0 && v < 64, "mask_from_set: vertex id exceeds 64-bit mask");
        m |= 1ull << v;
    }
    return m;
}

namespace {

std::vector<std::uint64_t> member_mask(const Graph& g, const VertexSet& s) {
    std::vector<std::uint64_t> m(g.words(), 0);
    for (int v : s.members) {
        if (v < 0 || v >= g.n()) throw InputError("vertex id out of range in set");
        m[static_cast<std::size_t>(v) / 64] |= 1ull << (v % 64);
    }
    return m;
}

bool set_connected(const Graph& g, const VertexSet& s) {
    if (s.members.empty()) return true; // documented convention
    std::vector<char> in(static_cast<std::size_t>(g.n()), 0);
    for (int v : s.members) in[static_cast<std::size_t>(v)] = 1;
    std::vector<char> seen(static_cast<std::size_t>(g.n()), 0);
    std::queue<int> q;
    q.push(s.members.front());
    seen[static_cast<std::size_t>(s.members.front())] = 1;
    std::size_t count = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int u : g.neighbors(v)) {
            if (in[static_cast<std::size_t>(u)] && !seen[static_cast<std::size_t>(u)]) {
                seen[static_cast<std::size_t>(u)] = 1;
                ++count;
                q.push(u);
            }
        }
    }
    return count == s.members.size();
}

} // namespace

SetFlags classify_set(const Graph& g, const VertexSet& s) {
    const auto& k = kernels::active();
    auto mask = member_mask(g, s);

    double recomputed = 0.0;
    for (int v : s.members) recomputed += g.weight(v);
    double scale = std::max(1.0, std::abs(recomputed));
    if (std::abs(recomputed - s.weight) > 1e-12 * scale)
        throw InputError("VertexSet weight cache is stale for this graph");

    SetFlags f;
    f.independent = true;
    f.clique = true; // vacuously true for the empty set
    for (int v : s.members) {
        auto r = g.row(v);
        std::uint64_t inside = k.popcount_and(r.data(), mask.data(), r.size());
        if (inside != 0) f.independent = false;
        if (inside != s.members.size() - 1) f.clique = false;
    }

    f.dominating = true;
    f.vertex_cover = true;
    bool extendable = false;
    std::vector<char> in(static_cast<std::size_t>(g.n()), 0);
    for (int v : s.members) in[static_cast<std::size_t>(v)] = 1;
    for (int v = 0; v < g.n(); ++v) {
        if (in[static_cast<std::size_t>(v)]) continue;
        auto r = g.row(v);
        std::uint64_t hits = k.popcount_and(r.data(), mask.data(), r.size());
        std::uint64_t deg = k.popcount(r.data(), r.size());
        if (hits == 0) f.dominating = false;
        if (hits < deg) f.vertex_cover = false; // some edge from v misses the set
        if (hits == 0) extendable = true;       // v could join an independent set
    }
    f.maximal_independent = f.independent && !extendable;
    f.connected = set_connected(g, s);
    return f;
}

Graph complement(const Graph& g) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < g.n(); ++i)
        for (int j = i + 1; j < g.n(); ++j)
            if (!g.adjacent(i, j)) edges.emplace_back(i, j);
    // coords dropped: complement of a geometric graph has no geometric meaning
    return Graph::general(g.n(), std::move(edges), g.weights());
}

Deletion induced_subgraph(const Graph& g, const std::vector<int>& keep) {
    std::vector<int> new_of_old(static_cast<std::size_t>(g.n()), -1);
    std::vector<int> old_of_new;
    old_of_new.reserve(keep.size());
    for (int v : keep) {
        if (v < 0 || v >= g.n()) throw InputError("vertex id out of range");
        if (new_of_old[static_cast<std::size_t>(v)] != -1) continue;
        new_of_old[static_cast<std::size_t>(v)] = static_cast<int>(old_of_new.size());
        old_of_new.push_back(v);
    }
    std::vector<std::pair<int, int>> edges;
    for (const auto& [u, v] : g.edges()) {
        int nu = new_of_old[static_cast<std::size_t>(u)];
        int nv = new_of_old[static_cast<std::size_t>(v)];
        if (nu != -1 && nv != -1) edges.emplace_back(nu, nv);
    }
    std::vector<double> w;
    std::vector<Vec2> coords;
    for (int v : old_of_new) {
        w.push_back(g.weight(v));
        if (!g.coords().empty()) coords.push_back(g.coords()[static_cast<std::size_t>(v)]);
    }
    Graph out;
    if (g.kind() == GraphKind::unitdisk)
        out = Graph::unit_disk(std::move(coords), *g.radius(), std::move(w));
    else if (g.kind() == GraphKind::geometric)
        out = Graph::geometric(std::move(coords), std::move(edges), std::move(w));
    else
        out = Graph::general(static_cast<int>(old_of_new.size()), std::move(edges), std::move(w));
    return Deletion{std::move(out), std::move(old_of_new), std::move(new_of_old)};
}

Deletion delete_vertices(const Graph& g, const VertexSet& s, bool closed) {
    std::vector<char> drop(static_cast<std::size_t>(g.n()), 0);
    for (int v : s.members) {
        if (v < 0 || v >= g.n()) throw InputError("vertex id out of range");
        drop[static_cast<std::size_t>(v)] = 1;
        if (closed)
            for (int u : g.neighbors(v)) drop[static_cast<std::size_t>(u)] = 1;
    }
    std::vector<int> keep;
    for (int v = 0; v < g.n(); ++v)
        if (!drop[static_cast<std::size_t>(v)]) keep.push_back(v);
    return induced_subgraph(g, keep);
}

} // namespace iset
