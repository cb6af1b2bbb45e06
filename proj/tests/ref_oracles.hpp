#pragma once

// Brute-force reference oracles for tests. Deliberately written against the
// raw edge list with plain subset loops, independent of the library's
// bit-row algorithms, so the two routes can check each other.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "iset/graph.hpp"

namespace ref {

inline std::vector<std::vector<char>> adjacency(const iset::Graph& g) {
    std::vector<std::vector<char>> a(static_cast<std::size_t>(g.n()),
                                     std::vector<char>(static_cast<std::size_t>(g.n()), 0));
    for (auto [u, v] : g.edges()) {
        a[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = 1;
        a[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = 1;
    }
    return a;
}

inline bool is_independent(const std::vector<std::vector<char>>& a, std::uint32_t mask) {
    int n = static_cast<int>(a.size());
    for (int i = 0; i < n; ++i)
        if (mask & (1u << i))
            for (int j = i + 1; j < n; ++j)
                if ((mask & (1u << j)) && a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
                    return false;
    return true;
}

inline bool is_clique(const std::vector<std::vector<char>>& a, std::uint32_t mask) {
    int n = static_cast<int>(a.size());
    for (int i = 0; i < n; ++i)
        if (mask & (1u << i))
            for (int j = i + 1; j < n; ++j)
                if ((mask & (1u << j)) && !a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
                    return false;
    return true;
}

inline bool is_dominating(const std::vector<std::vector<char>>& a, std::uint32_t mask) {
    int n = static_cast<int>(a.size());
    for (int v = 0; v < n; ++v) {
        if (mask & (1u << v)) continue;
        bool hit = false;
        for (int u = 0; u < n && !hit; ++u)
            if ((mask & (1u << u)) && a[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)])
                hit = true;
        if (!hit) return false;
    }
    return true;
}

inline std::vector<std::uint32_t> all_independent_sets(const iset::Graph& g) {
    auto a = adjacency(g);
    std::vector<std::uint32_t> out;
    for (std::uint32_t mask = 0; mask < (1u << g.n()); ++mask)
        if (is_independent(a, mask)) out.push_back(mask);
    return out;
}

inline double set_weight(const iset::Graph& g, std::uint32_t mask) {
    double w = 0.0;
    for (int v = 0; v < g.n(); ++v)
        if (mask & (1u << v)) w += g.weight(v);
    return w;
}

inline double mwis_weight(const iset::Graph& g) {
    double best = 0.0;
    for (std::uint32_t mask : all_independent_sets(g)) best = std::max(best, set_weight(g, mask));
    return best;
}

inline int mis_size(const iset::Graph& g) {
    int best = 0;
    for (std::uint32_t mask : all_independent_sets(g))
        best = std::max(best, static_cast<int>(__builtin_popcount(mask)));
    return best;
}

inline int max_clique_size(const iset::Graph& g) {
    auto a = adjacency(g);
    int best = 0;
    for (std::uint32_t mask = 0; mask < (1u << g.n()); ++mask)
        if (is_clique(a, mask)) best = std::max(best, static_cast<int>(__builtin_popcount(mask)));
    return best;
}

inline int min_vertex_cover_size(const iset::Graph& g) {
    int n = g.n();
    int best = n;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        bool covers = true;
        for (auto [u, v] : g.edges())
            if (!((mask >> u) & 1u) && !((mask >> v) & 1u)) {
                covers = false;
                break;
            }
        if (covers) best = std::min(best, static_cast<int>(__builtin_popcount(mask)));
    }
    return best;
}

inline int mds_size(const iset::Graph& g) {
    auto a = adjacency(g);
    int best = g.n();
    for (std::uint32_t mask = 0; mask < (1u << g.n()); ++mask)
        if (is_dominating(a, mask)) best = std::min(best, static_cast<int>(__builtin_popcount(mask)));
    return best;
}

inline double partition_function(const iset::Graph& g, const std::vector<double>& nu) {
    double z = 0.0;
    for (std::uint32_t mask : all_independent_sets(g)) {
        double p = 1.0;
        for (int v = 0; v < g.n(); ++v)
            if (mask & (1u << v)) p *= nu[static_cast<std::size_t>(v)];
        z += p;
    }
    return z;
}

inline std::vector<std::uint32_t> all_maximal_independent_sets(const iset::Graph& g) {
    auto a = adjacency(g);
    std::vector<std::uint32_t> out;
    for (std::uint32_t mask : all_independent_sets(g)) {
        bool maximal = true;
        for (int v = 0; v < g.n() && maximal; ++v) {
            if (mask & (1u << v)) continue;
            bool blocked = false;
            for (int u = 0; u < g.n() && !blocked; ++u)
                if ((mask & (1u << u)) && a[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)])
                    blocked = true;
            if (!blocked) maximal = false;
        }
        if (maximal) out.push_back(mask);
    }
    return out;
}

} // namespace ref
