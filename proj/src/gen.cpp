#include "iset/gen.hpp"

#include "iset/errors.hpp"

namespace iset::gen {

Graph path(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return Graph::general(n, std::move(edges));
}

Graph cycle(int n) {
    if (n < 3) throw InputError("cycle requires at least 3 vertices");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return Graph::general(n, std::move(edges));
}

Graph complete(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    return Graph::general(n, std::move(edges));
}

Graph star(int leaves) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i <= leaves; ++i) edges.emplace_back(0, i);
    return Graph::general(leaves + 1, std::move(edges));
}

Graph empty(int n) { return Graph::general(n, {}); }

Graph erdos_renyi(int n, double p, Rng& rng) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("edge probability must be in [0,1]");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform() < p) edges.emplace_back(i, j);
    return Graph::general(n, std::move(edges));
}

Graph random_unit_disk(int n, double radius, double box_side, Rng& rng) {
    if (!(radius > 0.0) || !(box_side > 0.0))
        throw InputError("radius and box side must be positive");
    std::vector<Vec2> pts(static_cast<std::size_t>(n));
    for (auto& p : pts) p = Vec2{rng.uniform() * box_side, rng.uniform() * box_side};
    return Graph::unit_disk(std::move(pts), radius);
}

Graph random_connected_unit_disk(int n, double radius, double box_side, Rng& rng) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
        Graph g = random_unit_disk(n, radius, box_side, rng);
        if (g.connected()) return g;
    }
    throw InputError("could not sample a connected unit-disk graph; increase radius");
}

Graph lattice_unit_disk(int rows, int cols, double spacing, double radius) {
    if (rows < 1 || cols < 1) throw InputError("lattice dimensions must be positive");
    std::vector<Vec2> pts;
    pts.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            pts.push_back(Vec2{c * spacing, r * spacing});
    return Graph::unit_disk(std::move(pts), radius);
}

} // namespace iset::gen
