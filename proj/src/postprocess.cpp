#include "iset/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "iset/errors.hpp"
#include "iset/oracle.hpp"
#include "iset/rng.hpp"
#include "iset/sampling.hpp"

namespace iset::postprocess {

using nlohmann::json;

json trace_to_json(const PipelineTrace& t) {
    return json{{"stage", t.stage},
                {"input_set", t.input_set.members},
                {"output_set", t.output_set.members},
                {"added", t.added},
                {"removed", t.removed},
                {"objective_before", t.objective_before},
                {"objective_after", t.objective_after}};
}

namespace {

void fill_trace(PipelineTrace* trace, const char* stage, const VertexSet& in, const VertexSet& out,
                std::vector<int> added, std::vector<int> removed, double before, double after) {
    if (!trace) return;
    trace->stage = stage;
    trace->input_set = in;
    trace->output_set = out;
    trace->added = std::move(added);
    trace->removed = std::move(removed);
    trace->objective_before = before;
    trace->objective_after = after;
}

} // namespace

VertexSet complete_to_maximal(const Graph& g, const VertexSet& s, std::uint64_t seed,
                              PipelineTrace* trace) {
    if (!classify_set(g, s).independent)
        throw InputError("complete_to_maximal: input set is not independent; repair it first");
    Rng rng = Rng::stream(seed, "complete");
    std::vector<char> in(static_cast<std::size_t>(g.n()), 0);
    for (int v : s.members) in[static_cast<std::size_t>(v)] = 1;
    std::vector<int> added;
    for (int v : rng.permutation(g.n())) {
        if (in[static_cast<std::size_t>(v)]) continue;
        bool blocked = false;
        for (int u : g.neighbors(v))
            if (in[static_cast<std::size_t>(u)]) {
                blocked = true;
                break;
            }
        if (!blocked) {
            in[static_cast<std::size_t>(v)] = 1;
            added.push_back(v);
        }
    }
    std::vector<int> members;
    for (int v = 0; v < g.n(); ++v)
        if (in[static_cast<std::size_t>(v)]) members.push_back(v);
    VertexSet out = make_vertex_set(g, members);
    fill_trace(trace, "complete_to_maximal", s, out, added, {}, s.weight, out.weight);
    return out;
}

VertexSet repair_to_independent(const Graph& g, const VertexSet& s, std::uint64_t seed,
                                PipelineTrace* trace) {
    Rng rng = Rng::stream(seed, "repair");
    std::vector<char> in(static_cast<std::size_t>(g.n()), 0);
    for (int v : s.members) in[static_cast<std::size_t>(v)] = 1;
    auto conflict_count = [&](int v) {
        int c = 0;
        for (int u : g.neighbors(v))
            if (in[static_cast<std::size_t>(u)]) ++c;
        return c;
    };
    std::vector<int> removed;
    while (true) {
        int maxc = 0;
        for (int v : s.members)
            if (in[static_cast<std::size_t>(v)]) maxc = std::max(maxc, conflict_count(v));
        if (maxc == 0) break;
        std::vector<int> worst;
        for (int v : s.members)
            if (in[static_cast<std::size_t>(v)] && conflict_count(v) == maxc) worst.push_back(v);
        int pick = worst[static_cast<std::size_t>(rng.below(worst.size()))];
        in[static_cast<std::size_t>(pick)] = 0;
        removed.push_back(pick);
    }
    std::vector<int> members;
    for (int v : s.members)
        if (in[static_cast<std::size_t>(v)]) members.push_back(v);
    VertexSet out = make_vertex_set(g, members);
    fill_trace(trace, "repair_to_independent", s, out, {}, removed, s.weight, out.weight);
    return out;
}

VertexSet connect_dominating(const Graph& g, const VertexSet& d, PipelineTrace* trace) {
    if (!g.connected()) throw InputError("connect_dominating requires a connected graph");
    if (!classify_set(g, d).dominating) throw InputError("connect_dominating: set is not dominating");

    std::vector<char> in(static_cast<std::size_t>(g.n()), 0);
    for (int v : d.members) in[static_cast<std::size_t>(v)] = 1;
    std::vector<int> added;

    auto components = [&]() {
        std::vector<std::vector<int>> comps;
        std::vector<char> seen(static_cast<std::size_t>(g.n()), 0);
        for (int v = 0; v < g.n(); ++v) {
            if (!in[static_cast<std::size_t>(v)] || seen[static_cast<std::size_t>(v)]) continue;
            std::vector<int> comp;
            std::queue<int> q;
            q.push(v);
            seen[static_cast<std::size_t>(v)] = 1;
            while (!q.empty()) {
                int x = q.front();
                q.pop();
                comp.push_back(x);
                for (int u : g.neighbors(x))
                    if (in[static_cast<std::size_t>(u)] && !seen[static_cast<std::size_t>(u)]) {
                        seen[static_cast<std::size_t>(u)] = 1;
                        q.push(u);
                    }
            }
            std::sort(comp.begin(), comp.end());
            comps.push_back(std::move(comp));
        }
        // ordered by smallest member id
        std::sort(comps.begin(), comps.end(),
                  [](const auto& a, const auto& b) { return a.front() < b.front(); });
        return comps;
    };

    while (true) {
        auto comps = components();
        if (comps.size() <= 1) break;

        // Multi-source BFS from the first component over the whole graph.
        std::vector<int> dist(static_cast<std::size_t>(g.n()), -1);
        std::vector<int> parent(static_cast<std::size_t>(g.n()), -1);
        std::queue<int> q;
        for (int v : comps[0]) {
            dist[static_cast<std::size_t>(v)] = 0;
            q.push(v);
        }
        while (!q.empty()) {
            int x = q.front();
            q.pop();
            for (int u : g.neighbors(x))
                if (dist[static_cast<std::size_t>(u)] < 0) {
                    dist[static_cast<std::size_t>(u)] = dist[static_cast<std::size_t>(x)] + 1;
                    parent[static_cast<std::size_t>(u)] = x;
                    q.push(u);
                }
        }

        // First-found shortest connector: components in id order, tie on
        // distance broken by component order then smallest endpoint id.
        int best_dist = -1, best_vertex = -1;
        for (std::size_t i = 1; i < comps.size(); ++i) {
            for (int v : comps[i]) {
                int dv = dist[static_cast<std::size_t>(v)];
                if (best_dist < 0 || dv < best_dist) {
                    best_dist = dv;
                    best_vertex = v;
                }
            }
        }
        internal_check(best_dist >= 1 && best_dist <= 3,
                       "dominating-set components must lie within distance 3");

        // Add interior vertices of the connecting path (at most two).
        int x = parent[static_cast<std::size_t>(best_vertex)];
        while (x != -1 && dist[static_cast<std::size_t>(x)] > 0) {
            if (!in[static_cast<std::size_t>(x)]) {
                in[static_cast<std::size_t>(x)] = 1;
                added.push_back(x);
            }
            x = parent[static_cast<std::size_t>(x)];
        }
    }

    std::vector<int> members;
    for (int v = 0; v < g.n(); ++v)
        if (in[static_cast<std::size_t>(v)]) members.push_back(v);
    VertexSet out = make_vertex_set(g, members);
    internal_check(out.members.size() <= 3 * std::max<std::size_t>(1, d.members.size()),
                   "connected dominating set exceeded the 3x bound");
    fill_trace(trace, "connect_dominating", d, out, added, {},
               static_cast<double>(d.members.size()), static_cast<double>(out.members.size()));
    return out;
}

double laplacian_lambda_max(const Graph& g, std::uint64_t seed) {
    if (g.edge_count() == 0) return 0.0;
    Rng rng = Rng::stream(seed, "power-iteration");
    std::size_t n = static_cast<std::size_t>(g.n());
    std::vector<double> v(n), lv(n);
    for (auto& x : v) x = rng.uniform() + 0.1;
    double norm = 0.0;
    for (double x : v) norm += x * x;
    for (auto& x : v) x /= std::sqrt(norm);

    double lambda = 0.0;
    for (int it = 0; it < 1000; ++it) {
        // L v = D v - A v
        for (std::size_t i = 0; i < n; ++i)
            lv[i] = static_cast<double>(g.degree(static_cast<int>(i))) * v[i];
        for (auto [a, b] : g.edges()) {
            lv[static_cast<std::size_t>(a)] -= v[static_cast<std::size_t>(b)];
            lv[static_cast<std::size_t>(b)] -= v[static_cast<std::size_t>(a)];
        }
        double rayleigh = 0.0, nrm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            rayleigh += v[i] * lv[i];
            nrm += lv[i] * lv[i];
        }
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) return 0.0;
        for (std::size_t i = 0; i < n; ++i) v[i] = lv[i] / nrm;
        if (it > 0 && std::abs(rayleigh - lambda) <= 1e-9 * std::max(1.0, std::abs(rayleigh))) {
            lambda = rayleigh;
            break;
        }
        lambda = rayleigh;
    }
    return lambda;
}

namespace {

double residual_lambda_max(const Graph& g, const std::vector<char>& immunized, std::uint64_t seed) {
    std::vector<int> keep;
    for (int v = 0; v < g.n(); ++v)
        if (!immunized[static_cast<std::size_t>(v)]) keep.push_back(v);
    if (keep.empty()) return 0.0;
    return laplacian_lambda_max(induced_subgraph(g, keep).graph, seed);
}

} // namespace

ImmunizationPlan immunize_budget(const Graph& g, int k, std::uint64_t seed) {
    if (k < 0 || k > g.n()) throw InputError("immunization budget out of range");

    ImmunizationPlan plan;
    auto finish = [&](const VertexSet& out, const VertexSet& start, std::vector<int> removed) {
        plan.immunized = out;
        std::vector<int> keep;
        for (int v = 0; v < g.n(); ++v)
            if (!std::binary_search(out.members.begin(), out.members.end(), v)) keep.push_back(v);
        Graph residual = induced_subgraph(g, keep).graph;
        plan.residual_edgeless = residual.edge_count() == 0;
        plan.spread_score = plan.residual_edgeless ? 0.0 : laplacian_lambda_max(residual, seed);
        fill_trace(&plan.trace, "immunize_budget", start, out, {}, std::move(removed),
                   static_cast<double>(start.members.size()), plan.spread_score);
        return plan;
    };

    if (k == g.n()) {
        std::vector<int> all(static_cast<std::size_t>(g.n()));
        for (int v = 0; v < g.n(); ++v) all[static_cast<std::size_t>(v)] = v;
        VertexSet out = make_vertex_set(g, all);
        return finish(out, out, {});
    }

    // Vertex cover: exact via the MIS complement when the solver cap allows,
    // else the complement of a sampled maximal independent set.
    VertexSet cover;
    oracle::Caps caps;
    if (g.n() <= caps.branch_and_bound) {
        std::vector<double> ones(static_cast<std::size_t>(g.n()), 1.0);
        auto mis = oracle::mwis_exact(g.with_weights(ones), caps);
        std::vector<int> cov;
        for (int v = 0; v < g.n(); ++v)
            if (!std::binary_search(mis.set.members.begin(), mis.set.members.end(), v))
                cov.push_back(v);
        cover = make_vertex_set(g, cov);
    } else {
        auto mis = sampling::greedy_maximal_is(g, seed);
        std::vector<int> cov;
        for (int v = 0; v < g.n(); ++v)
            if (!std::binary_search(mis.members.begin(), mis.members.end(), v)) cov.push_back(v);
        cover = make_vertex_set(g, cov);
    }

    if (static_cast<int>(cover.members.size()) <= k) return finish(cover, cover, {});

    // Budget below the cover size: start from the complement of a sampled
    // maximal IS (always a cover) and restore the vertex whose return to the
    // graph least increases the residual Laplacian lambda_max.
    auto mis = sampling::greedy_maximal_is(g, seed);
    std::vector<char> immunized(static_cast<std::size_t>(g.n()), 1);
    for (int v : mis.members) immunized[static_cast<std::size_t>(v)] = 0;
    std::vector<int> start_members;
    for (int v = 0; v < g.n(); ++v)
        if (immunized[static_cast<std::size_t>(v)]) start_members.push_back(v);
    VertexSet start = make_vertex_set(g, start_members);

    int size = static_cast<int>(start_members.size());
    std::vector<int> removed;
    while (size > k) {
        double best_score = 0.0;
        int best_v = -1;
        for (int v = 0; v < g.n(); ++v) {
            if (!immunized[static_cast<std::size_t>(v)]) continue;
            immunized[static_cast<std::size_t>(v)] = 0;
            double score = residual_lambda_max(g, immunized, seed);
            immunized[static_cast<std::size_t>(v)] = 1;
            if (best_v < 0 || score < best_score - 1e-12) {
                best_score = score;
                best_v = v;
            }
        }
        immunized[static_cast<std::size_t>(best_v)] = 0;
        removed.push_back(best_v);
        --size;
    }
    std::vector<int> members;
    for (int v = 0; v < g.n(); ++v)
        if (immunized[static_cast<std::size_t>(v)]) members.push_back(v);
    return finish(make_vertex_set(g, members), start, removed);
}

} // namespace iset::postprocess
