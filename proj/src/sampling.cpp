#include "iset/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "iset/errors.hpp"
#include "iset/kernels.hpp"
#include "iset/rng.hpp"
#include <json.hpp>

namespace iset::sampling {

SamplerConfig uniform_config(const Graph& g, std::uint64_t seed, double activity) {
    SamplerConfig cfg;
    cfg.seed = seed;
    cfg.activities.assign(static_cast<std::size_t>(g.n()), activity);
    return cfg;
}

namespace {

void validate_activities(const Graph& g, const std::vector<double>& nu) {
    if (static_cast<int>(nu.size()) != g.n()) throw InputError("activity vector length mismatch");
    for (double v : nu)
        if (!(v > 0.0) || !std::isfinite(v)) throw InputError("activities must be positive");
}

struct MaskSet {
    std::vector<std::uint64_t> words;
    explicit MaskSet(const Graph& g) : words(g.words(), 0) {}
    bool contains(int v) const { return (words[static_cast<std::size_t>(v) / 64] >> (v % 64)) & 1ull; }
    void flip(int v) { words[static_cast<std::size_t>(v) / 64] ^= 1ull << (v % 64); }
    bool blocked(const Graph& g, int v) const {
        auto r = g.row(v);
        return kernels::active().popcount_and(r.data(), words.data(), r.size()) != 0;
    }
    std::vector<int> members(int n) const {
        std::vector<int> out;
        for (int v = 0; v < n; ++v)
            if (contains(v)) out.push_back(v);
        return out;
    }
};

} // namespace

VertexSet greedy_maximal_is(const Graph& g, std::uint64_t seed, GreedyOrder order) {
    Rng rng = Rng::stream(seed, "greedy");
    std::vector<int> perm;
    if (order == GreedyOrder::uniform) {
        perm = rng.permutation(g.n());
    } else {
        // Draw without replacement with probability proportional to 1/(1+deg);
        // low-degree vertices go first, which tends to grow larger sets.
        std::vector<double> w(static_cast<std::size_t>(g.n()));
        for (int v = 0; v < g.n(); ++v) w[static_cast<std::size_t>(v)] = 1.0 / (1.0 + g.degree(v));
        std::vector<char> used(static_cast<std::size_t>(g.n()), 0);
        double total = 0.0;
        for (double x : w) total += x;
        for (int round = 0; round < g.n(); ++round) {
            double u = rng.uniform() * total;
            int pick = -1;
            for (int v = 0; v < g.n(); ++v) {
                if (used[static_cast<std::size_t>(v)]) continue;
                u -= w[static_cast<std::size_t>(v)];
                pick = v;
                if (u <= 0.0) break;
            }
            used[static_cast<std::size_t>(pick)] = 1;
            total -= w[static_cast<std::size_t>(pick)];
            perm.push_back(pick);
        }
    }
    MaskSet s(g);
    for (int v : perm)
        if (!s.blocked(g, v)) s.flip(v);
    return make_vertex_set(g, s.members(g.n()));
}

std::vector<VertexSet> gibbs_sample_is(const Graph& g, const SamplerConfig& cfg,
                                       std::size_t n_samples) {
    validate_activities(g, cfg.activities);
    double nu_max = *std::max_element(cfg.activities.begin(), cfg.activities.end());
    long long burn_in = cfg.burn_in >= 0
                            ? cfg.burn_in
                            : static_cast<long long>(10.0 * g.n() * std::max(1.0, nu_max));
    long long thinning = cfg.thinning >= 0 ? cfg.thinning : std::max(1, g.n());
    if (thinning < 1) throw InputError("thinning must be at least 1");

    Rng rng = Rng::stream(cfg.seed, "gibbs");
    MaskSet s(g);
    std::vector<VertexSet> out;
    out.reserve(n_samples);
    if (g.n() == 0) {
        out.assign(n_samples, VertexSet{});
        return out;
    }

    long long step = 0;
    long long next_emit = burn_in;
    while (out.size() < n_samples) {
        int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(g.n())));
        double nu = cfg.activities[static_cast<std::size_t>(v)];
        if (s.contains(v)) {
            // deletion accepted with min(1, 1/nu)
            if (nu <= 1.0 || rng.uniform() < 1.0 / nu) s.flip(v);
        } else if (!s.blocked(g, v)) {
            // insertion accepted with min(1, nu), only if independence holds
            if (nu >= 1.0 || rng.uniform() < nu) s.flip(v);
        }
        ++step;
        if (step > next_emit) {
            out.push_back(make_vertex_set(g, s.members(g.n())));
            next_emit += thinning;
        }
    }
    return out;
}

Estimate estimate_expectation(const std::vector<VertexSet>& samples,
                              const std::function<double(const VertexSet&)>& f) {
    if (samples.size() < 2) throw InputError("estimate_expectation needs at least two samples");
    double sum = 0.0, sum2 = 0.0;
    for (const auto& s : samples) {
        double x = f(s);
        sum += x;
        sum2 += x * x;
    }
    double n = static_cast<double>(samples.size());
    double mean = sum / n;
    double var = std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0));
    return Estimate{mean, std::sqrt(var / n), samples.size()};
}

void write_samples_jsonl(const std::filesystem::path& path, const Graph& g,
                         const SamplerConfig& cfg, const std::vector<VertexSet>& samples,
                         const std::string& sampler_name) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write file: " + path.string());
    nlohmann::json header{{"record", "header"},
                          {"sampler", sampler_name},
                          {"seed", cfg.seed},
                          {"burn_in", cfg.burn_in},
                          {"thinning", cfg.thinning},
                          {"activities", cfg.activities},
                          {"n_vertices", g.n()},
                          {"n_samples", samples.size()}};
    out << header.dump() << "\n";
    for (const auto& s : samples) {
        nlohmann::json line{{"members", s.members}, {"weight", s.weight}};
        out << line.dump() << "\n";
    }
}

} // namespace iset::sampling
