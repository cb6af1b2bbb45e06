#include "iset/apps.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>

#include "iset/errors.hpp"
#include "iset/json_io.hpp"
#include "iset/reductions.hpp"
#include "iset/rng.hpp"

namespace iset::apps {

using nlohmann::json;

// ---- loss networks ---------------------------------------------------------

RouteSet route_set_from_json(const json& j) {
    try {
        RouteSet rs;
        rs.network = graph_from_json(j.at("network"));
        for (const auto& r : j.at("routes")) rs.routes.push_back(r.get<std::vector<int>>());
        if (j.contains("activity")) rs.activity = j["activity"].get<double>();
        if (!(rs.activity > 0.0)) throw InputError("route activity must be positive");
        for (const auto& r : rs.routes) {
            if (r.empty()) throw InputError("routes must be nonempty");
            for (int link : r)
                if (link < 0 || link >= static_cast<int>(rs.network.edge_count()))
                    throw InputError("unknown link id " + std::to_string(link));
        }
        return rs;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed route set JSON: ") + e.what());
    }
}

json route_set_to_json(const RouteSet& rs) {
    return json{{"network", graph_to_json(rs.network)},
                {"routes", rs.routes},
                {"activity", rs.activity}};
}

Graph route_interaction_graph(const RouteSet& rs) {
    int n = static_cast<int>(rs.routes.size());
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const auto& a = rs.routes[static_cast<std::size_t>(i)];
            const auto& b = rs.routes[static_cast<std::size_t>(j)];
            bool share = false;
            for (int link : a) {
                if (std::find(b.begin(), b.end(), link) != b.end()) {
                    share = true;
                    break;
                }
            }
            if (share) edges.emplace_back(i, j);
        }
    }
    return Graph::general(n, std::move(edges));
}

BlockingReport blocking_probabilities(const RouteSet& rs, const oracle::Caps& caps) {
    Graph g = route_interaction_graph(rs);
    BlockingReport rep;
    rep.z = oracle::partition_function(g, rs.activity, caps).z;
    for (int r = 0; r < g.n(); ++r) {
        // A fresh call on route r completes iff no active route conflicts
        // with it, r itself included: remove the closed neighborhood.
        Graph minus = delete_vertices(g, make_vertex_set(g, {r}), true).graph;
        double zr = oracle::partition_function(minus, rs.activity, caps).z;
        double p = zr / rep.z;
        rep.success.push_back(p);
        rep.failure.push_back(1.0 - p);
    }
    return rep;
}

// ---- site planning ----------------------------------------------------------

SitePlanProblem site_plan_from_json(const json& j) {
    try {
        SitePlanProblem p;
        for (const auto& c : j.at("candidates"))
            p.candidates.push_back(Vec2{c.at(0).get<double>(), c.at(1).get<double>()});
        p.min_distance = j.at("min_distance").get<double>();
        if (j.contains("weights")) p.weights = j["weights"].get<std::vector<double>>();
        if (j.contains("plan_probability")) {
            for (const auto& entry : j["plan_probability"]) {
                std::uint64_t mask = 0;
                for (int v : entry.at("members").get<std::vector<int>>()) mask |= 1ull << v;
                p.plan_probability.emplace_back(mask, entry.at("p").get<double>());
            }
        }
        return p;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed site plan JSON: ") + e.what());
    }
}

namespace {

Graph site_graph(const SitePlanProblem& p) {
    if (p.candidates.empty()) throw InputError("site plan needs at least one candidate");
    if (!(p.min_distance > 0.0)) throw InputError("min_distance must be positive");
    std::vector<double> w = p.weights;
    if (w.empty()) w.assign(p.candidates.size(), 1.0);
    for (double x : w)
        if (!(x > 0.0)) throw InputError("site weights must be positive");
    return Graph::unit_disk(p.candidates, p.min_distance, w);
}

double plan_probability(const SitePlanProblem& p, std::uint64_t mask) {
    if (p.plan_probability.empty()) return 1.0; // uniform default
    for (const auto& [m, prob] : p.plan_probability)
        if (m == mask) return prob;
    return 0.0;
}

SitePlanResult rank_scores(const Graph& g, std::vector<double> num, std::vector<double> den_or_z,
                           bool conditional, double z) {
    SitePlanResult res;
    for (int s = 0; s < g.n(); ++s) {
        double d = conditional ? den_or_z[static_cast<std::size_t>(s)] : z;
        double score = d > 0.0 ? num[static_cast<std::size_t>(s)] / d : 0.0;
        res.ranked.push_back(SiteScore{s, score, 0.0});
    }
    std::stable_sort(res.ranked.begin(), res.ranked.end(), [](const SiteScore& a, const SiteScore& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.candidate < b.candidate;
    });
    res.best = res.ranked.front().candidate;
    res.z = z;
    return res;
}

} // namespace

SitePlanResult next_store_selection_exact(const SitePlanProblem& p, bool conditional, int cap) {
    Graph g = site_graph(p);
    if (g.n() > cap)
        throw SizeCapError("next_store_selection_exact: " + std::to_string(g.n()) +
                           " candidates exceed cap " + std::to_string(cap));
    oracle::Caps caps;
    caps.enumeration = cap;

    std::vector<double> num(static_cast<std::size_t>(g.n()), 0.0);
    std::vector<double> den(static_cast<std::size_t>(g.n()), 0.0);
    double z = 0.0;
    std::size_t n_plans = 0;
    oracle::enumerate_independent_sets(
        g,
        [&](const VertexSet& s) {
            if (!classify_set(g, s).maximal_independent) return;
            ++n_plans;
            double prob = plan_probability(p, mask_from_set(s));
            z += prob;
            double w = s.weight;
            for (int v : s.members) {
                num[static_cast<std::size_t>(v)] += w * prob;
                den[static_cast<std::size_t>(v)] += prob;
            }
        },
        caps);
    if (z <= 0.0) throw InputError("plan probabilities sum to zero over maximal sets");

    SitePlanResult res = rank_scores(g, num, den, conditional, z);
    res.n_plans = n_plans;
    res.exact = true;
    return res;
}

SitePlanResult next_store_selection_sampled(const SitePlanProblem& p, std::size_t n_samples,
                                            std::uint64_t seed, bool conditional) {
    Graph g = site_graph(p);
    if (n_samples < 2) throw InputError("sampled mode needs at least two samples");
    Rng rng = Rng::stream(seed, "siteplan");
    const std::size_t n = static_cast<std::size_t>(g.n());

    // Sequential greedy over the currently addable vertices. Every ordering
    // of a maximal set I arises, so the path probability is known exactly and
    // 1/(q * |I|!) de-biases the draw: sums over maximal sets come out
    // unbiased without knowing the per-set hit probability.
    std::vector<double> num_sum(n, 0.0), num_sq(n, 0.0), cross(n, 0.0);
    std::vector<double> cond_den(n, 0.0), cond_den_sq(n, 0.0);
    double den_sum = 0.0, den_sq = 0.0;

    std::vector<char> blocked(n), in_set(n);
    for (std::size_t it = 0; it < n_samples; ++it) {
        std::fill(blocked.begin(), blocked.end(), 0);
        std::fill(in_set.begin(), in_set.end(), 0);
        double log_w = 0.0;
        int size = 0;
        std::uint64_t mask = 0;
        double weight = 0.0;
        while (true) {
            std::vector<int> addable;
            for (int v = 0; v < g.n(); ++v)
                if (!blocked[static_cast<std::size_t>(v)]) addable.push_back(v);
            if (addable.empty()) break;
            log_w += std::log(static_cast<double>(addable.size()));
            int v = addable[static_cast<std::size_t>(rng.below(addable.size()))];
            in_set[static_cast<std::size_t>(v)] = 1;
            blocked[static_cast<std::size_t>(v)] = 1;
            for (int u : g.neighbors(v)) blocked[static_cast<std::size_t>(u)] = 1;
            ++size;
            mask |= 1ull << v;
            weight += g.weight(v);
        }
        for (int j = 2; j <= size; ++j) log_w -= std::log(static_cast<double>(j));
        double path_w = std::exp(log_w);
        double prob = plan_probability(p, mask);
        double d_i = prob * path_w;
        double w_plan = weight; // w(I) defaults to the total weight
        den_sum += d_i;
        den_sq += d_i * d_i;
        for (int v = 0; v < g.n(); ++v) {
            if (!in_set[static_cast<std::size_t>(v)]) continue;
            double n_i = w_plan * d_i;
            num_sum[static_cast<std::size_t>(v)] += n_i;
            num_sq[static_cast<std::size_t>(v)] += n_i * n_i;
            cross[static_cast<std::size_t>(v)] += n_i * d_i;
            cond_den[static_cast<std::size_t>(v)] += d_i;
            cond_den_sq[static_cast<std::size_t>(v)] += d_i * d_i;
        }
    }

    double nn = static_cast<double>(n_samples);
    double z_hat = den_sum / nn;
    if (z_hat <= 0.0) throw InputError("plan probabilities vanish on all sampled plans");

    SitePlanResult res;
    for (int s = 0; s < g.n(); ++s) {
        auto si = static_cast<std::size_t>(s);
        double d_mean = conditional ? cond_den[si] / nn : z_hat;
        double n_mean = num_sum[si] / nn;
        double score = d_mean > 0.0 ? n_mean / d_mean : 0.0;
        // delta-method standard error of the ratio estimator
        double var_n = std::max(0.0, num_sq[si] / nn - n_mean * n_mean);
        double d_sq_mean = conditional ? cond_den_sq[si] / nn : den_sq / nn;
        double var_d = std::max(0.0, d_sq_mean - d_mean * d_mean);
        double cov = cross[si] / nn - n_mean * d_mean;
        double var_r =
            d_mean > 0.0
                ? std::max(0.0, var_n - 2.0 * score * cov + score * score * var_d) / (d_mean * d_mean)
                : 0.0;
        res.ranked.push_back(SiteScore{s, score, std::sqrt(var_r / nn)});
    }
    std::stable_sort(res.ranked.begin(), res.ranked.end(), [](const SiteScore& a, const SiteScore& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.candidate < b.candidate;
    });
    res.best = res.ranked.front().candidate;
    res.z = z_hat;
    res.n_plans = 0;
    res.exact = false;
    return res;
}

// ---- market graphs -----------------------------------------------------------

const char* to_string(MarketMode m) {
    switch (m) {
        case MarketMode::anticorrelated: return "anticorrelated";
        case MarketMode::correlated: return "correlated";
        case MarketMode::uncorrelated: return "uncorrelated";
    }
    return "anticorrelated";
}

MarketMode market_mode_from_string(const std::string& s) {
    if (s == "anticorrelated") return MarketMode::anticorrelated;
    if (s == "correlated") return MarketMode::correlated;
    if (s == "uncorrelated") return MarketMode::uncorrelated;
    throw InputError("unknown market mode: " + s);
}

ReturnsMatrix returns_from_json(const json& j) {
    try {
        ReturnsMatrix r;
        for (const auto& s : j.at("series")) r.series.push_back(s.get<std::vector<double>>());
        if (j.contains("names")) r.names = j["names"].get<std::vector<std::string>>();
        r.threshold = j.at("threshold").get<double>();
        r.mode = market_mode_from_string(j.at("mode").get<std::string>());
        return r;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed returns JSON: ") + e.what());
    }
}

MarketGraphResult market_graph(const ReturnsMatrix& r) {
    const int n = static_cast<int>(r.series.size());
    if (n == 0) throw InputError("returns matrix is empty");
    std::size_t t = r.series.front().size();
    if (t < 2) throw InputError("need at least two time points per asset");
    for (const auto& s : r.series) {
        if (s.size() != t) throw InputError("ragged returns matrix");
        for (double x : s)
            if (!std::isfinite(x)) throw InputError("non-finite return entry");
    }
    switch (r.mode) {
        case MarketMode::anticorrelated:
            if (r.threshold > 0.0)
                throw InputError("anticorrelated mode requires threshold <= 0");
            break;
        case MarketMode::correlated:
            if (r.threshold < 0.0) throw InputError("correlated mode requires threshold >= 0");
            break;
        case MarketMode::uncorrelated:
            if (!(r.threshold > 0.0)) throw InputError("uncorrelated mode requires threshold > 0");
            break;
    }

    MarketGraphResult res;
    std::vector<double> mean(static_cast<std::size_t>(n), 0.0);
    std::vector<double> sd(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        const auto& s = r.series[static_cast<std::size_t>(i)];
        double m = 0.0;
        for (double x : s) m += x;
        m /= static_cast<double>(t);
        double v = 0.0;
        for (double x : s) v += (x - m) * (x - m);
        mean[static_cast<std::size_t>(i)] = m;
        sd[static_cast<std::size_t>(i)] = std::sqrt(v);
        if (v == 0.0)
            res.excluded.push_back(i); // correlation undefined
        else
            res.kept.push_back(i);
    }
    for (int i : res.excluded)
        std::cerr << "warning: asset " << i << " has zero variance; excluded from the market graph\n";

    const int m = static_cast<int>(res.kept.size());
    if (m == 0) throw InputError("all assets have zero variance");
    res.correlation.assign(static_cast<std::size_t>(m),
                           std::vector<double>(static_cast<std::size_t>(m), 1.0));
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < m; ++a) {
        for (int b = a + 1; b < m; ++b) {
            int i = res.kept[static_cast<std::size_t>(a)];
            int j2 = res.kept[static_cast<std::size_t>(b)];
            const auto& si = r.series[static_cast<std::size_t>(i)];
            const auto& sj = r.series[static_cast<std::size_t>(j2)];
            double cov = 0.0;
            for (std::size_t k = 0; k < t; ++k)
                cov += (si[k] - mean[static_cast<std::size_t>(i)]) *
                       (sj[k] - mean[static_cast<std::size_t>(j2)]);
            double theta = cov / (sd[static_cast<std::size_t>(i)] * sd[static_cast<std::size_t>(j2)]);
            res.correlation[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = theta;
            res.correlation[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = theta;
            bool edge = false;
            switch (r.mode) {
                case MarketMode::anticorrelated: edge = theta <= r.threshold; break;
                case MarketMode::correlated: edge = theta >= r.threshold; break;
                case MarketMode::uncorrelated: edge = std::abs(theta) < r.threshold; break;
            }
            if (edge) edges.emplace_back(a, b);
        }
    }

    double min_mean = 0.0;
    for (int a = 0; a < m; ++a)
        min_mean = std::min(min_mean, mean[static_cast<std::size_t>(res.kept[static_cast<std::size_t>(a)])]);
    res.weight_shift = min_mean <= 0.0 ? 1e-3 - min_mean : 0.0;
    std::vector<double> weights;
    for (int a = 0; a < m; ++a)
        weights.push_back(mean[static_cast<std::size_t>(res.kept[static_cast<std::size_t>(a)])] +
                          res.weight_shift);
    res.graph = Graph::general(m, std::move(edges), std::move(weights));
    return res;
}

// ---- scheduling -----------------------------------------------------------

ScheduleProblem schedule_from_json(const json& j) {
    try {
        ScheduleProblem p;
        for (const auto& task : j.at("tasks")) p.tasks.push_back(task.get<std::vector<int>>());
        p.rounds = j.at("rounds").get<int>();
        if (j.contains("weights")) p.weights = j["weights"].get<std::vector<double>>();
        return p;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed schedule JSON: ") + e.what());
    }
}

ScheduleResult schedule_tasks(const ScheduleProblem& p, const oracle::Caps& caps) {
    if (p.rounds < 1) throw InputError("need at least one round");
    const int n = static_cast<int>(p.tasks.size());
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const auto& a = p.tasks[static_cast<std::size_t>(i)];
            const auto& b = p.tasks[static_cast<std::size_t>(j)];
            bool share = false;
            for (int asset : a)
                if (std::find(b.begin(), b.end(), asset) != b.end()) {
                    share = true;
                    break;
                }
            if (share) edges.emplace_back(i, j);
        }
    std::vector<double> w = p.weights;
    if (w.empty()) w.assign(static_cast<std::size_t>(n), 1.0);
    if (static_cast<int>(w.size()) != n) throw InputError("task weight length mismatch");

    ScheduleResult res;
    res.conflict_graph = Graph::general(n, std::move(edges), w);

    auto cert = reduce::coloring_to_mis(res.conflict_graph, p.rounds);
    // per-task weights copied onto every color copy of that task
    std::vector<double> dw(static_cast<std::size_t>(cert.derived.n()));
    for (int v = 0; v < cert.derived.n(); ++v)
        dw[static_cast<std::size_t>(v)] = w[static_cast<std::size_t>(v / p.rounds)];
    Graph weighted = cert.derived.with_weights(dw);

    auto sol = oracle::mwis_exact(weighted, caps);
    auto ans = std::get<reduce::ColoringAnswer>(reduce::decode(cert, sol.set));
    res.round = ans.colors;
    res.excluded = ans.uncolored;
    res.feasible = ans.complete;
    internal_check(ans.valid, "schedule decoding produced an improper coloring");
    return res;
}

// ---- antennas ----------------------------------------------------------------

AntennaProblem antenna_from_json(const json& j) {
    try {
        AntennaProblem p;
        for (const auto& c : j.at("locations"))
            p.locations.push_back(Vec2{c.at(0).get<double>(), c.at(1).get<double>()});
        p.ranges = j.at("ranges").get<std::vector<double>>();
        if (j.contains("values")) p.values = j["values"].get<std::vector<double>>();
        return p;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed antenna JSON: ") + e.what());
    }
}

AntennaPlan antenna_plan(const AntennaProblem& p, const oracle::Caps& caps) {
    const int n = static_cast<int>(p.locations.size());
    if (static_cast<int>(p.ranges.size()) != n) throw InputError("ranges length mismatch");
    for (double r : p.ranges)
        if (!(r > 0.0)) throw InputError("antenna ranges must be positive");
    std::vector<double> values = p.values;
    if (values.empty()) values.assign(static_cast<std::size_t>(n), 1.0);
    for (double v : values)
        if (!(v > 0.0)) throw InputError("antenna values must be positive");

    AntennaPlan plan;
    bool uniform = std::all_of(p.ranges.begin(), p.ranges.end(),
                               [&](double r) { return r == p.ranges.front(); });
    plan.unit_disk = uniform;
    if (uniform && n > 0) {
        plan.conflict_graph = Graph::unit_disk(p.locations, 2.0 * p.ranges.front(), values);
    } else {
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (distance(p.locations[static_cast<std::size_t>(i)],
                             p.locations[static_cast<std::size_t>(j)]) <=
                    p.ranges[static_cast<std::size_t>(i)] + p.ranges[static_cast<std::size_t>(j)])
                    edges.emplace_back(i, j);
        plan.conflict_graph =
            Graph::geometric(p.locations, std::move(edges), values);
    }
    plan.placement = oracle::mwis_exact(plan.conflict_graph, caps);
    if (uniform && n > 0)
        plan.compiled = rydberg::compile_register(plan.conflict_graph, rydberg::SweepParams{});
    return plan;
}

} // namespace iset::apps
