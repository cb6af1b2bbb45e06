#include "iset/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

#include "iset/errors.hpp"

namespace iset::oracle {

using nlohmann::json;

json solution_to_json(const ExactSolution& s) {
    return json{{"problem", s.problem},
                {"set", s.set.members},
                {"objective", s.objective},
                {"optimal", s.optimal},
                {"nodes_explored", s.nodes_explored}};
}

namespace {

// Dense u64 adjacency; every oracle cap fits in one machine word.
struct BitGraph {
    int n = 0;
    std::uint64_t full = 0;
    std::vector<std::uint64_t> adj;

    explicit BitGraph(const Graph& g) : n(g.n()) {
        internal_check(n <= 64, "oracle bit graph limited to 64 vertices");
        full = n == 64 ? ~0ull : (1ull << n) - 1;
        adj.assign(static_cast<std::size_t>(n), 0);
        for (const auto& [u, v] : g.edges()) {
            adj[static_cast<std::size_t>(u)] |= 1ull << v;
            adj[static_cast<std::size_t>(v)] |= 1ull << u;
        }
    }

    std::uint64_t closed(int v) const { return adj[static_cast<std::size_t>(v)] | (1ull << v); }
};

void require_cap(int n, int cap, const char* what) {
    if (n > cap)
        throw SizeCapError(std::string(what) + ": instance size " + std::to_string(n) +
                           " exceeds cap " + std::to_string(cap));
}

void enumerate_rec(const BitGraph& bg, int v, std::uint64_t cur,
                   const std::function<void(std::uint64_t)>& emit) {
    if (v < 0) {
        emit(cur);
        return;
    }
    // Exclude-first from the highest vertex yields increasing mask order.
    enumerate_rec(bg, v - 1, cur, emit);
    if ((bg.adj[static_cast<std::size_t>(v)] & cur) == 0)
        enumerate_rec(bg, v - 1, cur | (1ull << v), emit);
}

int pick_max_degree(const BitGraph& bg, std::uint64_t cand) {
    int best = -1, best_deg = -1;
    std::uint64_t m = cand;
    while (m) {
        int v = std::countr_zero(m);
        m &= m - 1;
        int deg = std::popcount(bg.adj[static_cast<std::size_t>(v)] & cand);
        if (deg > best_deg) {
            best_deg = deg;
            best = v;
        }
    }
    return best;
}

// Greedy clique cover over the candidate set; the sum of per-clique maximum
// weights bounds any independent set weight within cand.
double clique_cover_bound(const BitGraph& bg, const std::vector<double>& w, std::uint64_t cand) {
    std::uint64_t cliques[64];
    double maxw[64];
    int nc = 0;
    std::uint64_t m = cand;
    double ub = 0.0;
    while (m) {
        int v = std::countr_zero(m);
        m &= m - 1;
        std::uint64_t av = bg.adj[static_cast<std::size_t>(v)];
        bool placed = false;
        for (int c = 0; c < nc; ++c) {
            if ((cliques[c] & ~av) == 0) { // v adjacent to every member
                cliques[c] |= 1ull << v;
                double wv = w[static_cast<std::size_t>(v)];
                if (wv > maxw[c]) {
                    ub += wv - maxw[c];
                    maxw[c] = wv;
                }
                placed = true;
                break;
            }
        }
        if (!placed) {
            cliques[nc] = 1ull << v;
            maxw[nc] = w[static_cast<std::size_t>(v)];
            ub += maxw[nc];
            ++nc;
        }
    }
    return ub;
}

struct BnB {
    const BitGraph& bg;
    const std::vector<double>& w;
    std::uint64_t max_nodes;
    std::uint64_t nodes = 0;
    bool budget_hit = false;

    double best_w = -1.0;
    std::uint64_t best_set = 0;

    BnB(const BitGraph& b, const std::vector<double>& weights, std::uint64_t budget)
        : bg(b), w(weights), max_nodes(budget) {}

    void search(std::uint64_t cand, std::uint64_t cur, double cur_w) {
        if (++nodes > max_nodes) {
            budget_hit = true;
            return;
        }
        if (cur_w > best_w) {
            best_w = cur_w;
            best_set = cur;
        }
        if (cand == 0) return;
        if (cur_w + clique_cover_bound(bg, w, cand) <= best_w) return;
        int v = pick_max_degree(bg, cand);
        search(cand & ~bg.closed(v), cur | (1ull << v), cur_w + w[static_cast<std::size_t>(v)]);
        if (budget_hit) return;
        search(cand & ~(1ull << v), cur, cur_w);
    }

    // Decision variant: is there an independent set within cand of weight
    // at least target (up to tol)?
    bool reaches(std::uint64_t cand, double cur_w, double target, double tol) {
        if (++nodes > max_nodes) {
            budget_hit = true;
            return false;
        }
        if (cur_w >= target - tol) return true;
        if (cand == 0) return false;
        if (cur_w + clique_cover_bound(bg, w, cand) < target - tol) return false;
        int v = pick_max_degree(bg, cand);
        if (reaches(cand & ~bg.closed(v), cur_w + w[static_cast<std::size_t>(v)], target, tol))
            return true;
        if (budget_hit) return false;
        return reaches(cand & ~(1ull << v), cur_w, target, tol);
    }
};

VertexSet set_from_mask64(const Graph& g, std::uint64_t mask) {
    std::vector<int> members;
    while (mask) {
        members.push_back(std::countr_zero(mask));
        mask &= mask - 1;
    }
    return make_vertex_set(g, std::move(members));
}

} // namespace

void enumerate_independent_sets(const Graph& g, const std::function<void(const VertexSet&)>& emit,
                                const Caps& caps) {
    require_cap(g.n(), std::min(caps.enumeration, 64), "enumerate_independent_sets");
    BitGraph bg(g);
    enumerate_rec(bg, g.n() - 1, 0, [&](std::uint64_t mask) { emit(set_from_mask64(g, mask)); });
}

std::vector<VertexSet> all_independent_sets(const Graph& g, const Caps& caps) {
    std::vector<VertexSet> out;
    enumerate_independent_sets(g, [&](const VertexSet& s) { out.push_back(s); }, caps);
    return out;
}

ExactSolution mwis_exact(const Graph& g, const Caps& caps) {
    require_cap(g.n(), std::min(caps.branch_and_bound, 64), "mwis_exact");
    for (double w : g.weights())
        if (!(w > 0.0)) throw InputError("mwis_exact requires positive weights");

    BitGraph bg(g);
    BnB bnb(bg, g.weights(), caps.max_nodes);
    bnb.search(bg.full, 0, 0.0);

    ExactSolution sol;
    sol.problem = "mwis";
    if (bnb.budget_hit) {
        sol.set = set_from_mask64(g, bnb.best_set);
        sol.objective = bnb.best_w;
        sol.optimal = false;
        sol.nodes_explored = bnb.nodes;
        return sol;
    }

    // Second pass: commit vertices in index order while the optimum stays
    // reachable; yields the lexicographically smallest optimal member list.
    const double target = bnb.best_w;
    const double tol = 1e-9 * std::max(1.0, std::abs(target));
    std::uint64_t cand = bg.full;
    std::uint64_t chosen = 0;
    double acc = 0.0;
    for (int v = 0; v < g.n() && acc < target - tol; ++v) {
        if (!((cand >> v) & 1ull)) continue;
        std::uint64_t after = cand & ~bg.closed(v);
        // Only vertices above v may still join; lower ones were already decided.
        after &= ~((v == 63) ? ~0ull : ((1ull << (v + 1)) - 1));
        double need = target - acc - g.weight(v);
        if (need <= tol || bnb.reaches(after, 0.0, need, tol)) {
            chosen |= 1ull << v;
            acc += g.weight(v);
            cand = after;
        } else {
            cand &= ~(1ull << v);
        }
        if (bnb.budget_hit) break;
    }

    if (!bnb.budget_hit && acc >= target - tol) {
        sol.set = set_from_mask64(g, chosen);
        sol.objective = sol.set.weight;
        sol.optimal = true;
    } else {
        sol.set = set_from_mask64(g, bnb.best_set);
        sol.objective = bnb.best_w;
        sol.optimal = !bnb.budget_hit;
    }
    sol.nodes_explored = bnb.nodes;
    return sol;
}

namespace {

struct ZSolver {
    const BitGraph& bg;
    const std::vector<double>& nu;
    std::size_t memo_budget;
    std::unordered_map<std::uint64_t, double> memo;
    // ~48 bytes per hash-map entry, amortized
    static constexpr std::size_t kEntryBytes = 48;

    double solve(std::uint64_t mask) {
        if (mask == 0) return 1.0;
        if (std::popcount(mask) == 1) {
            int v = std::countr_zero(mask);
            return 1.0 + nu[static_cast<std::size_t>(v)];
        }
        auto it = memo.find(mask);
        if (it != memo.end()) return it->second;

        // Multiply over connected components of the induced subgraph.
        std::uint64_t comp = 0;
        {
            std::uint64_t frontier = mask & (~mask + 1); // lowest bit
            comp = frontier;
            while (frontier) {
                std::uint64_t next = 0;
                std::uint64_t m = frontier;
                while (m) {
                    int v = std::countr_zero(m);
                    m &= m - 1;
                    next |= bg.adj[static_cast<std::size_t>(v)] & mask;
                }
                frontier = next & ~comp;
                comp |= frontier;
            }
        }
        double z;
        if (comp != mask) {
            z = component_z(comp) * solve(mask & ~comp);
        } else {
            z = component_z(mask);
        }
        if (memo.size() * kEntryBytes < memo_budget) memo.emplace(mask, z);
        return z;
    }

    double component_z(std::uint64_t mask) {
        auto it = memo.find(mask);
        if (it != memo.end()) return it->second;
        int v = pick_max_degree(bg, mask);
        if (v < 0 || (bg.adj[static_cast<std::size_t>(v)] & mask) == 0) {
            // Edgeless: product form.
            double z = 1.0;
            std::uint64_t m = mask;
            while (m) {
                int u = std::countr_zero(m);
                m &= m - 1;
                z *= 1.0 + nu[static_cast<std::size_t>(u)];
            }
            if (memo.size() * kEntryBytes < memo_budget) memo.emplace(mask, z);
            return z;
        }
        double z = solve(mask & ~(1ull << v)) +
                   nu[static_cast<std::size_t>(v)] * solve(mask & ~bg.closed(v));
        if (memo.size() * kEntryBytes < memo_budget) memo.emplace(mask, z);
        return z;
    }
};

} // namespace

PartitionFunctionResult partition_function(const Graph& g, std::vector<double> activities,
                                           const Caps& caps) {
    if (static_cast<int>(activities.size()) != g.n())
        throw InputError("activity vector length mismatch");
    for (double v : activities)
        if (!(v >= 0.0) || !std::isfinite(v)) throw InputError("activities must be nonnegative");
    if (g.n() > 64) throw SizeCapError("partition_function: more than 64 vertices");

    BitGraph bg(g);
    ZSolver zs{bg, activities, caps.memo_bytes, {}};
    PartitionFunctionResult res;
    res.z = g.n() == 0 ? 1.0 : zs.solve(bg.full);
    res.count_mode = std::all_of(activities.begin(), activities.end(),
                                 [](double v) { return v == 1.0; });
    if (res.count_mode) {
        double nearest = std::round(res.z);
        internal_check(std::abs(res.z - nearest) <= 1e-9 * std::max(1.0, std::abs(res.z)),
                       "count-mode partition function is not an integer");
        res.z = nearest;
    }
    res.activities = std::move(activities);
    return res;
}

PartitionFunctionResult partition_function(const Graph& g, double activity, const Caps& caps) {
    return partition_function(g, std::vector<double>(static_cast<std::size_t>(g.n()), activity),
                              caps);
}

double expectation(const Graph& g, const std::vector<double>& activities,
                   const std::function<double(const VertexSet&)>& f, const Caps& caps) {
    if (static_cast<int>(activities.size()) != g.n())
        throw InputError("activity vector length mismatch");
    double num = 0.0, den = 0.0;
    enumerate_independent_sets(
        g,
        [&](const VertexSet& s) {
            double p = 1.0;
            for (int v : s.members) p *= activities[static_cast<std::size_t>(v)];
            num += p * f(s);
            den += p;
        },
        caps);
    if (den == 0.0) throw InputError("expectation undefined: all activities vanish");
    return num / den;
}

namespace {

// First subset (in lexicographic member-list order over increasing sizes)
// satisfying pred; returns the minimum-cardinality witness.
template <typename Pred>
bool min_subset_search(int n, const Pred& pred, std::uint64_t& out, std::uint64_t& tested) {
    for (int k = 0; k <= n; ++k) {
        std::vector<int> idx(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
        while (true) {
            std::uint64_t mask = 0;
            for (int i : idx) mask |= 1ull << i;
            ++tested;
            if (pred(mask)) {
                out = mask;
                return true;
            }
            // next combination
            int i = k - 1;
            while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
            if (i < 0) break;
            ++idx[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < k; ++j)
                idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return false;
}

std::uint64_t dominated_by(const BitGraph& bg, std::uint64_t mask) {
    std::uint64_t cov = mask;
    std::uint64_t m = mask;
    while (m) {
        int v = std::countr_zero(m);
        m &= m - 1;
        cov |= bg.adj[static_cast<std::size_t>(v)];
    }
    return cov;
}

bool mask_independent(const BitGraph& bg, std::uint64_t mask) {
    std::uint64_t m = mask;
    while (m) {
        int v = std::countr_zero(m);
        m &= m - 1;
        if (bg.adj[static_cast<std::size_t>(v)] & mask) return false;
    }
    return true;
}

bool mask_connected(const BitGraph& bg, std::uint64_t mask) {
    if (mask == 0) return true;
    std::uint64_t comp = mask & (~mask + 1);
    while (true) {
        std::uint64_t next = comp;
        std::uint64_t m = comp;
        while (m) {
            int v = std::countr_zero(m);
            m &= m - 1;
            next |= bg.adj[static_cast<std::size_t>(v)] & mask;
        }
        if (next == comp) break;
        comp = next;
    }
    return comp == mask;
}

ExactSolution subset_solution(const Graph& g, const char* problem, std::uint64_t mask,
                              std::uint64_t nodes) {
    ExactSolution sol;
    sol.problem = problem;
    sol.set = set_from_mask64(g, mask);
    sol.objective = static_cast<double>(sol.set.members.size());
    sol.optimal = true;
    sol.nodes_explored = nodes;
    return sol;
}

} // namespace

ExactSolution mds_exact(const Graph& g, const Caps& caps) {
    require_cap(g.n(), caps.subset_search, "mds_exact");
    BitGraph bg(g);
    std::uint64_t mask = 0, nodes = 0;
    bool ok = min_subset_search(
        g.n(), [&](std::uint64_t m) { return dominated_by(bg, m) == bg.full; }, mask, nodes);
    internal_check(ok, "dominating set search failed");
    return subset_solution(g, "mds", mask, nodes);
}

ExactSolution mcds_exact(const Graph& g, const Caps& caps) {
    require_cap(g.n(), caps.subset_search, "mcds_exact");
    if (!g.connected()) throw InputError("mcds_exact requires a connected graph");
    BitGraph bg(g);
    std::uint64_t mask = 0, nodes = 0;
    bool ok = min_subset_search(
        g.n(),
        [&](std::uint64_t m) {
            return m != 0 && dominated_by(bg, m) == bg.full && mask_connected(bg, m);
        },
        mask, nodes);
    if (!ok && g.n() == 0) return subset_solution(g, "mcds", 0, nodes);
    internal_check(ok, "connected dominating set search failed");
    return subset_solution(g, "mcds", mask, nodes);
}

ExactSolution min_maximal_is_exact(const Graph& g, const Caps& caps) {
    require_cap(g.n(), caps.subset_search, "min_maximal_is_exact");
    BitGraph bg(g);
    std::uint64_t mask = 0, nodes = 0;
    bool ok = min_subset_search(
        g.n(),
        [&](std::uint64_t m) {
            return mask_independent(bg, m) && dominated_by(bg, m) == bg.full;
        },
        mask, nodes);
    internal_check(ok, "maximal independent set search failed");
    return subset_solution(g, "min_maximal_is", mask, nodes);
}

namespace {

bool color_rec(const BitGraph& bg, int k, int v, std::vector<int>& colors, int max_used) {
    if (v == bg.n) return true;
    std::uint64_t av = bg.adj[static_cast<std::size_t>(v)];
    // Colors above max_used+1 are interchangeable; trying one suffices.
    int limit = std::min(k - 1, max_used + 1);
    for (int c = 0; c <= limit; ++c) {
        bool clash = false;
        std::uint64_t m = av & ((1ull << v) - 1); // only earlier vertices are colored
        while (m) {
            int u = std::countr_zero(m);
            m &= m - 1;
            if (colors[static_cast<std::size_t>(u)] == c) {
                clash = true;
                break;
            }
        }
        if (clash) continue;
        colors[static_cast<std::size_t>(v)] = c;
        if (color_rec(bg, k, v + 1, colors, std::max(max_used, c))) return true;
        colors[static_cast<std::size_t>(v)] = -1;
    }
    return false;
}

} // namespace

ColoringResult chromatic_number_exact(const Graph& g, const Caps& caps) {
    require_cap(g.n(), caps.chromatic, "chromatic_number_exact");
    if (g.n() == 0) return ColoringResult{0, {}};
    BitGraph bg(g);
    for (int k = 1; k <= g.n(); ++k) {
        std::vector<int> colors(static_cast<std::size_t>(g.n()), -1);
        if (color_rec(bg, k, 0, colors, -1)) return ColoringResult{k, colors};
    }
    throw InternalError("chromatic number search failed");
}

} // namespace iset::oracle
