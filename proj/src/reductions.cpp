#include "iset/reductions.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "iset/errors.hpp"
#include "iset/json_io.hpp"

namespace iset::reduce {

using nlohmann::json;

const char* to_string(SourceKind k) {
    switch (k) {
        case SourceKind::coloring: return "coloring";
        case SourceKind::sat: return "sat";
        case SourceKind::paintshop: return "paintshop";
        case SourceKind::clique: return "clique";
        case SourceKind::vertex_cover: return "vertex_cover";
    }
    return "clique";
}

namespace {

SourceKind kind_from_string(const std::string& s) {
    if (s == "coloring") return SourceKind::coloring;
    if (s == "sat") return SourceKind::sat;
    if (s == "paintshop") return SourceKind::paintshop;
    if (s == "clique") return SourceKind::clique;
    if (s == "vertex_cover") return SourceKind::vertex_cover;
    throw InputError("unknown reduction source kind: " + s);
}

} // namespace

Cnf parse_dimacs(const std::string& text) {
    Cnf cnf;
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    std::vector<int> current;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c' || line[0] == '%') continue;
        std::istringstream ls(line);
        if (line[0] == 'p') {
            std::string p, fmt;
            int nv = 0, nc = 0;
            if (!(ls >> p >> fmt >> nv >> nc) || fmt != "cnf")
                throw InputError("malformed DIMACS header: " + line);
            cnf.n_vars = nv;
            have_header = true;
            continue;
        }
        int lit;
        while (ls >> lit) {
            if (lit == 0) {
                cnf.clauses.push_back(current);
                current.clear();
            } else {
                if (std::abs(lit) > cnf.n_vars) cnf.n_vars = std::abs(lit);
                current.push_back(lit);
            }
        }
    }
    if (!current.empty()) cnf.clauses.push_back(current);
    if (!have_header && cnf.clauses.empty()) throw InputError("no DIMACS content found");
    return cnf;
}

std::string to_dimacs(const Cnf& cnf) {
    std::ostringstream out;
    out << "p cnf " << cnf.n_vars << " " << cnf.clauses.size() << "\n";
    for (const auto& clause : cnf.clauses) {
        for (int lit : clause) out << lit << " ";
        out << "0\n";
    }
    return out.str();
}

ReductionCertificate coloring_to_mis(const Graph& g, int k) {
    if (k < 1) throw InputError("coloring_to_mis requires at least one color");
    const int n = g.n();
    std::vector<std::pair<int, int>> edges;
    auto vid = [k](int u, int c) { return u * k + c; };
    for (int u = 0; u < n; ++u)
        for (int c = 0; c < k; ++c)
            for (int c2 = c + 1; c2 < k; ++c2) edges.emplace_back(vid(u, c), vid(u, c2));
    for (const auto& [u, v] : g.edges())
        for (int c = 0; c < k; ++c) edges.emplace_back(vid(u, c), vid(v, c));

    ReductionCertificate cert;
    cert.source_kind = SourceKind::coloring;
    cert.derived = Graph::general(n * k, std::move(edges));
    cert.threshold = static_cast<double>(n);
    cert.gadget = ColoringGadget{k, n, g.edges()};
    return cert;
}

std::optional<ReductionCertificate> sat_to_mis(const Cnf& cnf) {
    if (cnf.clauses.empty()) throw InputError("sat_to_mis requires at least one clause");
    for (const auto& clause : cnf.clauses)
        if (clause.empty()) return std::nullopt; // empty clause: trivially unsatisfiable

    SatGadget gadget;
    gadget.cnf = cnf;
    std::vector<std::pair<int, int>> edges;
    for (std::size_t ci = 0; ci < cnf.clauses.size(); ++ci) {
        // duplicate literals inside a clause are collapsed
        std::vector<int> lits = cnf.clauses[ci];
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        for (int lit : lits) gadget.occurrences.emplace_back(static_cast<int>(ci), lit);
    }
    const int m = static_cast<int>(gadget.occurrences.size());
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            auto [ci, li] = gadget.occurrences[static_cast<std::size_t>(i)];
            auto [cj, lj] = gadget.occurrences[static_cast<std::size_t>(j)];
            if (ci == cj || li == -lj) edges.emplace_back(i, j);
        }

    ReductionCertificate cert;
    cert.source_kind = SourceKind::sat;
    cert.derived = Graph::general(m, std::move(edges));
    cert.threshold = static_cast<double>(cnf.clauses.size());
    cert.gadget = std::move(gadget);
    return cert;
}

std::vector<int> paintshop_seq_from_string(const std::string& word) {
    std::map<char, int> ids;
    std::vector<int> seq;
    for (char ch : word) {
        auto [it, inserted] = ids.emplace(ch, static_cast<int>(ids.size()));
        seq.push_back(it->second);
    }
    return seq;
}

ReductionCertificate paintshop_to_mwis(const std::vector<int>& seq) {
    // occurrence bookkeeping: every car id must appear exactly twice
    std::map<int, int> count;
    for (int car : seq) ++count[car];
    int n_cars = static_cast<int>(count.size());
    for (auto [car, c] : count) {
        if (car < 0 || car >= n_cars)
            throw InputError("paintshop car ids must be dense 0..n_cars-1");
        if (c != 2) throw InputError("paintshop car " + std::to_string(car) + " appears " +
                                     std::to_string(c) + " times, expected exactly 2");
    }

    std::vector<int> occurrence(seq.size(), 0); // 0 = first, 1 = second occurrence
    {
        std::vector<int> seen(static_cast<std::size_t>(n_cars), 0);
        for (std::size_t p = 0; p < seq.size(); ++p) {
            occurrence[p] = seen[static_cast<std::size_t>(seq[p])];
            ++seen[static_cast<std::size_t>(seq[p])];
        }
    }

    // Choice gadget: vertices 2c (paint first occurrence R) and 2c+1 (B),
    // joined by an edge. Weight scale: choices 10, bonuses 1, so dropping a
    // choice can never pay off (a car touches at most four boundaries).
    constexpr double kChoiceWeight = 10.0;
    constexpr double kBonusWeight = 1.0;
    std::vector<std::pair<int, int>> edges;
    std::vector<double> weights;
    for (int c = 0; c < n_cars; ++c) {
        edges.emplace_back(2 * c, 2 * c + 1);
        weights.push_back(kChoiceWeight);
        weights.push_back(kChoiceWeight);
    }

    int next = 2 * n_cars;
    int forced_switches = 0, diff_boundaries = 0;
    for (std::size_t p = 0; p + 1 < seq.size(); ++p) {
        int a = seq[p], b = seq[p + 1];
        if (a == b) {
            ++forced_switches; // the two occurrences must differ
            continue;
        }
        ++diff_boundaries;
        int parity = occurrence[p] ^ occurrence[p + 1];
        // No switch at this boundary iff first(b) = first(a) xor parity.
        for (int x = 0; x <= 1; ++x) {
            int y = x ^ parity;
            int u = next++;
            weights.push_back(kBonusWeight);
            edges.emplace_back(u, 2 * a + (1 - x)); // blocked by the wrong choice of a
            edges.emplace_back(u, 2 * b + (1 - y)); // blocked by the wrong choice of b
        }
    }

    ReductionCertificate cert;
    cert.source_kind = SourceKind::paintshop;
    cert.derived = Graph::general(next, std::move(edges), std::move(weights));
    double base = kChoiceWeight * n_cars + kBonusWeight * (diff_boundaries + forced_switches);
    cert.threshold = base;
    cert.gadget = PaintshopGadget{seq, n_cars, base};
    return cert;
}

ReductionCertificate clique_or_cover(const Graph& g, Which which) {
    ReductionCertificate cert;
    if (which == Which::max_clique) {
        cert.source_kind = SourceKind::clique;
        cert.derived = complement(g);
        cert.threshold = 0.0;
        cert.gadget = CliqueGadget{};
    } else {
        cert.source_kind = SourceKind::vertex_cover;
        cert.derived = g;
        cert.threshold = 0.0;
        cert.gadget = CoverGadget{};
    }
    return cert;
}

namespace {

void require_independent(const ReductionCertificate& cert, const VertexSet& solution) {
    if (!classify_set(cert.derived, solution).independent)
        throw InputError("decode: solution violates independence in the derived graph");
}

ColoringAnswer decode_coloring(const ColoringGadget& gadget, const VertexSet& solution) {
    ColoringAnswer ans;
    ans.colors.assign(static_cast<std::size_t>(gadget.source_n), -1);
    for (int v : solution.members) {
        int u = v / gadget.k;
        int c = v % gadget.k;
        ans.colors[static_cast<std::size_t>(u)] = c; // clique makes this unique
    }
    for (int u = 0; u < gadget.source_n; ++u)
        if (ans.colors[static_cast<std::size_t>(u)] < 0) ans.uncolored.push_back(u);
    ans.complete = ans.uncolored.empty();
    ans.valid = true;
    for (const auto& [u, v] : gadget.source_edges) {
        int cu = ans.colors[static_cast<std::size_t>(u)];
        int cv = ans.colors[static_cast<std::size_t>(v)];
        if (cu >= 0 && cu == cv) ans.valid = false;
    }
    return ans;
}

SatAnswer decode_sat(const SatGadget& gadget, const VertexSet& solution, double threshold) {
    SatAnswer ans;
    ans.assignment.assign(static_cast<std::size_t>(gadget.cnf.n_vars), 0);
    for (int v : solution.members) {
        int lit = gadget.occurrences[static_cast<std::size_t>(v)].second;
        if (lit > 0) ans.assignment[static_cast<std::size_t>(lit - 1)] = 1;
        // negative literals keep the default false
    }
    ans.satisfiable_at_threshold =
        static_cast<double>(solution.members.size()) >= threshold;
    ans.valid = true;
    for (const auto& clause : gadget.cnf.clauses) {
        bool sat = false;
        for (int lit : clause) {
            bool val = ans.assignment[static_cast<std::size_t>(std::abs(lit) - 1)];
            if ((lit > 0) == val) {
                sat = true;
                break;
            }
        }
        if (!sat) {
            ans.valid = false;
            break;
        }
    }
    return ans;
}

PaintshopAnswer decode_paintshop(const PaintshopGadget& gadget, const VertexSet& solution) {
    PaintshopAnswer ans;
    ans.first_colors.assign(static_cast<std::size_t>(gadget.n_cars), -1);
    ans.valid = true;
    for (int v : solution.members) {
        if (v >= 2 * gadget.n_cars) continue; // bonus vertex
        int car = v / 2;
        ans.first_colors[static_cast<std::size_t>(car)] = v % 2;
    }
    for (auto& c : ans.first_colors)
        if (c < 0) {
            c = 0; // unselected car defaults to R; flagged invalid
            ans.valid = false;
        }
    std::vector<int> seen(static_cast<std::size_t>(gadget.n_cars), 0);
    for (int car : gadget.seq) {
        int occ = seen[static_cast<std::size_t>(car)]++;
        ans.position_colors.push_back(ans.first_colors[static_cast<std::size_t>(car)] ^ occ);
    }
    for (std::size_t p = 0; p + 1 < ans.position_colors.size(); ++p)
        if (ans.position_colors[p] != ans.position_colors[p + 1]) ++ans.switches;
    return ans;
}

} // namespace

Decoded decode(const ReductionCertificate& cert, const VertexSet& solution) {
    require_independent(cert, solution);
    switch (cert.source_kind) {
        case SourceKind::coloring:
            return decode_coloring(std::get<ColoringGadget>(cert.gadget), solution);
        case SourceKind::sat:
            return decode_sat(std::get<SatGadget>(cert.gadget), solution, cert.threshold);
        case SourceKind::paintshop:
            return decode_paintshop(std::get<PaintshopGadget>(cert.gadget), solution);
        case SourceKind::clique: {
            CliqueAnswer ans;
            ans.clique = solution.members;
            ans.valid = true; // IS of the complement is a clique by construction
            return ans;
        }
        case SourceKind::vertex_cover: {
            CoverAnswer ans;
            for (int v = 0; v < cert.derived.n(); ++v)
                if (!std::binary_search(solution.members.begin(), solution.members.end(), v))
                    ans.cover.push_back(v);
            ans.valid = true;
            for (const auto& [u, v] : cert.derived.edges())
                if (!std::binary_search(ans.cover.begin(), ans.cover.end(), u) &&
                    !std::binary_search(ans.cover.begin(), ans.cover.end(), v))
                    ans.valid = false;
            return ans;
        }
    }
    throw InternalError("unhandled reduction kind");
}

json certificate_to_json(const ReductionCertificate& cert) {
    json j{{"source_kind", to_string(cert.source_kind)},
           {"threshold", cert.threshold},
           {"derived", graph_to_json(cert.derived)}};
    json decode_map = json::array();
    if (const auto* g = std::get_if<ColoringGadget>(&cert.gadget)) {
        for (int v = 0; v < cert.derived.n(); ++v)
            decode_map.push_back({{"vertex", v}, {"source", v / g->k}, {"color", v % g->k}});
        j["gadget"] = {{"k", g->k}, {"source_n", g->source_n}, {"source_edges", g->source_edges}};
    } else if (const auto* g = std::get_if<SatGadget>(&cert.gadget)) {
        for (int v = 0; v < cert.derived.n(); ++v) {
            auto [ci, lit] = g->occurrences[static_cast<std::size_t>(v)];
            decode_map.push_back({{"vertex", v}, {"clause", ci}, {"literal", lit}});
        }
        j["gadget"] = {{"n_vars", g->cnf.n_vars}, {"clauses", g->cnf.clauses}};
    } else if (const auto* g = std::get_if<PaintshopGadget>(&cert.gadget)) {
        for (int v = 0; v < cert.derived.n(); ++v) {
            if (v < 2 * g->n_cars)
                decode_map.push_back({{"vertex", v},
                                      {"role", "choice"},
                                      {"car", v / 2},
                                      {"color", v % 2 == 0 ? "R" : "B"}});
            else
                decode_map.push_back({{"vertex", v}, {"role", "bonus"}});
        }
        j["gadget"] = {{"seq", g->seq}, {"n_cars", g->n_cars}, {"base", g->base}};
    } else {
        for (int v = 0; v < cert.derived.n(); ++v)
            decode_map.push_back({{"vertex", v}, {"source", v}});
        j["gadget"] = json::object();
    }
    j["decode_map"] = decode_map;
    return j;
}

ReductionCertificate certificate_from_json(const json& j) {
    try {
        ReductionCertificate cert;
        cert.source_kind = kind_from_string(j.at("source_kind").get<std::string>());
        cert.threshold = j.at("threshold").get<double>();
        cert.derived = graph_from_json(j.at("derived"));
        const auto& g = j.at("gadget");
        switch (cert.source_kind) {
            case SourceKind::coloring: {
                ColoringGadget cg;
                cg.k = g.at("k").get<int>();
                cg.source_n = g.at("source_n").get<int>();
                for (const auto& e : g.at("source_edges"))
                    cg.source_edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
                cert.gadget = std::move(cg);
                break;
            }
            case SourceKind::sat: {
                SatGadget sg;
                sg.cnf.n_vars = g.at("n_vars").get<int>();
                for (const auto& c : g.at("clauses"))
                    sg.cnf.clauses.push_back(c.get<std::vector<int>>());
                for (const auto& entry : j.at("decode_map"))
                    sg.occurrences.emplace_back(entry.at("clause").get<int>(),
                                                entry.at("literal").get<int>());
                cert.gadget = std::move(sg);
                break;
            }
            case SourceKind::paintshop: {
                PaintshopGadget pg;
                pg.seq = g.at("seq").get<std::vector<int>>();
                pg.n_cars = g.at("n_cars").get<int>();
                pg.base = g.at("base").get<double>();
                cert.gadget = std::move(pg);
                break;
            }
            case SourceKind::clique:
                cert.gadget = CliqueGadget{};
                break;
            case SourceKind::vertex_cover:
                cert.gadget = CoverGadget{};
                break;
        }
        return cert;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed certificate JSON: ") + e.what());
    }
}

json decoded_to_json(const Decoded& d) {
    if (const auto* a = std::get_if<ColoringAnswer>(&d))
        return json{{"answer", "coloring"},
                    {"complete", a->complete},
                    {"colors", a->colors},
                    {"uncolored", a->uncolored},
                    {"valid", a->valid}};
    if (const auto* a = std::get_if<SatAnswer>(&d)) {
        std::vector<bool> assignment(a->assignment.begin(), a->assignment.end());
        return json{{"answer", "sat"},
                    {"satisfiable_at_threshold", a->satisfiable_at_threshold},
                    {"assignment", assignment},
                    {"valid", a->valid}};
    }
    if (const auto* a = std::get_if<PaintshopAnswer>(&d))
        return json{{"answer", "paintshop"},
                    {"first_colors", a->first_colors},
                    {"position_colors", a->position_colors},
                    {"switches", a->switches},
                    {"valid", a->valid}};
    if (const auto* a = std::get_if<CliqueAnswer>(&d))
        return json{{"answer", "clique"}, {"clique", a->clique}, {"valid", a->valid}};
    const auto& a = std::get<CoverAnswer>(d);
    return json{{"answer", "vertex_cover"}, {"cover", a.cover}, {"valid", a.valid}};
}

} // namespace iset::reduce
