#include "iset/json_io.hpp"

#include <fstream>

#include "iset/errors.hpp"

namespace iset {

using nlohmann::json;

json graph_to_json(const Graph& g) {
    json vertices = json::array();
    for (int v = 0; v < g.n(); ++v) {
        json jv{{"id", v}, {"weight", g.weight(v)}};
        if (!g.coords().empty()) {
            const auto& c = g.coords()[static_cast<std::size_t>(v)];
            jv["pos"] = {c.x, c.y};
        }
        vertices.push_back(jv);
    }
    json edges = json::array();
    for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
    json out{{"kind", to_string(g.kind())}, {"vertices", vertices}, {"edges", edges}};
    if (g.radius()) out["radius"] = *g.radius();
    return out;
}

Graph graph_from_json(const json& j) {
    try {
        GraphKind kind = graph_kind_from_string(j.at("kind").get<std::string>());
        const auto& jv = j.at("vertices");
        int n = static_cast<int>(jv.size());
        std::vector<double> weights(static_cast<std::size_t>(n), 1.0);
        std::vector<Vec2> coords;
        bool have_pos = false;
        for (const auto& v : jv) {
            int id = v.at("id").get<int>();
            if (id < 0 || id >= n) throw InputError("vertex id out of range in graph JSON");
            if (v.contains("weight")) weights[static_cast<std::size_t>(id)] = v["weight"].get<double>();
            if (v.contains("pos")) have_pos = true;
        }
        if (have_pos) {
            coords.resize(static_cast<std::size_t>(n));
            for (const auto& v : jv) {
                int id = v.at("id").get<int>();
                const auto& p = v.at("pos");
                coords[static_cast<std::size_t>(id)] = Vec2{p.at(0).get<double>(), p.at(1).get<double>()};
            }
        }
        std::vector<std::pair<int, int>> edges;
        if (j.contains("edges"))
            for (const auto& e : j["edges"]) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());

        switch (kind) {
            case GraphKind::unitdisk: {
                if (!have_pos || !j.contains("radius"))
                    throw InputError("unitdisk graph JSON requires pos and radius");
                Graph g = Graph::unit_disk(std::move(coords), j["radius"].get<double>(), std::move(weights));
                // When an edges field is present it must match the geometric rule.
                if (j.contains("edges")) {
                    auto sorted = edges;
                    for (auto& [a, b] : sorted)
                        if (a > b) std::swap(a, b);
                    std::sort(sorted.begin(), sorted.end());
                    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
                    if (sorted != g.edges())
                        throw InputError("unitdisk graph JSON edges disagree with coords/radius");
                }
                return g;
            }
            case GraphKind::geometric:
                if (!have_pos) throw InputError("geometric graph JSON requires pos");
                return Graph::geometric(std::move(coords), std::move(edges), std::move(weights));
            case GraphKind::general:
            default:
                return Graph::general(n, std::move(edges), std::move(weights));
        }
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed graph JSON: ") + e.what());
    }
}

json vertex_set_to_json(const VertexSet& s) {
    return json{{"members", s.members}, {"weight", s.weight}};
}

VertexSet vertex_set_from_json(const json& j, const Graph& g) {
    try {
        std::vector<int> members;
        if (j.is_array())
            members = j.get<std::vector<int>>();
        else
            members = j.at("members").get<std::vector<int>>();
        return make_vertex_set(g, std::move(members));
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed vertex set JSON: ") + e.what());
    }
}

json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path.string());
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw InputError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write file: " + path.string());
    out << j.dump(2) << "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write file: " + path.string());
    out << text;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path.string());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

} // namespace iset
