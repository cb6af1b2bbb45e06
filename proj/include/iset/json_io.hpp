#pragma once

#include <filesystem>
#include <string>

#include "iset/graph.hpp"
#include <json.hpp>

namespace iset {

// Graph wire format:
//   {"kind":"unitdisk|geometric|general",
//    "vertices":[{"id":0,"weight":1.0,"pos":[0.0,0.0]},...],
//    "edges":[[0,1],...], "radius":1.2}
// For kind=unitdisk the edges field is optional on read (recomputed from
// coordinates) and always written for audit.
nlohmann::json graph_to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& j);

nlohmann::json vertex_set_to_json(const VertexSet& s);
VertexSet vertex_set_from_json(const nlohmann::json& j, const Graph& g);

nlohmann::json load_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

} // namespace iset
