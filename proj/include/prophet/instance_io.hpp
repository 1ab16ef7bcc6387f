#pragma once

// JSON instance files:
//   nodes:    array of names (strings or integers), topological, s first, t last
//   labels:   {name: capacity}
//   edges:    [{id, src, dst, labels: [name, ...]}]
//   outcomes: {node: [{p, values: {edge_id: value}}]}; p may be "1/4"
//   metadata: optional, carried through unchanged
// Outcome values not listed default to 0.

#include <string>

#include <json.hpp>

#include "prophet/instance.hpp"
#include "prophet/path_cover.hpp"

namespace prophet {

struct InstanceDocument {
  Instance instance;
  nlohmann::ordered_json metadata;
};

/// Throws ParseError on malformed documents and InvalidInstance on schema errors.
InstanceDocument parse_instance(const std::string& text);
InstanceDocument load_instance(const std::string& path);

nlohmann::ordered_json instance_to_json(const Instance& g, const nlohmann::ordered_json& metadata = nullptr);
void save_instance(const std::string& path, const Instance& g, const nlohmann::ordered_json& metadata = nullptr);

/// A cover file is a JSON array of edge-id arrays.
PathCover parse_cover(const Instance& g, const std::string& text);
PathCover load_cover(const Instance& g, const std::string& path);
nlohmann::ordered_json cover_to_json(const PathCover& cover);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace prophet
