#include "prophet/instance_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "prophet/errors.hpp"

namespace prophet {

using ojson = nlohmann::ordered_json;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out << text;
  if (!out) throw InvalidArgument("write to '" + path + "' failed");
}

namespace {

std::string name_of(const ojson& j, const char* what) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw ParseError(std::string(what) + " must be a string or an integer");
}

const ojson& field(const ojson& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing field '") + key + "'");
  return *it;
}

std::size_t parse_edge_id(const std::string& key) {
  std::size_t used = 0;
  unsigned long long id = 0;
  try {
    id = std::stoull(key, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != key.size()) throw ParseError("edge id '" + key + "' is not a nonnegative integer");
  return static_cast<std::size_t>(id);
}

InstanceDocument from_json(const ojson& doc) {
  if (!doc.is_object()) throw ParseError("instance must be a JSON object");

  const ojson& nodes_j = field(doc, "nodes");
  if (!nodes_j.is_array() || nodes_j.size() < 2) throw ParseError("'nodes' must be an array with at least s and t");
  std::vector<std::string> names;
  std::map<std::string, NodeIndex> node_index;
  for (const auto& n : nodes_j) {
    names.push_back(name_of(n, "node name"));
    if (!node_index.emplace(names.back(), names.size() - 1).second)
      throw ParseError("duplicate node '" + names.back() + "'");
  }
  auto node = [&](const ojson& j) {
    const std::string name = name_of(j, "node reference");
    auto it = node_index.find(name);
    if (it == node_index.end()) throw ParseError("unknown node '" + name + "'");
    return it->second;
  };

  std::vector<Label> labels;
  std::map<std::string, LabelIndex> label_index;
  if (auto it = doc.find("labels"); it != doc.end() && !it->is_null()) {
    if (!it->is_object()) throw ParseError("'labels' must be an object {name: capacity}");
    for (const auto& [name, cap] : it->items()) {
      if (!cap.is_number_integer()) throw ParseError("capacity of label '" + name + "' must be an integer");
      label_index[name] = labels.size();
      labels.push_back(Label{name, cap.get<int>()});
    }
  }

  const ojson& edges_j = field(doc, "edges");
  if (!edges_j.is_array()) throw ParseError("'edges' must be an array");
  std::vector<EdgeDef> edges(edges_j.size());
  std::vector<bool> seen(edges_j.size(), false);
  for (const auto& e : edges_j) {
    if (!e.is_object()) throw ParseError("edge entries must be objects");
    const ojson& id_j = field(e, "id");
    if (!id_j.is_number_integer() || id_j.get<long long>() < 0) throw ParseError("edge id must be a nonnegative integer");
    const auto id = static_cast<std::size_t>(id_j.get<long long>());
    if (id >= edges.size()) throw ParseError("edge ids must be dense 0..m-1; got " + std::to_string(id));
    if (seen[id]) throw ParseError("duplicate edge id " + std::to_string(id));
    seen[id] = true;
    EdgeDef def{id, node(field(e, "src")), node(field(e, "dst")), {}};
    if (auto it = e.find("labels"); it != e.end() && !it->is_null()) {
      if (!it->is_array()) throw ParseError("edge labels must be an array");
      for (const auto& l : *it) {
        const std::string name = name_of(l, "label reference");
        auto found = label_index.find(name);
        if (found == label_index.end()) throw ParseError("edge " + std::to_string(id) + " uses unknown label '" + name + "'");
        def.labels.push_back(found->second);
      }
    }
    edges[id] = std::move(def);
  }

  std::vector<std::vector<EdgeId>> out(names.size());
  for (const auto& e : edges) out[e.src].push_back(e.id);

  std::vector<std::vector<Outcome>> tables(names.size());
  if (auto it = doc.find("outcomes"); it != doc.end() && !it->is_null()) {
    if (!it->is_object()) throw ParseError("'outcomes' must be an object keyed by node");
    for (const auto& [key, rows] : it->items()) {
      auto found = node_index.find(key);
      if (found == node_index.end()) throw ParseError("outcomes for unknown node '" + key + "'");
      const NodeIndex u = found->second;
      if (!rows.is_array()) throw ParseError("outcomes of node '" + key + "' must be an array");
      for (const auto& row : rows) {
        if (!row.is_object()) throw ParseError("outcome rows must be objects");
        const ojson& p = field(row, "p");
        Outcome o;
        if (p.is_number()) {
          o.mass = p.get<double>();
        } else if (p.is_string()) {
          const ParsedProbability parsed = parse_probability(p.get<std::string>());
          o.mass = parsed.value;
          if (parsed.exact) o.exact_mass = std::make_pair(parsed.numerator, parsed.denominator);
        } else {
          throw ParseError("outcome mass 'p' must be a number or a string like \"1/4\"");
        }
        o.values.assign(out[u].size(), 0.0);
        if (auto v = row.find("values"); v != row.end() && !v->is_null()) {
          if (!v->is_object()) throw ParseError("outcome 'values' must be an object {edge_id: value}");
          for (const auto& [edge_key, value] : v->items()) {
            const EdgeId e = parse_edge_id(edge_key);
            if (e >= edges.size() || edges[e].src != u)
              throw ParseError("outcome of node '" + key + "' sets edge " + edge_key + ", which does not leave it");
            if (!value.is_number()) throw ParseError("edge values must be numbers");
            o.values[static_cast<std::size_t>(
                std::find(out[u].begin(), out[u].end(), e) - out[u].begin())] = value.get<double>();
          }
        }
        tables[u].push_back(std::move(o));
      }
    }
  }

  InstanceDocument docout{Instance(std::move(names), std::move(labels), std::move(edges), std::move(tables)), nullptr};
  if (auto it = doc.find("metadata"); it != doc.end()) docout.metadata = *it;
  return docout;
}

}  // namespace

InstanceDocument parse_instance(const std::string& text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  try {
    return from_json(doc);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad instance document: ") + e.what());
  }
}

InstanceDocument load_instance(const std::string& path) { return parse_instance(read_text_file(path)); }

ojson instance_to_json(const Instance& g, const ojson& metadata) {
  ojson doc;
  doc["nodes"] = g.node_names();
  ojson labels = ojson::object();
  for (const auto& l : g.labels()) labels[l.name] = l.capacity;
  doc["labels"] = labels;
  ojson edges = ojson::array();
  for (const auto& e : g.edges()) {
    ojson names = ojson::array();
    for (LabelIndex l : e.labels) names.push_back(g.label(l).name);
    edges.push_back({{"id", e.id}, {"src", g.node_name(e.src)}, {"dst", g.node_name(e.dst)}, {"labels", names}});
  }
  doc["edges"] = edges;
  ojson outcomes = ojson::object();
  for (NodeIndex u = 0; u < g.node_count(); ++u) {
    if (g.out_edges(u).empty()) continue;
    ojson rows = ojson::array();
    for (const auto& o : g.outcomes(u)) {
      ojson row;
      if (o.exact_mass) {
        row["p"] = std::to_string(o.exact_mass->first) + "/" + std::to_string(o.exact_mass->second);
      } else {
        row["p"] = o.mass;
      }
      ojson values = ojson::object();
      for (std::size_t j = 0; j < g.out_edges(u).size(); ++j) values[std::to_string(g.out_edges(u)[j])] = o.values[j];
      row["values"] = values;
      rows.push_back(row);
    }
    outcomes[g.node_name(u)] = rows;
  }
  doc["outcomes"] = outcomes;
  if (!metadata.is_null()) doc["metadata"] = metadata;
  return doc;
}

void save_instance(const std::string& path, const Instance& g, const ojson& metadata) {
  write_text_file(path, instance_to_json(g, metadata).dump(2) + "\n");
}

PathCover parse_cover(const Instance& g, const std::string& text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed cover JSON: ") + e.what());
  }
  if (doc.is_object() && doc.contains("paths")) doc = doc["paths"];
  if (!doc.is_array()) throw ParseError("cover must be an array of edge-id paths");
  std::vector<std::vector<EdgeId>> paths;
  for (const auto& p : doc) {
    if (!p.is_array()) throw ParseError("each cover path must be an array of edge ids");
    std::vector<EdgeId> path;
    for (const auto& e : p) {
      if (!e.is_number_integer() || e.get<long long>() < 0) throw ParseError("edge ids must be nonnegative integers");
      path.push_back(static_cast<EdgeId>(e.get<long long>()));
      if (path.back() >= g.edge_count()) throw ParseError("cover uses unknown edge " + std::to_string(path.back()));
    }
    paths.push_back(std::move(path));
  }
  return make_cover(g, std::move(paths));
}

PathCover load_cover(const Instance& g, const std::string& path) { return parse_cover(g, read_text_file(path)); }

ojson cover_to_json(const PathCover& cover) {
  ojson paths = ojson::array();
  for (const auto& p : cover.paths) paths.push_back(p);
  return paths;
}

}  // namespace prophet
