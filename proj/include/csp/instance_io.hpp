#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "csp/instance.hpp"

namespace csp {

using json = nlohmann::json;

inline json instance_to_json(const Instance& inst) {
  json j;
  j["version"] = 1;
  j["directed"] = inst.graph.directed;
  j["vertices"] = inst.graph.vertex_count;
  if (!inst.graph.labels.empty()) j["labels"] = inst.graph.labels;
  json edges = json::array();
  for (auto [u, v] : inst.graph.edges()) edges.push_back({u, v});
  j["edges"] = std::move(edges);
  j["customers"] = inst.customers;
  j["starts_i"] = inst.starts_i;
  j["starts_ii"] = inst.starts_ii;
  j["passing_allowed"] = inst.passing_allowed;
  j["draw_rank"] = std::string(to_string(inst.draw_rank));
  return j;
}

// Schema errors throw InvalidInstance; rule violations (start on a customer,
// ...) are left for validate_instance to report.
inline Instance instance_from_json(const json& j) {
  auto need = [&](const char* key) -> const json& {
    if (!j.contains(key)) throw InvalidInstance(std::string("missing field '") + key + "'");
    return j.at(key);
  };
  try {
    if (!j.is_object()) throw InvalidInstance("instance must be a JSON object");
    if (need("version").get<int>() != 1) throw InvalidInstance("unsupported version");
    Instance inst;
    const int n = need("vertices").get<int>();
    if (n <= 0) throw InvalidInstance("vertices must be positive");
    inst.graph = Graph::empty(n, need("directed").get<bool>());
    if (j.contains("labels")) {
      inst.graph.labels = j.at("labels").get<std::vector<std::string>>();
      if (static_cast<int>(inst.graph.labels.size()) != n) throw InvalidInstance("labels must have one entry per vertex");
    }
    for (const auto& e : need("edges")) {
      if (!e.is_array() || e.size() != 2) throw InvalidInstance("edge must be a pair");
      Vertex u = e[0].get<int>(), v = e[1].get<int>();
      if (u < 0 || u >= n || v < 0 || v >= n) throw InvalidInstance("edge endpoint out of range");
      inst.graph.add_edge(u, v);
    }
    inst.graph.canonicalize();
    inst.customers = need("customers").get<std::vector<Vertex>>();
    std::sort(inst.customers.begin(), inst.customers.end());
    inst.starts_i = need("starts_i").get<std::vector<Vertex>>();
    inst.starts_ii = need("starts_ii").get<std::vector<Vertex>>();
    inst.passing_allowed = j.value("passing_allowed", false);
    inst.draw_rank = parse_draw_rank(j.value("draw_rank", std::string("below_tie")));
    return inst;
  } catch (const json::exception& e) {
    throw InvalidInstance(std::string("malformed instance: ") + e.what());
  }
}

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return instance_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw InvalidInstance(path + ": " + e.what());
  }
}

inline void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << instance_to_json(inst).dump(1) << "\n";
}

}  // namespace csp
