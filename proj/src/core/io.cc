// Copyright 2026 The icsroute Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/io.h"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

namespace icsroute {

using nlohmann::json;

namespace {

Error ParseError(const std::string& what) {
  return Error(ErrorCode::kParse, what);
}

template <typename T>
T Field(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad field '") + key + "': " + e.what());
  }
}

std::vector<VertexId> VertexList(const json& j) {
  std::vector<VertexId> out;
  if (j.is_null()) return out;
  if (!j.is_array()) throw ParseError("expected a vertex array");
  for (const json& v : j) out.push_back(v.get<VertexId>());
  return out;
}

}  // namespace

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

json ReadJsonFile(const std::string& path) {
  const std::string text = ReadFile(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

json TopologyToJson(const Topology& topology) {
  json vertices = json::array();
  for (const Vertex& v : topology.vertices()) {
    vertices.push_back(
        {{"id", v.id}, {"label", v.label}, {"kind", std::string(KindName(v.kind))}});
  }
  json links = json::array();
  for (const Link& l : topology.links()) {
    links.push_back({{"a", l.a}, {"b", l.b}, {"capacity_bps", l.capacity}});
  }
  json j = {{"vertices", vertices}, {"links", links}};
  j["ids"] = topology.ids() == kNoVertex ? json(nullptr) : json(topology.ids());
  return j;
}

Topology TopologyFromJson(const json& j) {
  if (!j.is_object()) throw ParseError("topology must be an object");
  Topology topo;
  std::unordered_map<std::int64_t, VertexId> remap;
  for (const json& v : Field<json>(j, "vertices")) {
    const auto file_id = Field<std::int64_t>(v, "id");
    const auto kind = Field<std::string>(v, "kind");
    VertexKind k;
    if (kind == "switch") {
      k = VertexKind::kSwitch;
    } else if (kind == "device") {
      k = VertexKind::kDevice;
    } else {
      throw ParseError("unknown vertex kind '" + kind + "'");
    }
    const std::string label = v.contains("label") ? v["label"].get<std::string>() : "";
    if (!remap.emplace(file_id, topo.AddVertex(k, label)).second) {
      throw ParseError("duplicate vertex id " + std::to_string(file_id));
    }
  }
  auto lookup = [&](std::int64_t file_id) {
    auto it = remap.find(file_id);
    if (it == remap.end()) {
      throw ParseError("unknown vertex id " + std::to_string(file_id));
    }
    return it->second;
  };
  for (const json& l : Field<json>(j, "links")) {
    topo.AddLink(lookup(Field<std::int64_t>(l, "a")),
                 lookup(Field<std::int64_t>(l, "b")),
                 Field<Bps>(l, "capacity_bps"));
  }
  if (j.contains("ids") && !j["ids"].is_null()) {
    topo.set_ids(lookup(j["ids"].get<std::int64_t>()));
  }
  return topo;
}

Topology ParseGraphMl(std::string_view xml) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in{std::string(xml)};
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError(std::string("graphml: ") + e.what());
  }
  const pt::ptree* root = tree.get_child_optional("graphml").get_ptr();
  if (root == nullptr) throw ParseError("graphml: missing <graphml> root");

  std::string label_key;
  std::set<std::string> bandwidth_keys;
  for (const auto& [tag, child] : *root) {
    if (tag != "key") continue;
    const auto id = child.get<std::string>("<xmlattr>.id", "");
    // "attr.name" contains the default path separator.
    const auto name =
        child.get<std::string>(pt::ptree::path_type("<xmlattr>/attr.name", '/'), "");
    const auto target = child.get<std::string>("<xmlattr>.for", "");
    if (target == "node" && name == "label") label_key = id;
    if (target == "edge" &&
        (name == "LinkSpeedRaw" || name == "bandwidth" || name == "capacity_bps")) {
      bandwidth_keys.insert(id);
    }
  }
  const pt::ptree* graph = root->get_child_optional("graph").get_ptr();
  if (graph == nullptr) throw ParseError("graphml: missing <graph>");

  Topology topo;
  std::map<std::string, VertexId> remap;
  std::set<std::pair<VertexId, VertexId>> seen;
  for (const auto& [tag, child] : *graph) {
    if (tag == "node") {
      const auto id = child.get<std::string>("<xmlattr>.id");
      std::string label = id;
      for (const auto& [dtag, data] : child) {
        if (dtag == "data" && data.get<std::string>("<xmlattr>.key", "") == label_key) {
          label = data.get_value<std::string>();
        }
      }
      if (!remap.emplace(id, topo.AddVertex(VertexKind::kSwitch, label)).second) {
        throw ParseError("graphml: duplicate node " + id);
      }
    }
  }
  for (const auto& [tag, child] : *graph) {
    if (tag != "edge") continue;
    const auto src = child.get<std::string>("<xmlattr>.source");
    const auto dst = child.get<std::string>("<xmlattr>.target");
    auto a = remap.find(src);
    auto b = remap.find(dst);
    if (a == remap.end() || b == remap.end()) {
      throw ParseError("graphml: edge to unknown node " + src + "-" + dst);
    }
    if (a->second == b->second) continue;
    const auto key = std::minmax(a->second, b->second);
    if (!seen.insert(key).second) continue;
    Bps capacity = kGbps;
    for (const auto& [dtag, data] : child) {
      if (dtag == "data" &&
          bandwidth_keys.count(data.get<std::string>("<xmlattr>.key", ""))) {
        const double raw = data.get_value<double>();
        if (raw > 0) capacity = static_cast<Bps>(std::llround(raw));
      }
    }
    topo.AddLink(a->second, b->second, capacity);
  }
  return topo;
}

Topology LoadTopology(const std::string& path) {
  auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() &&
           path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  if (ends_with(".graphml") || ends_with(".xml")) {
    return ParseGraphMl(ReadFile(path));
  }
  return TopologyFromJson(ReadJsonFile(path));
}

json InstanceToJson(const Instance& instance) {
  json critical = json::array();
  for (const CriticalStream& s : instance.critical) {
    critical.push_back({{"id", s.id},
                        {"src", s.src},
                        {"dst", s.dst},
                        {"demand_bps", s.demand},
                        {"relevance", s.relevance}});
  }
  return {{"topology", TopologyToJson(instance.topology)},
          {"critical", critical},
          {"standard_budget_bps", instance.standard_budget},
          {"alpha", instance.alpha},
          {"reserve_fraction", instance.reserve_fraction},
          {"substations", instance.substations},
          {"seed", instance.seed},
          {"backbone",
           {{"routers", instance.backbone_routers},
            {"links", instance.backbone_links}}}};
}

Instance InstanceFromJson(const json& j) {
  Instance inst;
  // Instances refer to dense ids, so the topology must already be dense.
  inst.topology = TopologyFromJson(Field<json>(j, "topology"));
  for (const json& s : Field<json>(j, "critical")) {
    CriticalStream cs;
    cs.id = Field<StreamId>(s, "id");
    cs.src = Field<VertexId>(s, "src");
    cs.dst = Field<VertexId>(s, "dst");
    cs.demand = Field<Bps>(s, "demand_bps");
    cs.relevance = s.contains("relevance") ? s["relevance"].get<int>() : 1;
    inst.critical.push_back(cs);
  }
  if (j.contains("standard_budget_bps")) {
    inst.standard_budget = j["standard_budget_bps"].get<std::vector<Bps>>();
  }
  if (inst.standard_budget.empty()) {
    inst.standard_budget.assign(inst.topology.num_edges(), 0);
  }
  if (static_cast<int>(inst.standard_budget.size()) != inst.topology.num_edges()) {
    throw ParseError("standard_budget_bps must list one value per directed edge");
  }
  inst.alpha = j.value("alpha", 0.0);
  inst.reserve_fraction = j.value("reserve_fraction", 0.0);
  inst.substations = j.value("substations", 0);
  inst.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("backbone")) {
    inst.backbone_routers = j["backbone"].value("routers", 0);
    inst.backbone_links = j["backbone"].value("links", 0);
  }
  return inst;
}

Instance LoadInstance(const std::string& path) {
  return InstanceFromJson(ReadJsonFile(path));
}

void SaveInstance(const Instance& instance, const std::string& path) {
  WriteFile(path, InstanceToJson(instance).dump(1) + "\n");
}

json PlanToJson(const OfflinePlan& plan) {
  json streams = json::array();
  for (const PlanEntry& e : plan.streams) {
    json s = {{"id", e.stream_id}, {"path", e.path}, {"observed", e.observed}};
    s["op"] = e.op ? json(*e.op) : json(nullptr);
    s["replica_path"] = e.replica_path.empty() ? json(nullptr) : json(e.replica_path);
    streams.push_back(std::move(s));
  }
  return {{"status", std::string(StatusName(plan.status))},
          {"objective", RationalToString(plan.objective)},
          {"objective_approx", RationalToDouble(plan.objective)},
          {"streams", streams}};
}

OfflinePlan PlanFromJson(const json& j) {
  OfflinePlan plan;
  const auto status = j.value("status", std::string("exact"));
  if (status == "exact") {
    plan.status = SolveStatus::kExact;
  } else if (status == "enumeration-limited") {
    plan.status = SolveStatus::kEnumerationLimited;
  } else if (status == "infeasible") {
    plan.status = SolveStatus::kInfeasible;
  } else {
    throw ParseError("unknown plan status '" + status + "'");
  }
  if (j.contains("objective")) {
    plan.objective = RationalFromString(j["objective"].get<std::string>());
  }
  for (const json& s : Field<json>(j, "streams")) {
    PlanEntry e;
    e.stream_id = Field<StreamId>(s, "id");
    e.path = VertexList(Field<json>(s, "path"));
    e.observed = s.value("observed", false);
    if (s.contains("op") && !s["op"].is_null()) e.op = s["op"].get<VertexId>();
    if (s.contains("replica_path")) e.replica_path = VertexList(s["replica_path"]);
    plan.streams.push_back(std::move(e));
  }
  return plan;
}

OfflinePlan LoadPlan(const std::string& path) {
  return PlanFromJson(ReadJsonFile(path));
}

void SavePlan(const OfflinePlan& plan, const std::string& path) {
  WriteFile(path, PlanToJson(plan).dump(1) + "\n");
}

std::string RationalToString(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

Rational RationalFromString(std::string_view s) {
  try {
    const auto slash = s.find('/');
    if (slash == std::string_view::npos) {
      return Rational(boost::multiprecision::cpp_int(std::string(s)));
    }
    return Rational(boost::multiprecision::cpp_int(std::string(s.substr(0, slash))),
                    boost::multiprecision::cpp_int(std::string(s.substr(slash + 1))));
  } catch (const std::exception&) {
    throw ParseError("bad rational '" + std::string(s) + "'");
  }
}

double RationalToDouble(const Rational& r) { return r.convert_to<double>(); }

Bps FloorToBps(const Rational& r) {
  const boost::multiprecision::cpp_int q =
      boost::multiprecision::numerator(r) / boost::multiprecision::denominator(r);
  return q.convert_to<Bps>();
}

}  // namespace icsroute
