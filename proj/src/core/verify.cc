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

#include "core/verify.h"

#include <algorithm>
#include <set>

#include "core/io.h"

namespace icsroute {

namespace {

std::string Hop(VertexId a, VertexId b) {
  return std::to_string(a) + "->" + std::to_string(b);
}

class Checker {
 public:
  Checker(const Topology& topo, std::vector<Violation>& out) : topo_(topo), out_(out) {}

  void Add(std::string code, std::optional<StreamId> sid, std::optional<EdgeId> edge,
           std::string detail) {
    out_.push_back({std::move(code), sid, edge, std::move(detail)});
  }

  // Checks a vertex walk from `from` to `to` whose interior must be
  // switches. Returns the edges when every hop exists.
  std::optional<std::vector<EdgeId>> Walk(const std::vector<VertexId>& walk,
                                          VertexId from, VertexId to, StreamId sid,
                                          const std::string& prefix, bool simple) {
    const std::string endpoints = prefix.empty() ? "path endpoints" : prefix + " endpoints";
    if (walk.size() < 2 || walk.front() != from || walk.back() != to) {
      Add(endpoints, sid, std::nullopt,
          "expected " + Hop(from, to) + ", got " + std::to_string(walk.size()) +
              " vertices");
      if (walk.size() < 2) return std::nullopt;
    }
    bool ok = true;
    for (VertexId v : walk) {
      if (!topo_.Contains(v)) {
        Add(prefix.empty() ? "missing edge" : prefix + " missing edge", sid, std::nullopt,
            "unknown vertex " + std::to_string(v));
        return std::nullopt;
      }
    }
    for (size_t i = 1; i + 1 < walk.size(); ++i) {
      if (!topo_.IsSwitch(walk[i])) {
        Add(prefix.empty() ? "device in path" : "device in " + prefix, sid, std::nullopt,
            "vertex " + std::to_string(walk[i]) + " at position " + std::to_string(i));
      }
    }
    if (simple) {
      std::set<VertexId> seen;
      for (VertexId v : walk) {
        if (!seen.insert(v).second) {
          Add(prefix.empty() ? "path not simple" : prefix + " not simple", sid,
              std::nullopt, "vertex " + std::to_string(v) + " repeats");
          break;
        }
      }
    }
    std::vector<EdgeId> edges;
    for (size_t i = 1; i < walk.size(); ++i) {
      auto e = topo_.FindEdge(walk[i - 1], walk[i]);
      if (!e) {
        Add(prefix.empty() ? "missing edge" : prefix + " missing edge", sid, std::nullopt,
            Hop(walk[i - 1], walk[i]));
        ok = false;
      } else {
        edges.push_back(*e);
      }
    }
    if (!ok) return std::nullopt;
    return edges;
  }

 private:
  const Topology& topo_;
  std::vector<Violation>& out_;
};

}  // namespace

std::vector<Violation> CheckPlan(const Instance& instance, const OfflinePlan& plan,
                                 const CheckOptions& options) {
  const Topology& topo = instance.topology;
  std::vector<Violation> out;
  Checker check(topo, out);
  std::vector<VertexId> ids = options.ids_set;
  if (ids.empty()) ids.push_back(topo.ids());

  std::map<StreamId, const CriticalStream*> by_id;
  for (const CriticalStream& s : instance.critical) by_id[s.id] = &s;
  std::set<StreamId> seen;
  std::vector<Bps> load(topo.num_edges(), 0);
  std::map<VertexId, int> entries;
  std::map<VertexId, Bps> ids_load;

  for (const PlanEntry& p : plan.streams) {
    auto it = by_id.find(p.stream_id);
    if (it == by_id.end()) {
      check.Add("unknown stream", p.stream_id, std::nullopt, "not in the instance");
      continue;
    }
    if (!seen.insert(p.stream_id).second) {
      check.Add("duplicate stream", p.stream_id, std::nullopt, "listed twice");
      continue;
    }
    const CriticalStream& s = *it->second;
    auto edges = check.Walk(p.path, s.src, s.dst, s.id, "", true);
    if (edges) {
      for (EdgeId e : *edges) {
        load[e] += s.demand;
        ++entries[topo.edge(e).from];
      }
    }
    if (!p.observed) {
      if (p.op || !p.replica_path.empty()) {
        check.Add("unobserved with replica", s.id, std::nullopt,
                  "op or replica set on an unobserved stream");
      }
      continue;
    }
    const bool op_ok = p.op && p.path.size() >= 2 && *p.op == p.path[p.path.size() - 2] &&
                       topo.Contains(*p.op) && topo.IsSwitch(*p.op) &&
                       topo.FindEdge(*p.op, s.dst).has_value();
    if (!op_ok) {
      check.Add("op not last hop", s.id, std::nullopt,
                p.op ? "op " + std::to_string(*p.op) : std::string("op missing"));
    }
    const VertexId end = p.replica_path.empty() ? kNoVertex : p.replica_path.back();
    const bool to_ids = std::find(ids.begin(), ids.end(), end) != ids.end();
    const VertexId target = to_ids ? end : ids.front();
    const VertexId start = p.op.value_or(kNoVertex);
    if (!to_ids) {
      check.Add("replica endpoints", s.id, std::nullopt,
                "replica ends at " + std::to_string(end) + ", not an IDS");
    }
    if (p.replica_path.empty() || p.replica_path.front() != start) {
      if (to_ids) {
        check.Add("replica endpoints", s.id, std::nullopt, "replica does not start at op");
      }
      continue;
    }
    auto redges = check.Walk(p.replica_path, start, target, s.id, "replica", true);
    if (redges) {
      for (EdgeId e : *redges) {
        load[e] += s.demand;
        ++entries[topo.edge(e).from];
      }
      const bool count_mode = options.ids_capacity &&
                              options.ids_capacity->second == IdsCapacityMode::kCount;
      ids_load[target] += count_mode ? 1 : s.demand;
    }
  }
  for (const CriticalStream& s : instance.critical) {
    if (!seen.count(s.id)) {
      check.Add("missing stream", s.id, std::nullopt, "no plan entry");
    }
  }
  for (const Edge& e : topo.edges()) {
    const Bps cap = instance.CriticalCapacity(e.id);
    if (load[e.id] > cap) {
      check.Add("capacity", std::nullopt, e.id,
                Hop(e.from, e.to) + " carries " + std::to_string(load[e.id]) + " > " +
                    std::to_string(cap));
    }
  }
  if (options.ids_capacity) {
    for (const auto& [d, used] : ids_load) {
      if (used > options.ids_capacity->first) {
        check.Add("ids capacity", std::nullopt, std::nullopt,
                  "IDS " + std::to_string(d) + " receives " + std::to_string(used) + " > " +
                      std::to_string(options.ids_capacity->first));
      }
    }
  }
  for (const auto& [v, limit] : options.flow_table) {
    auto it = entries.find(v);
    if (it != entries.end() && it->second > limit) {
      check.Add("flow table", std::nullopt, std::nullopt,
                "switch " + std::to_string(v) + " needs " + std::to_string(it->second) +
                    " entries > " + std::to_string(limit));
    }
  }
  return out;
}

std::vector<Violation> CheckOnlineState(const OnlineState& state) {
  const Instance& inst = state.instance();
  const Topology& topo = inst.topology;
  std::vector<Violation> out;
  Checker check(topo, out);

  std::vector<Rational> usage(topo.num_edges(), 0);
  std::map<StreamId, std::vector<EdgeId>> edges_of;
  for (const auto& [id, s] : state.streams()) {
    auto p = check.Walk(s.path, s.src, s.dst, id, "", false);
    if (std::find(s.path.begin(), s.path.end(), s.op) == s.path.end() ||
        !topo.Contains(s.op) || !topo.IsSwitch(s.op)) {
      check.Add("op not on path", id, std::nullopt, "op " + std::to_string(s.op));
    }
    auto q = check.Walk(s.replica_path, s.op, topo.ids(), id, "replica", false);
    if (s.assigned <= 0) {
      check.Add("non-positive allocation", id, std::nullopt, RationalToString(s.assigned));
    }
    if (!p || !q) continue;
    std::vector<EdgeId> all = *p;
    all.insert(all.end(), q->begin(), q->end());
    for (EdgeId e : all) usage[e] += s.assigned;
    edges_of[id] = std::move(all);
  }
  for (const Edge& e : topo.edges()) {
    if (usage[e.id] > inst.Budget(e.id)) {
      check.Add("budget", std::nullopt, e.id,
                Hop(e.from, e.to) + " standard usage " + RationalToString(usage[e.id]) +
                    " > " + std::to_string(inst.Budget(e.id)));
    }
  }
  // Max-min: each stream needs a saturated edge where nobody sharing it
  // holds more.
  for (const auto& [id, edges] : edges_of) {
    const Rational& mine = state.streams().at(id).assigned;
    bool bottlenecked = false;
    for (EdgeId e : edges) {
      if (usage[e] != inst.Budget(e)) continue;
      bool largest = true;
      for (const auto& [other, other_edges] : edges_of) {
        if (other == id) continue;
        if (std::find(other_edges.begin(), other_edges.end(), e) != other_edges.end() &&
            state.streams().at(other).assigned > mine) {
          largest = false;
          break;
        }
      }
      if (largest) {
        bottlenecked = true;
        break;
      }
    }
    if (!bottlenecked) {
      check.Add("not max-min", id, std::nullopt, "no saturated edge where it holds the largest share");
    }
  }
  const std::vector<Bps> critical = state.CriticalUsage();
  for (const Edge& e : topo.edges()) {
    if (critical[e.id] > inst.CriticalCapacity(e.id)) {
      check.Add("critical reservation", std::nullopt, e.id,
                Hop(e.from, e.to) + " critical usage " + std::to_string(critical[e.id]) +
                    " > " + std::to_string(inst.CriticalCapacity(e.id)));
    }
  }
  return out;
}

nlohmann::json ViolationsToJson(const std::vector<Violation>& violations) {
  nlohmann::json out = nlohmann::json::array();
  for (const Violation& v : violations) {
    nlohmann::json j = {{"code", v.code}, {"detail", v.detail}};
    if (v.stream_id) j["stream_id"] = *v.stream_id;
    if (v.edge) j["edge"] = *v.edge;
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace icsroute
