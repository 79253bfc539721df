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

#include "core/topogen.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace icsroute {

int SubstationTemplate::DevicesPerSubstation() const {
  int n = 1;  // SCADA
  for (const DeviceRole& r : roles) n += r.quantity;
  return n;
}

int SubstationTemplate::StreamsPerSubstation() const {
  int n = 0;
  for (const DeviceRole& r : roles) n += 2 * r.quantity;
  return n;
}

int SubstationTemplate::LinksPerSubstation() const {
  return DevicesPerSubstation() * access_switches + access_switches;
}

SubstationTemplate DefaultSubstationTemplate() {
  SubstationTemplate t;
  // Table values are in Kbps; stored here in bits/s.
  t.roles = {
      {"VoltageMeter", 2, 10'000, 100'000},
      {"CircuitSwitch", 2, 1'500, 1'500},
      {"Breaker", 2, 1'500, 1'500},
      {"CurrentMeter", 2, 10'000, 100'000},
      {"PowerTransformer", 1, 50'000, 500'000},
      {"HMI", 1, 30'000'000, 3'000'000},
      {"HistorianDB", 1, 30'000'000, 3'000'000},
  };
  return t;
}

const CriticalStream& Instance::stream(StreamId id) const {
  for (const CriticalStream& s : critical) {
    if (s.id == id) return s;
  }
  throw Error(ErrorCode::kNotFound, "unknown stream " + std::to_string(id));
}

std::vector<ValidationIssue> ValidateInstance(const Instance& instance) {
  const Topology& topo = instance.topology;
  std::vector<ValidationIssue> issues = ValidateTopology(topo);
  if (!instance.standard_budget.empty() &&
      static_cast<int>(instance.standard_budget.size()) != topo.num_edges()) {
    issues.push_back({"budget size", "standard budget does not cover edges"});
  } else {
    for (const Edge& e : topo.edges()) {
      const Bps beta = instance.Budget(e.id);
      if (beta < 0 || beta > e.capacity) {
        issues.push_back({"budget range", std::to_string(e.from) + "->" +
                                              std::to_string(e.to)});
      }
    }
  }
  std::vector<StreamId> ids;
  for (const CriticalStream& s : instance.critical) {
    const std::string name = "stream " + std::to_string(s.id);
    ids.push_back(s.id);
    if (!topo.Contains(s.src) || !topo.Contains(s.dst)) {
      issues.push_back({"stream endpoint unknown", name});
      continue;
    }
    if (!topo.IsDevice(s.src) || !topo.IsDevice(s.dst)) {
      issues.push_back({"stream endpoint not in M", name});
    }
    if (s.src == s.dst) issues.push_back({"stream loop", name});
    if (s.relevance < 1) issues.push_back({"relevance below one", name});
    if (s.demand < 0) issues.push_back({"negative demand", name});
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    issues.push_back({"duplicate stream id", ""});
  }
  return issues;
}

int PowerLawSubstations(int position, double alpha) {
  return static_cast<int>(std::floor(10.0 / std::pow(position, alpha)));
}

int PowerLawTotal(int routers, double alpha) {
  int q = 0;
  for (int i = 1; i <= routers; ++i) q += PowerLawSubstations(i, alpha);
  return q;
}

std::vector<VertexId> RoutersByBandwidth(const Topology& backbone) {
  std::vector<std::pair<Bps, VertexId>> keyed;
  for (const Vertex& v : backbone.vertices()) {
    keyed.emplace_back(IncidentBandwidthSum(backbone, v.id), v.id);
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<VertexId> out;
  for (const auto& [bw, id] : keyed) out.push_back(id);
  return out;
}

VertexId SelectIdsRouter(const Topology& backbone) {
  if (backbone.num_vertices() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "empty backbone");
  }
  return RoutersByBandwidth(backbone).front();
}

AlphaSearch SearchAlpha(const Topology& backbone, int q_target) {
  if (q_target < 1) {
    throw Error(ErrorCode::kInvalidArgument, "q_target must be >= 1");
  }
  AlphaSearch result;
  int best_gap = -1;
  for (int k = 70; k <= 100; ++k) {
    const double alpha = k / 100.0;
    const int q = PowerLawTotal(backbone.num_vertices(), alpha);
    if (q == q_target && !result.alpha) result.alpha = alpha;
    const int gap = std::abs(q - q_target);
    if (best_gap < 0 || gap < best_gap) {
      best_gap = gap;
      result.nearest_alpha = alpha;
      result.nearest_q = q;
    }
  }
  return result;
}

std::optional<double> FindAlpha(const Topology& backbone, int q_target) {
  return SearchAlpha(backbone, q_target).alpha;
}

Instance AttachSubstations(const Topology& backbone,
                           const SubstationTemplate& tmpl, double alpha,
                           std::uint64_t seed) {
  if (backbone.num_vertices() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "empty backbone");
  }
  for (const Vertex& v : backbone.vertices()) {
    if (v.kind != VertexKind::kSwitch) {
      throw Error(ErrorCode::kInvalidArgument,
                  "backbone vertex " + std::to_string(v.id) +
                      " is not a switch");
    }
  }

  Instance inst;
  inst.alpha = alpha;
  inst.seed = seed;
  inst.backbone_routers = backbone.num_vertices();
  inst.backbone_links = backbone.num_links();
  Topology& topo = inst.topology;
  for (const Vertex& v : backbone.vertices()) {
    topo.AddVertex(VertexKind::kSwitch, v.label);
  }
  for (const Link& l : backbone.links()) topo.AddLink(l.a, l.b, l.capacity);

  const std::vector<VertexId> order = RoutersByBandwidth(backbone);
  StreamId next_stream = 0;
  for (size_t pos = 0; pos < order.size(); ++pos) {
    const VertexId router = order[pos];
    const int count = PowerLawSubstations(static_cast<int>(pos) + 1, alpha);
    for (int k = 0; k < count; ++k) {
      const std::string prefix = "sub" + std::to_string(inst.substations) +
                                 "@" + std::to_string(router) + "/";
      ++inst.substations;
      std::vector<VertexId> access;
      for (int a = 0; a < tmpl.access_switches; ++a) {
        access.push_back(
            topo.AddVertex(VertexKind::kSwitch, prefix + "sw" + std::to_string(a)));
      }
      const VertexId scada = topo.AddVertex(VertexKind::kDevice, prefix + "SCADA");
      std::vector<VertexId> devices{scada};
      std::vector<std::pair<VertexId, const DeviceRole*>> role_devices;
      for (const DeviceRole& role : tmpl.roles) {
        for (int q = 0; q < role.quantity; ++q) {
          const VertexId d = topo.AddVertex(
              VertexKind::kDevice, prefix + role.name + std::to_string(q));
          devices.push_back(d);
          role_devices.emplace_back(d, &role);
        }
      }
      for (VertexId d : devices) {
        for (VertexId sw : access) topo.AddLink(d, sw, tmpl.internal_capacity);
      }
      for (VertexId sw : access) topo.AddLink(sw, router, tmpl.uplink_capacity);
      for (const auto& [device, role] : role_devices) {
        inst.critical.push_back({next_stream++, scada, device, role->from_scada, 1});
        inst.critical.push_back({next_stream++, device, scada, role->to_scada, 1});
      }
    }
  }

  const VertexId ids_router = order.front();
  const VertexId ids = topo.AddVertex(VertexKind::kDevice, "IDS");
  topo.AddLink(ids, ids_router, tmpl.uplink_capacity);
  topo.set_ids(ids);
  inst.standard_budget.assign(topo.num_edges(), 0);
  return inst;
}

Bps ReservedBudget(Bps capacity, double fraction) {
  if (!(fraction >= 0.0 && fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "reserve fraction must lie in [0, 1)");
  }
  // Exact floor on a 1e-9 grid; a plain double product would misround
  // values such as 0.29 * 100.
  constexpr std::int64_t kScale = 1'000'000'000;
  const auto parts = static_cast<__int128>(std::llround(fraction * kScale));
  return static_cast<Bps>(static_cast<__int128>(capacity) * parts / kScale);
}

Instance ReserveStandardFraction(Instance instance, double fraction) {
  ReservedBudget(0, fraction);
  const Topology& topo = instance.topology;
  instance.standard_budget.assign(topo.num_edges(), 0);
  for (const Edge& e : topo.edges()) {
    instance.standard_budget[e.id] = ReservedBudget(e.capacity, fraction);
  }
  instance.reserve_fraction = fraction;
  return instance;
}

}  // namespace icsroute
