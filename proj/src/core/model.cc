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

#include "core/model.h"

#include <algorithm>
#include <set>
#include <utility>

namespace icsroute {

VertexId Topology::AddVertex(VertexKind kind, std::string label) {
  const VertexId id = num_vertices();
  vertices_.push_back(Vertex{id, kind, std::move(label)});
  out_.emplace_back();
  in_.emplace_back();
  return id;
}

const Vertex& Topology::vertex(VertexId v) const {
  if (!Contains(v)) {
    throw Error(ErrorCode::kNotFound, "unknown vertex " + std::to_string(v));
  }
  return vertices_[v];
}

void Topology::InsertSorted(std::vector<EdgeId>& list, EdgeId e,
                            bool by_target) {
  auto far = [&](EdgeId id) {
    return by_target ? edges_[id].to : edges_[id].from;
  };
  auto pos = std::upper_bound(
      list.begin(), list.end(), e, [&](EdgeId lhs, EdgeId rhs) {
        return std::pair(far(lhs), lhs) < std::pair(far(rhs), rhs);
      });
  list.insert(pos, e);
}

EdgeId Topology::AddLink(VertexId a, VertexId b, Bps capacity) {
  if (!Contains(a) || !Contains(b)) {
    throw Error(ErrorCode::kNotFound,
                "link endpoint does not exist: " + std::to_string(a) + "-" +
                    std::to_string(b));
  }
  links_.push_back(Link{a, b, capacity});
  const EdgeId forward = num_edges();
  for (auto [from, to] : {std::pair(a, b), std::pair(b, a)}) {
    const EdgeId id = num_edges();
    edges_.push_back(Edge{id, from, to, capacity});
    InsertSorted(out_[from], id, /*by_target=*/true);
    InsertSorted(in_[to], id, /*by_target=*/false);
    edge_index_.try_emplace(Key(from, to), id);
  }
  return forward;
}

std::optional<EdgeId> Topology::FindEdge(VertexId from, VertexId to) const {
  auto it = edge_index_.find(Key(from, to));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<VertexId> Topology::Switches() const {
  std::vector<VertexId> out;
  for (const Vertex& v : vertices_) {
    if (v.kind == VertexKind::kSwitch) out.push_back(v.id);
  }
  return out;
}

std::vector<VertexId> Topology::Devices() const {
  std::vector<VertexId> out;
  for (const Vertex& v : vertices_) {
    if (v.kind == VertexKind::kDevice) out.push_back(v.id);
  }
  return out;
}

std::vector<EdgeId> Topology::PathEdges(std::span<const VertexId> path) const {
  std::vector<EdgeId> out;
  if (path.size() < 2) return out;
  out.reserve(path.size() - 1);
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    auto e = FindEdge(path[i], path[i + 1]);
    if (!e) {
      throw Error(ErrorCode::kNotFound, "no edge " + std::to_string(path[i]) +
                                            "->" + std::to_string(path[i + 1]));
    }
    out.push_back(*e);
  }
  return out;
}

std::vector<ValidationIssue> ValidateTopology(const Topology& topology) {
  std::vector<ValidationIssue> issues;
  std::set<std::pair<VertexId, VertexId>> seen;
  for (const Edge& e : topology.edges()) {
    const std::string name =
        std::to_string(e.from) + "->" + std::to_string(e.to);
    if (e.from == e.to) {
      issues.push_back({"self loop", name});
    }
    if (e.capacity <= 0) {
      issues.push_back({"non-positive capacity", name});
    }
    if (topology.IsDevice(e.from) && topology.IsDevice(e.to)) {
      issues.push_back({"device-device edge", name});
    }
    if (!seen.emplace(e.from, e.to).second) {
      issues.push_back({"duplicate edge", name});
    }
  }
  const VertexId ids = topology.ids();
  if (!topology.Contains(ids)) {
    issues.push_back({"IDS missing", "ids=" + std::to_string(ids)});
  } else if (!topology.IsDevice(ids)) {
    issues.push_back({"IDS not in M", "ids=" + std::to_string(ids)});
  }
  return issues;
}

Bps IncidentBandwidthSum(const Topology& topology, VertexId v) {
  topology.vertex(v);  // existence check
  Bps total = 0;
  for (const Link& link : topology.links()) {
    if (link.a == v || link.b == v) total += link.capacity;
  }
  return total;
}

std::vector<VertexId> CandidateObservationPoints(const Topology& topology,
                                                 const CriticalStream& stream) {
  std::vector<VertexId> out;
  for (EdgeId e : topology.InEdges(stream.dst)) {
    const VertexId from = topology.edge(e).from;
    if (topology.IsSwitch(from)) out.push_back(from);
  }
  // InEdges is sorted by source id already; keep the contract explicit.
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string_view KindName(VertexKind kind) {
  return kind == VertexKind::kSwitch ? "switch" : "device";
}

}  // namespace icsroute
