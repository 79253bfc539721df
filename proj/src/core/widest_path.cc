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

#include "core/widest_path.h"

#include <deque>
#include <limits>
#include <queue>

namespace icsroute {

namespace {

constexpr Bps kUnset = -1;

}  // namespace

std::optional<WidePath> WidestPath(const Topology& topology,
                                   std::span<const Bps> caps, VertexId u,
                                   VertexId v, bool allow_zero) {
  if (u == v) throw Error(ErrorCode::kInvalidArgument, "widest path needs u != v");
  if (static_cast<int>(caps.size()) != topology.num_edges()) {
    throw Error(ErrorCode::kInvalidArgument, "caps size differs from edge count");
  }
  topology.vertex(u);
  topology.vertex(v);
  const Bps floor_cap = allow_zero ? 0 : 1;
  auto can_leave = [&](VertexId x) { return x == u || topology.IsSwitch(x); };
  auto can_enter = [&](VertexId x) { return x == v || topology.IsSwitch(x); };

  // Max-bottleneck labels, Dijkstra style.
  std::vector<Bps> width(topology.num_vertices(), kUnset);
  std::priority_queue<std::pair<Bps, VertexId>> heap;
  width[u] = std::numeric_limits<Bps>::max();
  heap.push({width[u], u});
  while (!heap.empty()) {
    const auto [w, x] = heap.top();
    heap.pop();
    if (w != width[x] || x == v) continue;
    if (!can_leave(x)) continue;
    for (EdgeId e : topology.OutEdges(x)) {
      const VertexId y = topology.edge(e).to;
      if (caps[e] < floor_cap || !can_enter(y)) continue;
      const Bps through = std::min(w, caps[e]);
      if (through > width[y]) {
        width[y] = through;
        heap.push({through, y});
      }
    }
  }
  if (width[v] == kUnset) return std::nullopt;
  const Bps bottleneck = width[v];

  // Fewest hops over edges at least as wide, then lexicographic.
  std::vector<int> dist(topology.num_vertices(), -1);
  std::deque<VertexId> queue{v};
  dist[v] = 0;
  while (!queue.empty()) {
    const VertexId y = queue.front();
    queue.pop_front();
    if (!can_enter(y)) continue;
    for (EdgeId e : topology.InEdges(y)) {
      const VertexId x = topology.edge(e).from;
      if (caps[e] < bottleneck || dist[x] != -1 || !can_leave(x)) continue;
      dist[x] = dist[y] + 1;
      if (x != u) queue.push_back(x);
    }
  }
  WidePath out{{u}, bottleneck};
  VertexId at = u;
  while (at != v) {
    for (EdgeId e : topology.OutEdges(at)) {
      const VertexId y = topology.edge(e).to;
      if (caps[e] >= bottleneck && dist[y] == dist[at] - 1 && can_enter(y)) {
        at = y;
        break;
      }
    }
    out.path.push_back(at);
  }
  return out;
}

std::vector<Bps> CandidateCapacities(std::span<const Bps> budget,
                                     std::span<const int> sharers) {
  if (budget.size() != sharers.size()) {
    throw Error(ErrorCode::kInvalidArgument, "budget and sharer sizes differ");
  }
  std::vector<Bps> caps(budget.size());
  for (size_t e = 0; e < budget.size(); ++e) caps[e] = budget[e] / (sharers[e] + 1);
  return caps;
}

}  // namespace icsroute
