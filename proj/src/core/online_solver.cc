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

#include "core/online_solver.h"

#include <algorithm>
#include <deque>
#include <set>

#include "core/io.h"
#include "core/water_fill.h"
#include "core/widest_path.h"

namespace icsroute {

namespace {

void RequireDevice(const Topology& topo, VertexId v, const char* what) {
  if (!topo.Contains(v)) {
    throw Error(ErrorCode::kNotFound, std::string(what) + " " + std::to_string(v) +
                                          " does not exist");
  }
  if (!topo.IsDevice(v)) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " " + std::to_string(v) + " is not a device");
  }
}

std::vector<EdgeId> StreamEdges(const Topology& topo, const StandardStream& s) {
  std::vector<EdgeId> edges = topo.PathEdges(s.path);
  const std::vector<EdgeId> replica = topo.PathEdges(s.replica_path);
  edges.insert(edges.end(), replica.begin(), replica.end());
  return edges;
}

nlohmann::json AssignmentJson(const Rational& r) {
  return {{"bps", FloorToBps(r)}, {"exact", RationalToString(r)}};
}

}  // namespace

OnlineState::OnlineState(Instance instance, std::optional<OfflinePlan> plan, double tau)
    : instance_(std::move(instance)), plan_(std::move(plan)), tau_(tau) {
  if (!(tau_ >= 0)) throw Error(ErrorCode::kInvalidArgument, "tau must be >= 0");
  const Topology& topo = instance_.topology;
  if (!topo.Contains(topo.ids()) || !topo.IsDevice(topo.ids())) {
    throw Error(ErrorCode::kInvalidArgument, "instance has no IDS device");
  }
  if (instance_.standard_budget.empty()) {
    instance_.standard_budget.assign(topo.num_edges(), 0);
  }
  if (static_cast<int>(instance_.standard_budget.size()) != topo.num_edges()) {
    throw Error(ErrorCode::kInvalidArgument, "standard budget size differs from edge count");
  }
}

VertexId OnlineState::AddDevice(VertexId attach, Bps capacity, const std::string& label) {
  Topology& topo = instance_.topology;
  if (!topo.Contains(attach) || !topo.IsSwitch(attach)) {
    throw Error(ErrorCode::kInvalidArgument,
                "attachment " + std::to_string(attach) + " is not a switch");
  }
  if (capacity <= 0) throw Error(ErrorCode::kInvalidArgument, "capacity must be > 0");
  const VertexId dev = topo.AddVertex(VertexKind::kDevice, label);
  topo.AddLink(dev, attach, capacity);
  const Bps beta = ReservedBudget(capacity, instance_.reserve_fraction);
  instance_.standard_budget.push_back(beta);
  instance_.standard_budget.push_back(beta);
  return dev;
}

std::vector<int> OnlineState::Sharers() const {
  std::vector<int> m(instance_.topology.num_edges(), 0);
  for (const auto& [id, s] : streams_) {
    std::vector<EdgeId> edges = StreamEdges(instance_.topology, s);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (EdgeId e : edges) ++m[e];
  }
  return m;
}

std::vector<Rational> OnlineState::StandardUsage() const {
  std::vector<Rational> usage(instance_.topology.num_edges(), 0);
  for (const auto& [id, s] : streams_) {
    for (EdgeId e : StreamEdges(instance_.topology, s)) usage[e] += s.assigned;
  }
  return usage;
}

std::vector<Bps> OnlineState::CandidateCaps() const {
  return CandidateCapacities(instance_.standard_budget, Sharers());
}

std::vector<Bps> OnlineState::CriticalUsage() const {
  const Topology& topo = instance_.topology;
  std::vector<Bps> usage(topo.num_edges(), 0);
  if (!plan_) return usage;
  for (const PlanEntry& p : plan_->streams) {
    const Bps demand = instance_.stream(p.stream_id).demand;
    for (EdgeId e : topo.PathEdges(p.path)) usage[e] += demand;
    if (p.observed) {
      for (EdgeId e : topo.PathEdges(p.replica_path)) usage[e] += demand;
    }
  }
  return usage;
}

std::vector<std::vector<VertexId>> OnlineState::Layers(VertexId t) const {
  const Topology& topo = instance_.topology;
  std::vector<bool> seen(topo.num_vertices(), false);
  std::vector<std::vector<VertexId>> layers;
  std::vector<VertexId> frontier;
  for (EdgeId e : topo.InEdges(t)) {
    const VertexId x = topo.edge(e).from;
    if (topo.IsSwitch(x) && !seen[x]) {
      seen[x] = true;
      frontier.push_back(x);
    }
  }
  while (!frontier.empty()) {
    std::sort(frontier.begin(), frontier.end());
    layers.push_back(frontier);
    std::vector<VertexId> next;
    for (VertexId y : frontier) {
      for (EdgeId e : topo.InEdges(y)) {
        const VertexId x = topo.edge(e).from;
        if (topo.IsSwitch(x) && !seen[x]) {
          seen[x] = true;
          next.push_back(x);
        }
      }
    }
    frontier = std::move(next);
  }
  return layers;
}

int OnlineState::Distance(VertexId s, VertexId t) const {
  const Topology& topo = instance_.topology;
  std::vector<int> dist(topo.num_vertices(), -1);
  std::deque<VertexId> queue{s};
  dist[s] = 0;
  while (!queue.empty()) {
    const VertexId x = queue.front();
    queue.pop_front();
    if (x == t) return dist[x];
    if (x != s && !topo.IsSwitch(x)) continue;
    for (EdgeId e : topo.OutEdges(x)) {
      const VertexId y = topo.edge(e).to;
      if (dist[y] == -1) {
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    }
  }
  return -1;
}

AdmitResult OnlineState::Admit(VertexId s, VertexId t, double now) {
  const Topology& topo = instance_.topology;
  RequireDevice(topo, s, "source");
  RequireDevice(topo, t, "destination");
  const VertexId d = topo.ids();
  if (s == t) throw Error(ErrorCode::kInvalidArgument, "source equals destination");
  if (t == d) throw Error(ErrorCode::kInvalidArgument, "destination is the IDS");

  AdmitResult result;
  const int dist = Distance(s, t);
  if (dist < 0) {
    result.reason = "destination unreachable";
    return result;
  }
  const int k = std::max(1, dist - 2);
  const std::vector<std::vector<VertexId>> layers = Layers(t);
  const std::vector<Bps> caps = CandidateCaps();

  for (int i = 1; i <= k && i <= static_cast<int>(layers.size()); ++i) {
    Bps best = 0;
    std::optional<WidePath> so, od, ot;
    VertexId best_v = kNoVertex;
    for (VertexId v : layers[i - 1]) {
      widest_path_calls_ += 3;
      auto a = WidestPath(topo, caps, s, v);
      auto b = WidestPath(topo, caps, v, d);
      auto c = WidestPath(topo, caps, v, t);
      if (!a || !b || !c) continue;
      const Bps quality = std::min({a->bottleneck, b->bottleneck, c->bottleneck});
      if (quality > best) {
        best = quality;
        best_v = v;
        so = std::move(a);
        od = std::move(b);
        ot = std::move(c);
      }
    }
    if (best == 0) continue;

    StandardStream stream;
    stream.id = next_id_++;
    stream.src = s;
    stream.dst = t;
    stream.path = so->path;
    stream.path.insert(stream.path.end(), ot->path.begin() + 1, ot->path.end());
    stream.op = best_v;
    stream.replica_path = od->path;
    stream.admitted_at = now + tau_;
    const StreamId id = stream.id;
    streams_.emplace(id, std::move(stream));
    Reassign(now);

    result.admitted = true;
    result.stream = streams_.at(id);
    result.quality = best;
    result.layer = i;
    for (const auto& [sid, st] : streams_) result.assignment.emplace(sid, st.assigned);
    return result;
  }
  result.reason = "no residual standard bandwidth";
  return result;
}

std::map<StreamId, Rational> OnlineState::Remove(StreamId id, double now) {
  if (streams_.erase(id) == 0) {
    throw Error(ErrorCode::kNotFound, "no active standard stream " + std::to_string(id));
  }
  Reassign(now);
  std::map<StreamId, Rational> out;
  for (const auto& [sid, st] : streams_) out.emplace(sid, st.assigned);
  return out;
}

void OnlineState::Reassign(double now) {
  const Topology& topo = instance_.topology;
  std::vector<Rational> capacity(instance_.standard_budget.begin(),
                                 instance_.standard_budget.end());
  std::vector<std::vector<EdgeId>> edges;
  for (const auto& [id, s] : streams_) edges.push_back(StreamEdges(topo, s));
  const std::vector<Rational> alloc = WaterFill(capacity, edges);
  size_t i = 0;
  for (auto& [id, s] : streams_) {
    s.assigned = alloc[i++];
    s.reassigned_at = now;
  }
}

ObserveResult OnlineState::ObserveOnRequest(StreamId critical_id) const {
  if (!plan_) throw Error(ErrorCode::kState, "no off-line plan loaded");
  const PlanEntry* entry = plan_->Find(critical_id);
  if (entry == nullptr) {
    throw Error(ErrorCode::kNotFound, "stream " + std::to_string(critical_id) +
                                          " is not in the plan");
  }
  if (entry->observed) {
    throw Error(ErrorCode::kState,
                "stream " + std::to_string(critical_id) + " is already observed");
  }
  const Topology& topo = instance_.topology;
  const Bps demand = instance_.stream(critical_id).demand;
  const std::vector<Bps> used = CriticalUsage();
  std::vector<Bps> residual(topo.num_edges());
  for (EdgeId e = 0; e < topo.num_edges(); ++e) {
    residual[e] = std::max<Bps>(0, instance_.CriticalCapacity(e) - used[e]);
  }

  ObserveResult out;
  const VertexId d = topo.ids();
  std::optional<WidePath> from_last_hop;
  for (size_t i = entry->path.size() - 1; i-- > 1;) {
    const VertexId v = entry->path[i];
    if (!topo.IsSwitch(v)) continue;
    auto wide = WidestPath(topo, residual, v, d, /*allow_zero=*/true);
    if (!wide) continue;
    if (wide->bottleneck >= demand) {
      out.found = true;
      out.op = v;
      out.replica_path = std::move(wide->path);
      out.bottleneck = wide->bottleneck;
      return out;
    }
    if (!from_last_hop) from_last_hop = std::move(wide);
  }
  if (!from_last_hop) return out;

  out.bottleneck = from_last_hop->bottleneck;
  for (EdgeId e : topo.PathEdges(from_last_hop->path)) {
    if (residual[e] == from_last_hop->bottleneck) out.tight_edges.push_back(e);
  }
  std::set<StreamId> suggested;
  for (const PlanEntry& p : plan_->streams) {
    if (!p.observed) continue;
    for (EdgeId e : topo.PathEdges(p.replica_path)) {
      if (std::find(out.tight_edges.begin(), out.tight_edges.end(), e) !=
          out.tight_edges.end()) {
        suggested.insert(p.stream_id);
      }
    }
  }
  out.suggestions.assign(suggested.begin(), suggested.end());
  return out;
}

nlohmann::json OnlineState::Dump() const {
  nlohmann::json streams = nlohmann::json::array();
  for (const auto& [id, s] : streams_) {
    nlohmann::json j = {{"id", id},
                        {"src", s.src},
                        {"dst", s.dst},
                        {"path", s.path},
                        {"op", s.op},
                        {"replica_path", s.replica_path},
                        {"admitted_at", s.admitted_at},
                        {"reassigned_at", s.reassigned_at}};
    j["assigned"] = AssignmentJson(s.assigned);
    streams.push_back(std::move(j));
  }
  return {{"tau", tau_},
          {"widest_path_calls", widest_path_calls_},
          {"streams", std::move(streams)}};
}

}  // namespace icsroute
