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

// Run-time admission of standard streams.
//
// A new stream s->t is observed at a switch as close to t as possible. For
// each switch v at distance i from t (i = 1, 2, ...) the candidate quality
// is the smallest bottleneck among the widest paths s->v, v->IDS and v->t,
// computed on per-edge caps ⌊β(e)/(m(e)+1)⌋ where m(e) counts the streams
// already on e. The first layer with a positive quality wins. Bandwidths of
// all standard streams are then recomputed by water filling over β.

#ifndef ICSROUTE_CORE_ONLINE_SOLVER_H_
#define ICSROUTE_CORE_ONLINE_SOLVER_H_

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "core/plan.h"
#include "core/topogen.h"
#include "json.hpp"

namespace icsroute {

struct StandardStream {
  StreamId id = 0;
  VertexId src = kNoVertex;
  VertexId dst = kNoVertex;
  std::vector<VertexId> path;  // s ... op ... t, not necessarily simple
  VertexId op = kNoVertex;
  std::vector<VertexId> replica_path;  // op ... IDS
  Rational assigned = 0;
  double reassigned_at = 0;
  double admitted_at = 0;
};

struct AdmitResult {
  bool admitted = false;
  StandardStream stream;
  Bps quality = 0;  // b of the chosen observation point
  int layer = 0;    // its distance from t
  std::map<StreamId, Rational> assignment;  // every active stream
  std::string reason;  // set on rejection
};

struct ObserveResult {
  bool found = false;
  VertexId op = kNoVertex;
  std::vector<VertexId> replica_path;
  Bps bottleneck = 0;
  // When nothing fits: the tightest edges and the observed critical streams
  // whose replicas cross them.
  std::vector<EdgeId> tight_edges;
  std::vector<StreamId> suggestions;
};

class OnlineState {
 public:
  static constexpr double kDefaultTau = 0.01;

  // `plan` fixes the critical traffic; it is needed only for
  // ObserveOnRequest and for the critical-reservation audit.
  explicit OnlineState(Instance instance, std::optional<OfflinePlan> plan = std::nullopt,
                       double tau = kDefaultTau);

  const Instance& instance() const { return instance_; }
  const std::optional<OfflinePlan>& plan() const { return plan_; }
  double tau() const { return tau_; }
  const std::map<StreamId, StandardStream>& streams() const { return streams_; }
  std::int64_t widest_path_calls() const { return widest_path_calls_; }

  // Hangs a new device off `attach` with a link of `capacity`; β on the new
  // edges follows the instance's reserve fraction.
  VertexId AddDevice(VertexId attach, Bps capacity, const std::string& label);

  // Streams per edge (distinct) and standard usage per edge (P and Q
  // crossings, with multiplicity).
  std::vector<int> Sharers() const;
  std::vector<Rational> StandardUsage() const;
  std::vector<Bps> CandidateCaps() const;

  // Switch layers by distance to t: result[i-1] holds the switches at
  // distance i, sorted by id.
  std::vector<std::vector<VertexId>> Layers(VertexId t) const;
  // Hop distance s->t with switch-only interior, or -1.
  int Distance(VertexId s, VertexId t) const;

  AdmitResult Admit(VertexId s, VertexId t, double now);
  std::map<StreamId, Rational> Remove(StreamId id, double now);

  ObserveResult ObserveOnRequest(StreamId critical_id) const;

  // Critical bandwidth per edge under the plan (paths and replicas).
  std::vector<Bps> CriticalUsage() const;

  nlohmann::json Dump() const;

 private:
  void Reassign(double now);

  Instance instance_;
  std::optional<OfflinePlan> plan_;
  double tau_;
  std::map<StreamId, StandardStream> streams_;
  StreamId next_id_ = 0;
  std::int64_t widest_path_calls_ = 0;
};

}  // namespace icsroute

#endif  // ICSROUTE_CORE_ONLINE_SOLVER_H_
