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

// 0/1 integer program for routing critical streams and their IDS replicas.
//
// For every critical stream σ and directed edge e there is a binary x[σ,e]
// (σ uses e) and, per IDS d, a binary r[σ,d,e] (the replica of σ toward d
// uses e). Rows:
//   capacity      Σ_σ B_σ (x[σ,e] + Σ_d r[σ,d,e]) <= C(e)
//   balance       Out_σ(v) - In_σ(v) = 0 for v ∉ {s_σ, t_σ}
//   source/sink   Out_σ(s_σ) = 1, In_σ(t_σ) = 1
//   replica       F_σd(v) = 0 on switches that are not last hops of t_σ,
//                 Σ_d F_σd(v) <= x[σ,(v,t_σ)] on last-hop switches,
//                 r[σ,d,e] = 0 on edges leaving d
//   no switching  x[σ,e] = 0 next to devices other than s_σ, t_σ;
//                 r[σ,d,e] = 0 next to devices other than d
// Objective (maximised):
//   Σ_σ Σ_e (C(e) - B_σ (x + Σ_d r)) / C(e)  +  Σ_σ K ρ_σ Σ_d In_σd(d)
// with K = |E|·|Crit| + 1. C(e) is the capacity left for critical traffic
// after the standard-stream reservation.
//
// Rows are produced on demand; nothing proportional to |Crit|·|E| is stored,
// so backbone-scale models can be exported.

#ifndef ICSROUTE_CORE_FORMULATION_H_
#define ICSROUTE_CORE_FORMULATION_H_

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "core/plan.h"
#include "core/topogen.h"
#include "json.hpp"

namespace icsroute {

enum class Sense { kLessEqual, kGreaterEqual, kEqual };

struct LinearTerm {
  std::int64_t var = 0;
  std::int64_t coeff = 0;
};

enum class RowFamily {
  kCapacity,
  kCriticalBalance,
  kCriticalSource,
  kCriticalSink,
  kReplicaBalance,
  kReplicaOrigin,
  kReplicaIdsExit,
  kCriticalNoSwitch,
  kReplicaNoSwitch,
  kIdsCapacity,
  kFlowTable,
};
inline constexpr int kNumRowFamilies = 11;

std::string_view RowFamilyName(RowFamily family);

struct Row {
  RowFamily family = RowFamily::kCapacity;
  std::string name;
  std::vector<LinearTerm> terms;
  Sense sense = Sense::kLessEqual;
  std::int64_t rhs = 0;
};

// How the IDS throughput limit is expressed.
enum class IdsCapacityMode {
  kBandwidth,  // Σ_σ B_σ In_σ(d) <= B_d
  kCount,      // Σ_σ In_σ(d) <= B_d, the literal count form
};

struct ModelSummary {
  std::int64_t variables = 0;
  std::int64_t critical_variables = 0;
  std::int64_t replica_variables = 0;
  std::int64_t rows = 0;
  std::array<std::int64_t, kNumRowFamilies> rows_by_family{};
  std::int64_t k = 0;
  int streams = 0;
  int edges = 0;
  int ids = 0;
};

struct Evaluation {
  bool feasible = true;
  std::vector<std::string> violated;  // row names
  Rational objective = 0;
};

class IlpModel {
 public:
  const Instance& instance() const { return instance_; }
  std::span<const VertexId> ids_set() const { return ids_set_; }
  bool multi_ids() const { return multi_ids_; }
  int num_streams() const { return static_cast<int>(instance_.critical.size()); }
  int num_edges() const { return instance_.topology.num_edges(); }
  int num_ids() const { return static_cast<int>(ids_set_.size()); }
  std::int64_t num_variables() const {
    return static_cast<std::int64_t>(num_streams()) * num_edges() * (1 + num_ids());
  }
  std::int64_t k() const { return k_; }
  const std::optional<std::pair<Bps, IdsCapacityMode>>& ids_capacity() const {
    return ids_capacity_;
  }
  const std::map<VertexId, int>& flow_table() const { return flow_table_; }

  std::int64_t CriticalVar(int stream_index, EdgeId e) const {
    return static_cast<std::int64_t>(stream_index) * num_edges() + e;
  }
  std::int64_t ReplicaVar(int stream_index, int ids_index, EdgeId e) const {
    return static_cast<std::int64_t>(num_streams()) * num_edges() +
           (static_cast<std::int64_t>(stream_index) * num_ids() + ids_index) *
               num_edges() +
           e;
  }

  // x_s<stream>_e<from>_<to>, r_s<stream>_e<from>_<to> or, with several
  // IDSes, r_s<stream>_d<ids>_e<from>_<to>.
  std::string VariableName(std::int64_t var) const;
  void AppendVariableName(std::int64_t var, std::string& out) const;

  Rational ObjectiveConstant() const;
  Rational ObjectiveCoefficient(std::int64_t var) const;

  // Rows in export order: capacity by edge, then per stream (in stream
  // order) its critical rows, replica rows and no-switching rows, then the
  // optional IDS and flow-table rows. Rows without terms are skipped. The
  // Row passed to `fn` is reused between calls.
  void ForEachRow(const std::function<void(const Row&)>& fn) const;

  ModelSummary Summary() const;
  Evaluation Evaluate(std::span<const std::uint8_t> assignment) const;
  std::vector<std::uint8_t> AssignmentFromPlan(const OfflinePlan& plan) const;

 private:
  friend IlpModel BuildBase(const Instance&);
  friend IlpModel BuildMultiIds(const Instance&, std::span<const VertexId>);
  friend IlpModel AddIdsCapacity(IlpModel, Bps, IdsCapacityMode);
  friend IlpModel AddFlowTableLimits(IlpModel, const std::map<VertexId, int>&);

  void Init(const Instance& instance, std::vector<VertexId> ids_set, bool multi);
  int IdsIndex(VertexId d) const;

  Instance instance_;
  std::vector<VertexId> ids_set_;
  bool multi_ids_ = false;
  std::int64_t k_ = 1;
  std::vector<std::vector<VertexId>> last_hops_;  // L_σ per stream index
  std::optional<std::pair<Bps, IdsCapacityMode>> ids_capacity_;
  std::map<VertexId, int> flow_table_;
};

IlpModel BuildBase(const Instance& instance);
IlpModel BuildMultiIds(const Instance& instance, std::span<const VertexId> ids_set);
IlpModel AddIdsCapacity(IlpModel model, Bps limit,
                        IdsCapacityMode mode = IdsCapacityMode::kBandwidth);
IlpModel AddFlowTableLimits(IlpModel model, const std::map<VertexId, int>& limits);

// CPLEX LP text. Deterministic for a given model.
void ExportLp(const IlpModel& model, std::ostream& sink);

nlohmann::json SummaryToJson(const ModelSummary& summary);

// K = |E|·|Crit| + 1.
std::int64_t ObservationWeight(const Instance& instance);

// The objective of `plan` evaluated directly from the instance, without the
// model: Σ_σ (|E| - Σ_{e∈P∪Q} B_σ / C(e)) + K ρ_σ [observed]. Path edges
// are counted with multiplicity.
Rational ObjectiveValue(const Instance& instance, const OfflinePlan& plan);

}  // namespace icsroute

#endif  // ICSROUTE_CORE_FORMULATION_H_
