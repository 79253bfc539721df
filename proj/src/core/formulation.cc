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

#include "core/formulation.h"

#include <algorithm>

namespace icsroute {

namespace {

void AppendInt(std::string& out, std::int64_t v) { out += std::to_string(v); }

void AppendEdgeSuffix(std::string& out, const Edge& e) {
  out += "_e";
  AppendInt(out, e.from);
  out += '_';
  AppendInt(out, e.to);
}

// Edge ids touching v in either direction, ascending.
std::vector<EdgeId> AdjacentEdges(const Topology& topo, VertexId v) {
  std::vector<EdgeId> out(topo.OutEdges(v).begin(), topo.OutEdges(v).end());
  out.insert(out.end(), topo.InEdges(v).begin(), topo.InEdges(v).end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::string_view RowFamilyName(RowFamily family) {
  switch (family) {
    case RowFamily::kCapacity: return "capacity";
    case RowFamily::kCriticalBalance: return "critical_balance";
    case RowFamily::kCriticalSource: return "critical_source";
    case RowFamily::kCriticalSink: return "critical_sink";
    case RowFamily::kReplicaBalance: return "replica_balance";
    case RowFamily::kReplicaOrigin: return "replica_origin";
    case RowFamily::kReplicaIdsExit: return "replica_ids_exit";
    case RowFamily::kCriticalNoSwitch: return "critical_no_switch";
    case RowFamily::kReplicaNoSwitch: return "replica_no_switch";
    case RowFamily::kIdsCapacity: return "ids_capacity";
    case RowFamily::kFlowTable: return "flow_table";
  }
  return "unknown";
}

std::int64_t ObservationWeight(const Instance& instance) {
  return static_cast<std::int64_t>(instance.topology.num_edges()) *
             static_cast<std::int64_t>(instance.critical.size()) +
         1;
}

void IlpModel::Init(const Instance& instance, std::vector<VertexId> ids_set,
                    bool multi) {
  const Topology& topo = instance.topology;
  if (ids_set.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "IDS set is empty");
  }
  std::sort(ids_set.begin(), ids_set.end());
  ids_set.erase(std::unique(ids_set.begin(), ids_set.end()), ids_set.end());
  for (VertexId d : ids_set) {
    if (!topo.Contains(d) || !topo.IsDevice(d)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "IDS " + std::to_string(d) + " is not a device vertex");
    }
  }
  for (const CriticalStream& s : instance.critical) {
    if (!topo.Contains(s.src) || !topo.Contains(s.dst) || !topo.IsDevice(s.src) ||
        !topo.IsDevice(s.dst)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "stream " + std::to_string(s.id) + " endpoint not in M");
    }
  }
  for (const Edge& e : topo.edges()) {
    if (instance.CriticalCapacity(e.id) <= 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "zero-capacity edge " + std::to_string(e.from) + "->" +
                      std::to_string(e.to));
    }
  }
  instance_ = instance;
  ids_set_ = std::move(ids_set);
  multi_ids_ = multi;
  k_ = ObservationWeight(instance);
  last_hops_.clear();
  for (const CriticalStream& s : instance.critical) {
    last_hops_.push_back(CandidateObservationPoints(topo, s));
  }
}

int IlpModel::IdsIndex(VertexId d) const {
  auto it = std::lower_bound(ids_set_.begin(), ids_set_.end(), d);
  if (it == ids_set_.end() || *it != d) return -1;
  return static_cast<int>(it - ids_set_.begin());
}

IlpModel BuildBase(const Instance& instance) {
  IlpModel m;
  m.Init(instance, {instance.topology.ids()}, /*multi=*/false);
  return m;
}

IlpModel BuildMultiIds(const Instance& instance, std::span<const VertexId> ids_set) {
  IlpModel m;
  m.Init(instance, std::vector<VertexId>(ids_set.begin(), ids_set.end()),
         /*multi=*/true);
  return m;
}

IlpModel AddIdsCapacity(IlpModel model, Bps limit, IdsCapacityMode mode) {
  if (model.multi_ids_) {
    throw Error(ErrorCode::kInvalidArgument,
                "IDS capacity applies to single-IDS models only");
  }
  if (model.ids_capacity_) {
    throw Error(ErrorCode::kState, "IDS capacity already set");
  }
  if (limit < 0) throw Error(ErrorCode::kInvalidArgument, "negative IDS capacity");
  model.ids_capacity_ = std::pair(limit, mode);
  return model;
}

IlpModel AddFlowTableLimits(IlpModel model, const std::map<VertexId, int>& limits) {
  const Topology& topo = model.instance_.topology;
  for (const auto& [v, limit] : limits) {
    if (!topo.Contains(v) || !topo.IsSwitch(v)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "flow-table limit on non-switch " + std::to_string(v));
    }
    if (limit < 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "negative flow-table limit at " + std::to_string(v));
    }
    model.flow_table_[v] = limit;
  }
  return model;
}

void IlpModel::AppendVariableName(std::int64_t var, std::string& out) const {
  const std::int64_t per_block = num_edges();
  const std::int64_t critical = static_cast<std::int64_t>(num_streams()) * per_block;
  const Topology& topo = instance_.topology;
  if (var < critical) {
    const auto stream = static_cast<int>(var / per_block);
    out += "x_s";
    AppendInt(out, instance_.critical[stream].id);
    AppendEdgeSuffix(out, topo.edge(static_cast<EdgeId>(var % per_block)));
    return;
  }
  const std::int64_t rel = var - critical;
  const std::int64_t block = rel / per_block;
  const auto stream = static_cast<int>(block / num_ids());
  const auto ids_index = static_cast<int>(block % num_ids());
  out += "r_s";
  AppendInt(out, instance_.critical[stream].id);
  if (multi_ids_) {
    out += "_d";
    AppendInt(out, ids_set_[ids_index]);
  }
  AppendEdgeSuffix(out, topo.edge(static_cast<EdgeId>(rel % per_block)));
}

std::string IlpModel::VariableName(std::int64_t var) const {
  std::string out;
  AppendVariableName(var, out);
  return out;
}

Rational IlpModel::ObjectiveConstant() const {
  return Rational(static_cast<std::int64_t>(num_streams()) * num_edges());
}

Rational IlpModel::ObjectiveCoefficient(std::int64_t var) const {
  const std::int64_t per_block = num_edges();
  const std::int64_t critical = static_cast<std::int64_t>(num_streams()) * per_block;
  const bool replica = var >= critical;
  const std::int64_t rel = replica ? var - critical : var;
  const std::int64_t block = rel / per_block;
  const auto e = static_cast<EdgeId>(rel % per_block);
  const auto stream = static_cast<int>(replica ? block / num_ids() : block);
  const CriticalStream& s = instance_.critical[stream];
  Rational coeff = -Rational(s.demand, instance_.CriticalCapacity(e));
  if (replica) {
    const VertexId d = ids_set_[static_cast<int>(block % num_ids())];
    if (instance_.topology.edge(e).to == d) coeff += Rational(k_ * s.relevance);
  }
  return coeff;
}

void IlpModel::ForEachRow(const std::function<void(const Row&)>& fn) const {
  const Topology& topo = instance_.topology;
  const int n_streams = num_streams();
  const int n_ids = num_ids();
  Row row;
  auto begin = [&](RowFamily family, Sense sense, std::int64_t rhs) {
    row.family = family;
    row.sense = sense;
    row.rhs = rhs;
    row.terms.clear();
    row.name.clear();
  };
  auto emit = [&] {
    if (!row.terms.empty()) fn(row);
  };
  auto ids_tag = [&](int di) {
    if (multi_ids_) {
      row.name += "_d";
      AppendInt(row.name, ids_set_[di]);
    }
  };

  if (n_streams > 0) {
    for (const Edge& e : topo.edges()) {
      begin(RowFamily::kCapacity, Sense::kLessEqual, instance_.CriticalCapacity(e.id));
      row.name = "cap";
      AppendEdgeSuffix(row.name, e);
      for (int k = 0; k < n_streams; ++k) {
        const Bps demand = instance_.critical[k].demand;
        if (demand == 0) continue;
        row.terms.push_back({CriticalVar(k, e.id), demand});
        for (int di = 0; di < n_ids; ++di) {
          row.terms.push_back({ReplicaVar(k, di, e.id), demand});
        }
      }
      emit();
    }
  }

  // Balance row Out(v) - In(v) over the given variable block.
  auto balance = [&](VertexId v, auto var_of) {
    for (EdgeId e : topo.OutEdges(v)) row.terms.push_back({var_of(e), 1});
    for (EdgeId e : topo.InEdges(v)) row.terms.push_back({var_of(e), -1});
  };

  for (int k = 0; k < n_streams; ++k) {
    const CriticalStream& s = instance_.critical[k];
    const std::string sid = std::to_string(s.id);
    auto x = [&](EdgeId e) { return CriticalVar(k, e); };

    for (const Vertex& v : topo.vertices()) {
      if (v.id == s.src || v.id == s.dst) continue;
      begin(RowFamily::kCriticalBalance, Sense::kEqual, 0);
      row.name = "bal_s" + sid + "_v" + std::to_string(v.id);
      balance(v.id, x);
      emit();
    }
    begin(RowFamily::kCriticalSource, Sense::kEqual, 1);
    row.name = "src_s" + sid;
    for (EdgeId e : topo.OutEdges(s.src)) row.terms.push_back({x(e), 1});
    emit();
    begin(RowFamily::kCriticalSink, Sense::kEqual, 1);
    row.name = "dst_s" + sid;
    for (EdgeId e : topo.InEdges(s.dst)) row.terms.push_back({x(e), 1});
    emit();

    const std::vector<VertexId>& last_hops = last_hops_[k];
    for (int di = 0; di < n_ids; ++di) {
      auto r = [&](EdgeId e) { return ReplicaVar(k, di, e); };
      for (const Vertex& v : topo.vertices()) {
        if (v.kind != VertexKind::kSwitch ||
            std::binary_search(last_hops.begin(), last_hops.end(), v.id)) {
          continue;
        }
        begin(RowFamily::kReplicaBalance, Sense::kEqual, 0);
        row.name = "rbal_s" + sid;
        ids_tag(di);
        row.name += "_v" + std::to_string(v.id);
        balance(v.id, r);
        emit();
      }
    }
    for (VertexId v : last_hops) {
      begin(RowFamily::kReplicaOrigin, Sense::kLessEqual, 0);
      row.name = "rop_s" + sid + "_v" + std::to_string(v);
      for (int di = 0; di < n_ids; ++di) {
        balance(v, [&](EdgeId e) { return ReplicaVar(k, di, e); });
      }
      row.terms.push_back({x(*topo.FindEdge(v, s.dst)), -1});
      emit();
    }
    for (int di = 0; di < n_ids; ++di) {
      for (EdgeId e : topo.OutEdges(ids_set_[di])) {
        begin(RowFamily::kReplicaIdsExit, Sense::kEqual, 0);
        row.name = "rids_s" + sid;
        ids_tag(di);
        AppendEdgeSuffix(row.name, topo.edge(e));
        row.terms.push_back({ReplicaVar(k, di, e), 1});
        emit();
      }
    }

    for (const Vertex& v : topo.vertices()) {
      if (v.kind != VertexKind::kDevice || v.id == s.src || v.id == s.dst) continue;
      for (EdgeId e : AdjacentEdges(topo, v.id)) {
        begin(RowFamily::kCriticalNoSwitch, Sense::kEqual, 0);
        row.name = "nsw_s" + sid;
        AppendEdgeSuffix(row.name, topo.edge(e));
        row.terms.push_back({x(e), 1});
        emit();
      }
    }
    for (int di = 0; di < n_ids; ++di) {
      for (const Vertex& v : topo.vertices()) {
        if (v.kind != VertexKind::kDevice || v.id == ids_set_[di]) continue;
        for (EdgeId e : AdjacentEdges(topo, v.id)) {
          begin(RowFamily::kReplicaNoSwitch, Sense::kEqual, 0);
          row.name = "rnsw_s" + sid;
          ids_tag(di);
          AppendEdgeSuffix(row.name, topo.edge(e));
          row.terms.push_back({ReplicaVar(k, di, e), 1});
          emit();
        }
      }
    }
  }

  if (ids_capacity_) {
    const auto [limit, mode] = *ids_capacity_;
    begin(RowFamily::kIdsCapacity, Sense::kLessEqual, limit);
    row.name = "idscap";
    const VertexId d = ids_set_.front();
    for (int k = 0; k < n_streams; ++k) {
      const Bps weight =
          mode == IdsCapacityMode::kCount ? 1 : instance_.critical[k].demand;
      if (weight == 0) continue;
      for (EdgeId e : topo.InEdges(d)) row.terms.push_back({ReplicaVar(k, 0, e), weight});
    }
    emit();
  }

  for (const auto& [v, limit] : flow_table_) {
    begin(RowFamily::kFlowTable, Sense::kLessEqual, limit);
    row.name = "ft_v" + std::to_string(v);
    for (int k = 0; k < n_streams; ++k) {
      for (EdgeId e : topo.OutEdges(v)) row.terms.push_back({CriticalVar(k, e), 1});
      for (int di = 0; di < n_ids; ++di) {
        for (EdgeId e : topo.OutEdges(v)) row.terms.push_back({ReplicaVar(k, di, e), 1});
      }
    }
    emit();
  }
}

ModelSummary IlpModel::Summary() const {
  ModelSummary s;
  s.streams = num_streams();
  s.edges = num_edges();
  s.ids = num_ids();
  s.k = k_;
  s.variables = num_variables();
  s.critical_variables = static_cast<std::int64_t>(num_streams()) * num_edges();
  s.replica_variables = s.variables - s.critical_variables;
  ForEachRow([&](const Row& row) {
    ++s.rows;
    ++s.rows_by_family[static_cast<int>(row.family)];
  });
  return s;
}

Evaluation IlpModel::Evaluate(std::span<const std::uint8_t> assignment) const {
  if (static_cast<std::int64_t>(assignment.size()) != num_variables()) {
    throw Error(ErrorCode::kInvalidArgument, "assignment size mismatch");
  }
  Evaluation ev;
  ForEachRow([&](const Row& row) {
    std::int64_t lhs = 0;
    for (const LinearTerm& t : row.terms) lhs += t.coeff * assignment[t.var];
    bool ok = true;
    switch (row.sense) {
      case Sense::kLessEqual: ok = lhs <= row.rhs; break;
      case Sense::kGreaterEqual: ok = lhs >= row.rhs; break;
      case Sense::kEqual: ok = lhs == row.rhs; break;
    }
    if (!ok) {
      ev.feasible = false;
      ev.violated.push_back(row.name);
    }
  });
  ev.objective = ObjectiveConstant();
  for (std::int64_t v = 0; v < num_variables(); ++v) {
    if (assignment[v]) ev.objective += ObjectiveCoefficient(v);
  }
  return ev;
}

std::vector<std::uint8_t> IlpModel::AssignmentFromPlan(const OfflinePlan& plan) const {
  const Topology& topo = instance_.topology;
  std::vector<std::uint8_t> a(num_variables(), 0);
  for (int k = 0; k < num_streams(); ++k) {
    const PlanEntry* entry = plan.Find(instance_.critical[k].id);
    if (entry == nullptr) continue;
    for (EdgeId e : topo.PathEdges(entry->path)) a[CriticalVar(k, e)] = 1;
    if (entry->observed && !entry->replica_path.empty()) {
      const int di = IdsIndex(entry->replica_path.back());
      if (di < 0) {
        throw Error(ErrorCode::kInvalidArgument,
                    "replica of stream " + std::to_string(entry->stream_id) +
                        " does not end at a modelled IDS");
      }
      for (EdgeId e : topo.PathEdges(entry->replica_path)) a[ReplicaVar(k, di, e)] = 1;
    }
  }
  return a;
}

nlohmann::json SummaryToJson(const ModelSummary& summary) {
  nlohmann::json rows = nlohmann::json::object();
  for (int f = 0; f < kNumRowFamilies; ++f) {
    rows[std::string(RowFamilyName(static_cast<RowFamily>(f)))] =
        summary.rows_by_family[f];
  }
  return {{"variables", summary.variables},
          {"binary_variables", summary.variables},
          {"critical_variables", summary.critical_variables},
          {"replica_variables", summary.replica_variables},
          {"constraints", summary.rows},
          {"constraints_by_family", rows},
          {"K", summary.k},
          {"streams", summary.streams},
          {"directed_edges", summary.edges},
          {"ids", summary.ids}};
}

Rational ObjectiveValue(const Instance& instance, const OfflinePlan& plan) {
  const Topology& topo = instance.topology;
  const std::int64_t k = ObservationWeight(instance);
  Rational total = 0;
  for (const CriticalStream& s : instance.critical) {
    total += topo.num_edges();
    const PlanEntry* entry = plan.Find(s.id);
    if (entry == nullptr) continue;
    auto charge = [&](std::span<const VertexId> path) {
      for (EdgeId e : topo.PathEdges(path)) {
        total -= Rational(s.demand, instance.CriticalCapacity(e));
      }
    };
    charge(entry->path);
    if (entry->observed) {
      charge(entry->replica_path);
      total += Rational(k * s.relevance);
    }
  }
  return total;
}

}  // namespace icsroute
