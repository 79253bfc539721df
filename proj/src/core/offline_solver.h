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

// Exact off-line planner for small instances.
//
// Each critical stream gets a list of options (a path, optionally observed
// with a replica path from its last hop to an IDS). The objective is
// additive over streams, so the search is a branch-and-bound over option
// indices coupled only through shared resources: edge capacity, IDS
// throughput and flow-table entries.

#ifndef ICSROUTE_CORE_OFFLINE_SOLVER_H_
#define ICSROUTE_CORE_OFFLINE_SOLVER_H_

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "core/formulation.h"
#include "core/plan.h"
#include "core/topogen.h"

namespace icsroute {

struct PathEnumeration {
  std::vector<std::vector<VertexId>> paths;
  bool complete = true;  // false when `limit` cut the list short
};

// Simple from->to paths whose interior vertices are switches, ordered by
// hop count and then lexicographically by vertex ids; at most `limit`.
PathEnumeration EnumerateSimplePaths(const Topology& topology, VertexId from,
                                     VertexId to, int limit);

struct StreamOption {
  std::vector<VertexId> path;
  bool observed = false;
  std::optional<VertexId> op;
  std::vector<VertexId> replica_path;
};

struct StreamOptions {
  std::vector<StreamOption> options;
  bool complete = true;
};

// For every s->t path (in enumeration order): the unobserved option, then
// one observed option per replica path from the path's last hop to an IDS,
// nearest IDS paths first. Throws kInfeasible when s and t are disconnected.
StreamOptions EnumerateStreamOptions(const Instance& instance,
                                     const CriticalStream& stream, int limit,
                                     std::span<const VertexId> ids_set);

struct SolverOptions {
  int option_limit = 200;
  int max_links = 40;
  int max_streams = 12;
  std::vector<VertexId> ids_set;  // empty: the topology's IDS
  std::optional<std::pair<Bps, IdsCapacityMode>> ids_capacity;
  std::map<VertexId, int> flow_table;
  int jobs = 1;
};

// Maximises the routing objective over the cross product of stream options.
// Among optimal plans returns the one with the lexicographically smallest
// option-index vector. Throws kInfeasible or kSizeBound.
OfflinePlan SolveExact(const Instance& instance, const SolverOptions& options = {});

// Exhaustive reference for tiny instances (<= 8 switches, <= 3 streams).
OfflinePlan BruteForceOracle(const Instance& instance,
                             const SolverOptions& options = {});

}  // namespace icsroute

#endif  // ICSROUTE_CORE_OFFLINE_SOLVER_H_
