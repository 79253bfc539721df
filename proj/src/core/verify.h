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

// Independent checks of plans and on-line states. Nothing here looks at
// solver internals.

#ifndef ICSROUTE_CORE_VERIFY_H_
#define ICSROUTE_CORE_VERIFY_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/formulation.h"
#include "core/online_solver.h"
#include "core/plan.h"
#include "core/topogen.h"
#include "json.hpp"

namespace icsroute {

struct Violation {
  std::string code;
  std::optional<StreamId> stream_id;
  std::optional<EdgeId> edge;
  std::string detail;
};

struct CheckOptions {
  std::vector<VertexId> ids_set;  // empty: the topology's IDS
  std::optional<std::pair<Bps, IdsCapacityMode>> ids_capacity;
  std::map<VertexId, int> flow_table;
};

// Codes: unknown stream, duplicate stream, missing stream, path endpoints,
// missing edge, path not simple, device in path, op not last hop,
// unobserved with replica, replica endpoints, replica missing edge,
// replica not simple, device in replica, capacity, ids capacity, flow table.
std::vector<Violation> CheckPlan(const Instance& instance, const OfflinePlan& plan,
                                 const CheckOptions& options = {});

// Codes: path endpoints, missing edge, device in path, op not on path,
// replica endpoints, replica missing edge, device in replica,
// non-positive allocation, budget, not max-min, critical reservation.
std::vector<Violation> CheckOnlineState(const OnlineState& state);

nlohmann::json ViolationsToJson(const std::vector<Violation>& violations);

}  // namespace icsroute

#endif  // ICSROUTE_CORE_VERIFY_H_
