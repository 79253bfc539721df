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

#ifndef ICSROUTE_CORE_PLAN_H_
#define ICSROUTE_CORE_PLAN_H_

#include <optional>
#include <string_view>
#include <vector>

#include "core/model.h"

namespace icsroute {

// Routing decided for one critical stream at design time.
struct PlanEntry {
  StreamId stream_id = 0;
  std::vector<VertexId> path;  // s ... t
  bool observed = false;
  std::optional<VertexId> op;  // penultimate vertex of `path` when observed
  std::vector<VertexId> replica_path;  // op ... ids, empty when unobserved

  bool operator==(const PlanEntry&) const = default;
};

enum class SolveStatus { kExact, kEnumerationLimited, kInfeasible };

struct OfflinePlan {
  std::vector<PlanEntry> streams;  // ordered like Instance::critical
  SolveStatus status = SolveStatus::kExact;
  Rational objective = 0;

  const PlanEntry* Find(StreamId id) const {
    for (const PlanEntry& e : streams) {
      if (e.stream_id == id) return &e;
    }
    return nullptr;
  }
};

inline std::string_view StatusName(SolveStatus s) {
  switch (s) {
    case SolveStatus::kExact:
      return "exact";
    case SolveStatus::kEnumerationLimited:
      return "enumeration-limited";
    case SolveStatus::kInfeasible:
      return "infeasible";
  }
  return "unknown";
}

}  // namespace icsroute

#endif  // ICSROUTE_CORE_PLAN_H_
