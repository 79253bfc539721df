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

#ifndef ICSROUTE_CORE_WIDEST_PATH_H_
#define ICSROUTE_CORE_WIDEST_PATH_H_

#include <optional>
#include <span>
#include <vector>

#include "core/model.h"

namespace icsroute {

struct WidePath {
  std::vector<VertexId> path;
  Bps bottleneck = 0;
};

// Path from u to v maximising the smallest cap along it. Among paths with
// the same bottleneck the one with fewer hops wins, then the
// lexicographically smallest vertex sequence. Interior vertices must be
// switches. Edges with cap 0 are unusable unless `allow_zero` is set, in
// which case any connected pair yields a path (bottleneck possibly 0).
std::optional<WidePath> WidestPath(const Topology& topology,
                                   std::span<const Bps> caps, VertexId u,
                                   VertexId v, bool allow_zero = false);

// ⌊budget(e) / (sharers(e) + 1)⌋ per edge.
std::vector<Bps> CandidateCapacities(std::span<const Bps> budget,
                                     std::span<const int> sharers);

}  // namespace icsroute

#endif  // ICSROUTE_CORE_WIDEST_PATH_H_
