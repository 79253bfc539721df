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

#ifndef ICSROUTE_CORE_WATER_FILL_H_
#define ICSROUTE_CORE_WATER_FILL_H_

#include <span>
#include <vector>

#include "core/model.h"

namespace icsroute {

// Max-min fair allocation by repeatedly saturating the edge with the
// smallest residual share. `stream_edges[i]` lists the edges stream i
// crosses; an edge listed twice is charged twice (a stream whose path and
// replica share an edge). Ties between equally tight edges go to the
// lowest edge index. Every stream must cross at least one edge.
std::vector<Rational> WaterFill(std::span<const Rational> capacity,
                                const std::vector<std::vector<EdgeId>>& stream_edges);

}  // namespace icsroute

#endif  // ICSROUTE_CORE_WATER_FILL_H_
