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

#include "core/water_fill.h"

#include <optional>

namespace icsroute {

std::vector<Rational> WaterFill(std::span<const Rational> capacity,
                                const std::vector<std::vector<EdgeId>>& stream_edges) {
  const size_t num_edges = capacity.size();
  // crossings[e]: (stream, multiplicity) pairs.
  std::vector<std::vector<std::pair<int, int>>> crossings(num_edges);
  for (size_t s = 0; s < stream_edges.size(); ++s) {
    if (stream_edges[s].empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "stream " + std::to_string(s) + " crosses no edge");
    }
    for (EdgeId e : stream_edges[s]) {
      if (e < 0 || static_cast<size_t>(e) >= num_edges) {
        throw Error(ErrorCode::kInvalidArgument, "edge index out of range");
      }
      auto& list = crossings[e];
      if (!list.empty() && list.back().first == static_cast<int>(s)) {
        ++list.back().second;
      } else {
        bool merged = false;
        for (auto& [who, mult] : list) {
          if (who == static_cast<int>(s)) {
            ++mult;
            merged = true;
          }
        }
        if (!merged) list.push_back({static_cast<int>(s), 1});
      }
    }
  }

  std::vector<Rational> residual(capacity.begin(), capacity.end());
  std::vector<int> load(num_edges, 0);  // unfixed crossings
  for (size_t e = 0; e < num_edges; ++e) {
    for (const auto& [s, mult] : crossings[e]) load[e] += mult;
  }
  std::vector<std::optional<Rational>> fixed(stream_edges.size());
  size_t remaining = stream_edges.size();
  while (remaining > 0) {
    std::optional<size_t> tightest;
    Rational best_share;
    for (size_t e = 0; e < num_edges; ++e) {
      if (load[e] == 0) continue;
      Rational share = residual[e] / load[e];
      if (!tightest || share < best_share) {
        tightest = e;
        best_share = share;
      }
    }
    for (const auto& [s, mult] : crossings[*tightest]) {
      if (fixed[s]) continue;
      fixed[s] = best_share;
      --remaining;
      for (EdgeId e : stream_edges[s]) {
        residual[e] -= best_share;
        --load[e];
      }
    }
  }
  std::vector<Rational> out;
  out.reserve(fixed.size());
  for (auto& f : fixed) out.push_back(std::move(*f));
  return out;
}

}  // namespace icsroute
