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

// Operator workload replay. Each operator sits at a random switch and opens
// connections to random devices; the connections become standard streams
// handled by OnlineState.
//
// Trace CSV:   time,kind,c,u,s,t   (kind is begin|end; s is the operator's
//              switch; t is empty on end rows)
// Stats CSV:   stream_id,begin,end,min_bw,final_bw,rejected
// Density CSV: bucket_low_bps,bucket_high_bps,fraction

#ifndef ICSROUTE_CORE_SIMULATOR_H_
#define ICSROUTE_CORE_SIMULATOR_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/online_solver.h"
#include "core/plan.h"
#include "core/topogen.h"
#include "json.hpp"

namespace icsroute {

enum class EventKind { kBegin, kEnd };

struct Event {
  EventKind kind = EventKind::kBegin;
  double time = 0;
  int connection = 0;
  int op = 0;                   // operator index
  VertexId attach = kNoVertex;  // operator's switch
  VertexId target = kNoVertex;  // begin only

  bool operator==(const Event&) const = default;
};

struct WorkloadConfig {
  int operators = 0;  // 0: one per substation
  double mean_interarrival = 300;
  double mean_duration = 900;
  double horizon = 600;
  std::uint64_t seed = 1;
};

// Per operator: a uniform switch, exponential interarrivals starting at 0
// until the horizon, exponential durations, uniform targets among devices
// other than the IDS. Sorted by time (ends before begins on ties, then by
// connection); connections are numbered in begin order.
std::vector<Event> GenerateEvents(const Instance& instance, const WorkloadConfig& config);

std::string TraceToCsv(const std::vector<Event>& events);
std::vector<Event> TraceFromCsv(std::string_view csv);

struct RunOptions {
  double tau = OnlineState::kDefaultTau;
  Bps operator_link = kGbps;
};

struct StreamStats {
  int connection = 0;
  double begin = 0;
  double end = 0;
  Bps min_bw = 0;    // smallest allocation over the lifetime
  Bps final_bw = 0;  // allocation just before the end
  bool rejected = false;

  bool operator==(const StreamStats&) const = default;
};

struct RunStats {
  std::vector<StreamStats> streams;  // by connection id
  int events = 0;
  int admitted = 0;
  int rejected = 0;
  int max_concurrent = 0;
  std::int64_t samples = 0;
  std::int64_t budget_violations = 0;
  std::int64_t critical_touches = 0;
  std::int64_t other_violations = 0;
  std::int64_t widest_path_calls = 0;
  Bps max_link_capacity = 0;
};

// Replays `events`. The state is checked after every event; violations are
// counted, not thrown. Throws kParse on a malformed trace.
RunStats Run(const Instance& instance, const std::optional<OfflinePlan>& plan,
             const std::vector<Event>& events, const RunOptions& options = {});

nlohmann::json RunSummaryJson(const RunStats& stats);
std::string StatsToCsv(const std::vector<StreamStats>& stats);
std::vector<StreamStats> StatsFromCsv(std::string_view csv);

struct DensityBucket {
  Bps low = 0;   // inclusive
  Bps high = 0;  // exclusive
  std::int64_t count = 0;
  double fraction = 0;
};

// Lifetime-minimum allocations of admitted streams on power-of-two buckets
// [2^k, 2^(k+1)) (and [0, 1) for zero), covering the range contiguously.
std::vector<DensityBucket> DensityReport(const std::vector<StreamStats>& stats);
std::string DensityToCsv(const std::vector<DensityBucket>& buckets);

}  // namespace icsroute

#endif  // ICSROUTE_CORE_SIMULATOR_H_
