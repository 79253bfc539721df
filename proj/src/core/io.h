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

// File formats.
//
// Topology JSON:
//   {"vertices":[{"id":int,"label":str,"kind":"switch"|"device"}],
//    "links":[{"a":int,"b":int,"capacity_bps":int}], "ids":int}
// Vertex ids in the file may be arbitrary integers; they are renumbered
// densely in file order on load. Link k becomes directed edges 2k (a->b) and
// 2k+1 (b->a).
//
// GraphML subset: <node id=...> with an optional "label" data key, <edge
// source=... target=...> with an optional bandwidth key (attr.name one of
// LinkSpeedRaw, bandwidth, capacity_bps). Every node is a switch; missing
// bandwidth means 1 Gbps. Self loops and repeated node pairs are dropped.
//
// Instance JSON: {"topology":{...}, "critical":[{"id","src","dst",
// "demand_bps","relevance"}], "standard_budget_bps":[per directed edge],
// "alpha", "reserve_fraction", "substations", "seed",
// "backbone":{"routers","links"}}.
//
// Plan JSON: {"status":"exact"|"enumeration-limited"|"infeasible",
// "objective":"num/den", "objective_approx":float, "streams":[{"id",
// "path":[...], "observed":bool, "op":int|null, "replica_path":[...]|null}]}.

#ifndef ICSROUTE_CORE_IO_H_
#define ICSROUTE_CORE_IO_H_

#include <string>
#include <string_view>

#include "core/plan.h"
#include "core/topogen.h"
#include "json.hpp"

namespace icsroute {

nlohmann::json TopologyToJson(const Topology& topology);
Topology TopologyFromJson(const nlohmann::json& j);
Topology ParseGraphMl(std::string_view xml);

// Dispatches on extension: .graphml / .xml use the GraphML reader,
// everything else is topology JSON.
Topology LoadTopology(const std::string& path);

nlohmann::json InstanceToJson(const Instance& instance);
Instance InstanceFromJson(const nlohmann::json& j);
Instance LoadInstance(const std::string& path);
void SaveInstance(const Instance& instance, const std::string& path);

nlohmann::json PlanToJson(const OfflinePlan& plan);
OfflinePlan PlanFromJson(const nlohmann::json& j);
OfflinePlan LoadPlan(const std::string& path);
void SavePlan(const OfflinePlan& plan, const std::string& path);

std::string RationalToString(const Rational& r);
Rational RationalFromString(std::string_view s);
// Nearest double; only for display.
double RationalToDouble(const Rational& r);
// ⌊r⌋ for r >= 0.
Bps FloorToBps(const Rational& r);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view contents);
nlohmann::json ReadJsonFile(const std::string& path);

}  // namespace icsroute

#endif  // ICSROUTE_CORE_IO_H_
