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

// Evaluation instance construction. A backbone of routers gets a number of
// electrical substations per router following a decreasing power law; each
// substation is a pair of access switches with twelve dual-homed devices and
// a fixed set of SCADA-centred critical streams.

#ifndef ICSROUTE_CORE_TOPOGEN_H_
#define ICSROUTE_CORE_TOPOGEN_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/model.h"

namespace icsroute {

struct DeviceRole {
  std::string name;
  int quantity = 0;
  Bps from_scada = 0;  // SCADA -> device
  Bps to_scada = 0;    // device -> SCADA
};

struct SubstationTemplate {
  std::vector<DeviceRole> roles;
  int access_switches = 2;
  Bps internal_capacity = kGbps;
  Bps uplink_capacity = kGbps;

  // Role devices plus the SCADA server.
  int DevicesPerSubstation() const;
  int StreamsPerSubstation() const;
  // Every device dual-homed to every access switch, plus one uplink per
  // access switch.
  int LinksPerSubstation() const;
};

SubstationTemplate DefaultSubstationTemplate();

struct Instance {
  Topology topology;
  std::vector<CriticalStream> critical;
  // β(e) per directed edge: bandwidth reserved for standard streams.
  std::vector<Bps> standard_budget;
  double alpha = 0;
  double reserve_fraction = 0;
  int substations = 0;
  int backbone_routers = 0;
  int backbone_links = 0;
  std::uint64_t seed = 0;

  // C(e) - β(e): what the off-line planner may use.
  Bps CriticalCapacity(EdgeId e) const {
    return topology.edge(e).capacity - Budget(e);
  }
  Bps Budget(EdgeId e) const {
    return standard_budget.empty() ? 0 : standard_budget.at(e);
  }
  const CriticalStream& stream(StreamId id) const;
};

// Topology checks plus stream/budget consistency.
std::vector<ValidationIssue> ValidateInstance(const Instance& instance);

// ⌊10 / position^alpha⌋ for a 1-based position.
int PowerLawSubstations(int position, double alpha);
int PowerLawTotal(int routers, double alpha);

// Backbone routers ordered by descending incident bandwidth, ties by id.
std::vector<VertexId> RoutersByBandwidth(const Topology& backbone);
// Router that hosts the IDS: the largest incident bandwidth, lowest id.
VertexId SelectIdsRouter(const Topology& backbone);

struct AlphaSearch {
  std::optional<double> alpha;  // exact hit on the grid
  double nearest_alpha = 0.7;
  int nearest_q = 0;
};

// Grid {0.70, 0.71, ..., 1.00}; smallest alpha whose total equals q_target.
std::optional<double> FindAlpha(const Topology& backbone, int q_target);
AlphaSearch SearchAlpha(const Topology& backbone, int q_target);

Instance AttachSubstations(const Topology& backbone,
                           const SubstationTemplate& tmpl, double alpha,
                           std::uint64_t seed);

// ⌊fraction · capacity⌋, exact for fractions given to 9 decimals.
Bps ReservedBudget(Bps capacity, double fraction);

// β(e) = ⌊fraction · C(e)⌋ on every edge. fraction must lie in [0, 1).
Instance ReserveStandardFraction(Instance instance, double fraction);

}  // namespace icsroute

#endif  // ICSROUTE_CORE_TOPOGEN_H_
