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

// Core domain types: a capacitated directed network whose vertices are either
// switches (able to forward) or devices (endpoints only), plus the critical
// streams that must be routed across it.

#ifndef ICSROUTE_CORE_MODEL_H_
#define ICSROUTE_CORE_MODEL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace icsroute {

// Bandwidth in bits per second. Always integral.
using Bps = std::int64_t;
using VertexId = std::int32_t;
using EdgeId = std::int32_t;
using StreamId = std::int32_t;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr VertexId kNoVertex = -1;
inline constexpr Bps kGbps = 1'000'000'000;

// Failure categories shared by every module. The C API maps them one to one
// onto status codes.
enum class ErrorCode {
  kInvalidArgument,
  kNotFound,
  kParse,
  kIo,
  kInfeasible,
  kSizeBound,
  kState,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

enum class VertexKind { kSwitch, kDevice };

struct Vertex {
  VertexId id = kNoVertex;
  VertexKind kind = VertexKind::kSwitch;
  std::string label;
};

// Directed edge. A physical link is stored as two edges with ids 2k and 2k+1.
struct Edge {
  EdgeId id = -1;
  VertexId from = kNoVertex;
  VertexId to = kNoVertex;
  Bps capacity = 0;
};

struct Link {
  VertexId a = kNoVertex;
  VertexId b = kNoVertex;
  Bps capacity = 0;
};

class Topology {
 public:
  VertexId AddVertex(VertexKind kind, std::string label = {});
  // Adds a physical link, expanded to the directed edges a->b and b->a.
  // Returns the id of the a->b edge. Endpoints must exist; every other
  // invariant is left to ValidateTopology so bad inputs can be reported.
  EdgeId AddLink(VertexId a, VertexId b, Bps capacity);
  void set_ids(VertexId v) { ids_ = v; }

  VertexId ids() const { return ids_; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Link>& links() const { return links_; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_links() const { return static_cast<int>(links_.size()); }

  bool Contains(VertexId v) const { return v >= 0 && v < num_vertices(); }
  const Vertex& vertex(VertexId v) const;
  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  bool IsSwitch(VertexId v) const {
    return vertex(v).kind == VertexKind::kSwitch;
  }
  bool IsDevice(VertexId v) const {
    return vertex(v).kind == VertexKind::kDevice;
  }

  // Outgoing / incoming edge ids, sorted by the far endpoint's id.
  std::span<const EdgeId> OutEdges(VertexId v) const { return out_.at(v); }
  std::span<const EdgeId> InEdges(VertexId v) const { return in_.at(v); }

  std::optional<EdgeId> FindEdge(VertexId from, VertexId to) const;

  std::vector<VertexId> Switches() const;
  std::vector<VertexId> Devices() const;

  // Edge ids along a vertex sequence. Throws kNotFound on a missing hop.
  std::vector<EdgeId> PathEdges(std::span<const VertexId> path) const;

 private:
  static std::uint64_t Key(VertexId from, VertexId to) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(from))
            << 32) |
           static_cast<std::uint32_t>(to);
  }
  void InsertSorted(std::vector<EdgeId>& list, EdgeId e, bool by_target);

  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<Link> links_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::vector<EdgeId>> in_;
  std::unordered_map<std::uint64_t, EdgeId> edge_index_;
  VertexId ids_ = kNoVertex;
};

struct CriticalStream {
  StreamId id = 0;
  VertexId src = kNoVertex;
  VertexId dst = kNoVertex;
  Bps demand = 0;
  int relevance = 1;
};

// Replica of a stream: leaves the observation point, ends at an IDS, and
// carries the parent's demand.
struct ReplicaSpec {
  VertexId op = kNoVertex;
  VertexId dest = kNoVertex;
  Bps demand = 0;
};

struct ValidationIssue {
  std::string code;
  std::string detail;
};

std::vector<ValidationIssue> ValidateTopology(const Topology& topology);

// Sum of capacities of the physical links incident to v, each link once.
Bps IncidentBandwidthSum(const Topology& topology, VertexId v);

// Switches with a directed edge into the stream's destination, ascending.
std::vector<VertexId> CandidateObservationPoints(const Topology& topology,
                                                 const CriticalStream& stream);

std::string_view KindName(VertexKind kind);

}  // namespace icsroute

#endif  // ICSROUTE_CORE_MODEL_H_
