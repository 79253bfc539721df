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

#include "core/offline_solver.h"

#include <algorithm>
#include <deque>
#include <numeric>
#include <thread>

namespace icsroute {

using boost::multiprecision::cpp_int;

namespace {

constexpr int kUnreached = -1;

// Hop distance to `to` where only `to` and switches may be entered.
std::vector<int> DistanceTo(const Topology& topo, VertexId to) {
  std::vector<int> dist(topo.num_vertices(), kUnreached);
  std::deque<VertexId> queue{to};
  dist[to] = 0;
  while (!queue.empty()) {
    const VertexId w = queue.front();
    queue.pop_front();
    if (w != to && !topo.IsSwitch(w)) continue;
    for (EdgeId e : topo.InEdges(w)) {
      const VertexId u = topo.edge(e).from;
      if (dist[u] == kUnreached) {
        dist[u] = dist[w] + 1;
        queue.push_back(u);
      }
    }
  }
  return dist;
}

class PathCollector {
 public:
  PathCollector(const Topology& topo, VertexId from, VertexId to, int limit)
      : topo_(topo), from_(from), to_(to), limit_(limit),
        dist_(DistanceTo(topo, to)), visited_(topo.num_vertices(), false) {}

  PathEnumeration Run() {
    PathEnumeration out;
    if (from_ == to_ || dist_[from_] == kUnreached) return out;
    for (int hops = dist_[from_]; hops < topo_.num_vertices() && !Full(); ++hops) {
      current_ = {from_};
      visited_[from_] = true;
      Extend(from_, hops);
      visited_[from_] = false;
    }
    out.complete = static_cast<int>(found_.size()) <= limit_;
    if (!out.complete) found_.resize(limit_);
    out.paths = std::move(found_);
    return out;
  }

 private:
  bool Full() const { return static_cast<int>(found_.size()) > limit_; }

  void Extend(VertexId at, int remaining) {
    for (EdgeId e : topo_.OutEdges(at)) {
      if (Full()) return;
      const VertexId next = topo_.edge(e).to;
      if (next == to_) {
        if (remaining == 1) {
          current_.push_back(next);
          found_.push_back(current_);
          current_.pop_back();
        }
        continue;
      }
      if (remaining <= 1 || visited_[next] || !topo_.IsSwitch(next)) continue;
      if (dist_[next] == kUnreached || dist_[next] > remaining - 1) continue;
      visited_[next] = true;
      current_.push_back(next);
      Extend(next, remaining - 1);
      current_.pop_back();
      visited_[next] = false;
    }
  }

  const Topology& topo_;
  VertexId from_;
  VertexId to_;
  int limit_;
  std::vector<int> dist_;
  std::vector<bool> visited_;
  std::vector<VertexId> current_;
  std::vector<std::vector<VertexId>> found_;
};

std::vector<VertexId> ResolveIds(const Instance& inst, const SolverOptions& opts) {
  std::vector<VertexId> ids = opts.ids_set;
  if (ids.empty()) ids.push_back(inst.topology.ids());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  for (VertexId d : ids) {
    if (!inst.topology.Contains(d) || !inst.topology.IsDevice(d)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "IDS " + std::to_string(d) + " is not a device vertex");
    }
  }
  return ids;
}

// Resource footprint and objective contribution of one option. The value
// is scaled by the instance-wide denominator so sums stay integral.
struct CompiledOption {
  cpp_int value;
  std::vector<std::pair<EdgeId, Bps>> edge_load;  // merged per edge
  Bps ids_load = 0;
  std::vector<std::pair<int, int>> table_load;  // (flow-table slot, entries)
};

struct Problem {
  std::vector<StreamOptions> options;
  std::vector<std::vector<CompiledOption>> compiled;
  cpp_int denominator = 1;
  bool complete = true;
  std::vector<Bps> edge_capacity;
  std::optional<Bps> ids_capacity;
  std::vector<int> table_capacity;
};

Problem Compile(const Instance& inst, const SolverOptions& opts) {
  const Topology& topo = inst.topology;
  const std::vector<VertexId> ids = ResolveIds(inst, opts);
  Problem p;
  for (const Edge& e : topo.edges()) {
    const Bps cap = inst.CriticalCapacity(e.id);
    if (cap <= 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "zero-capacity edge " + std::to_string(e.from) + "->" +
                      std::to_string(e.to));
    }
    p.edge_capacity.push_back(cap);
    p.denominator = boost::multiprecision::lcm(p.denominator, cpp_int(cap));
  }
  std::map<VertexId, int> table_slot;
  for (const auto& [v, limit] : opts.flow_table) {
    if (!topo.Contains(v) || !topo.IsSwitch(v) || limit < 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "bad flow-table limit at " + std::to_string(v));
    }
    table_slot[v] = static_cast<int>(p.table_capacity.size());
    p.table_capacity.push_back(limit);
  }
  const std::int64_t k = ObservationWeight(inst);
  if (opts.ids_capacity) p.ids_capacity = opts.ids_capacity->first;

  for (const CriticalStream& s : inst.critical) {
    if (!topo.IsDevice(s.src) || !topo.IsDevice(s.dst)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "stream " + std::to_string(s.id) + " endpoint not in M");
    }
    StreamOptions so = EnumerateStreamOptions(inst, s, opts.option_limit, ids);
    p.complete = p.complete && so.complete;
    std::vector<CompiledOption> compiled;
    for (const StreamOption& o : so.options) {
      CompiledOption c;
      std::map<EdgeId, Bps> load;
      std::map<int, int> tables;
      c.value = p.denominator * topo.num_edges();
      auto charge = [&](std::span<const VertexId> path) {
        for (EdgeId e : topo.PathEdges(path)) {
          load[e] += s.demand;
          c.value -= p.denominator / p.edge_capacity[e] * s.demand;
          auto slot = table_slot.find(topo.edge(e).from);
          if (slot != table_slot.end()) ++tables[slot->second];
        }
      };
      charge(o.path);
      if (o.observed) {
        charge(o.replica_path);
        c.value += p.denominator * k * s.relevance;
        c.ids_load = opts.ids_capacity &&
                             opts.ids_capacity->second == IdsCapacityMode::kCount
                         ? 1
                         : s.demand;
      }
      c.edge_load.assign(load.begin(), load.end());
      c.table_load.assign(tables.begin(), tables.end());
      compiled.push_back(std::move(c));
    }
    p.options.push_back(std::move(so));
    p.compiled.push_back(std::move(compiled));
  }
  return p;
}

struct Resources {
  std::vector<Bps> edge;
  Bps ids = 0;
  std::vector<int> table;

  explicit Resources(const Problem& p)
      : edge(p.edge_capacity), ids(p.ids_capacity.value_or(0)), table(p.table_capacity) {}

  bool Fits(const CompiledOption& c, bool ids_limited) const {
    for (const auto& [e, bw] : c.edge_load) {
      if (edge[e] < bw) return false;
    }
    if (ids_limited && ids < c.ids_load) return false;
    for (const auto& [slot, n] : c.table_load) {
      if (table[slot] < n) return false;
    }
    return true;
  }
  void Apply(const CompiledOption& c, int sign, bool ids_limited) {
    for (const auto& [e, bw] : c.edge_load) edge[e] -= sign * bw;
    if (ids_limited) ids -= sign * c.ids_load;
    for (const auto& [slot, n] : c.table_load) table[slot] -= sign * n;
  }
};

struct SearchResult {
  bool found = false;
  cpp_int value;
  std::vector<int> choice;
};

class BranchAndBound {
 public:
  explicit BranchAndBound(const Problem& p) : p_(p), resources_(p) {
    const size_t n = p.compiled.size();
    suffix_.assign(n + 1, 0);
    for (size_t i = n; i-- > 0;) {
      cpp_int best = 0;
      bool any = false;
      for (const CompiledOption& c : p.compiled[i]) {
        if (!any || c.value > best) best = c.value;
        any = true;
      }
      suffix_[i] = suffix_[i + 1] + best;
    }
    choice_.assign(n, -1);
  }

  // Explores assignments whose first stream takes one of `first_options`.
  SearchResult Run(const std::vector<int>& first_options) {
    if (p_.compiled.empty()) {
      result_.found = true;
      return result_;
    }
    const bool ids_limited = p_.ids_capacity.has_value();
    for (int i : first_options) {
      const CompiledOption& c = p_.compiled[0][i];
      if (!resources_.Fits(c, ids_limited)) continue;
      if (result_.found && c.value + suffix_[1] <= result_.value) continue;
      resources_.Apply(c, +1, ids_limited);
      choice_[0] = i;
      Descend(1, c.value);
      resources_.Apply(c, -1, ids_limited);
    }
    return result_;
  }

 private:
  void Descend(size_t depth, const cpp_int& value) {
    if (depth == p_.compiled.size()) {
      if (!result_.found || value > result_.value) {
        result_.found = true;
        result_.value = value;
        result_.choice = choice_;
      }
      return;
    }
    const bool ids_limited = p_.ids_capacity.has_value();
    const auto& opts = p_.compiled[depth];
    for (size_t i = 0; i < opts.size(); ++i) {
      const CompiledOption& c = opts[i];
      if (result_.found && value + c.value + suffix_[depth + 1] <= result_.value) {
        continue;
      }
      if (!resources_.Fits(c, ids_limited)) continue;
      resources_.Apply(c, +1, ids_limited);
      choice_[depth] = static_cast<int>(i);
      Descend(depth + 1, value + c.value);
      resources_.Apply(c, -1, ids_limited);
    }
  }

  const Problem& p_;
  Resources resources_;
  std::vector<cpp_int> suffix_;
  std::vector<int> choice_;
  SearchResult result_;
};

OfflinePlan MakePlan(const Instance& inst, const Problem& p,
                     const std::vector<int>& choice, const Rational& objective) {
  OfflinePlan plan;
  plan.status = p.complete ? SolveStatus::kExact : SolveStatus::kEnumerationLimited;
  plan.objective = objective;
  for (size_t i = 0; i < inst.critical.size(); ++i) {
    const StreamOption& o = p.options[i].options[choice[i]];
    PlanEntry e;
    e.stream_id = inst.critical[i].id;
    e.path = o.path;
    e.observed = o.observed;
    e.op = o.op;
    e.replica_path = o.replica_path;
    plan.streams.push_back(std::move(e));
  }
  return plan;
}

}  // namespace

PathEnumeration EnumerateSimplePaths(const Topology& topology, VertexId from,
                                     VertexId to, int limit) {
  if (limit < 1) throw Error(ErrorCode::kInvalidArgument, "limit must be >= 1");
  topology.vertex(from);
  topology.vertex(to);
  return PathCollector(topology, from, to, limit).Run();
}

StreamOptions EnumerateStreamOptions(const Instance& instance,
                                     const CriticalStream& stream, int limit,
                                     std::span<const VertexId> ids_set) {
  const Topology& topo = instance.topology;
  PathEnumeration paths = EnumerateSimplePaths(topo, stream.src, stream.dst, limit);
  if (paths.paths.empty()) {
    throw Error(ErrorCode::kInfeasible,
                "stream " + std::to_string(stream.id) + " has no path");
  }
  StreamOptions out;
  out.complete = paths.complete;
  std::map<VertexId, std::vector<std::vector<VertexId>>> replicas_from;
  for (auto& path : paths.paths) {
    out.options.push_back({path, false, std::nullopt, {}});
    const VertexId op = path[path.size() - 2];
    if (!topo.IsSwitch(op)) continue;
    auto it = replicas_from.find(op);
    if (it == replicas_from.end()) {
      std::vector<std::vector<VertexId>> merged;
      for (VertexId d : ids_set) {
        PathEnumeration r = EnumerateSimplePaths(topo, op, d, limit);
        out.complete = out.complete && r.complete;
        for (auto& rp : r.paths) merged.push_back(std::move(rp));
      }
      std::stable_sort(merged.begin(), merged.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
      });
      if (static_cast<int>(merged.size()) > limit) {
        merged.resize(limit);
        out.complete = false;
      }
      it = replicas_from.emplace(op, std::move(merged)).first;
    }
    for (const auto& rp : it->second) {
      out.options.push_back({path, true, op, rp});
    }
  }
  return out;
}

OfflinePlan SolveExact(const Instance& instance, const SolverOptions& options) {
  if (instance.topology.num_links() > options.max_links ||
      static_cast<int>(instance.critical.size()) > options.max_streams) {
    throw Error(ErrorCode::kSizeBound,
                "instance has " + std::to_string(instance.topology.num_links()) +
                    " links and " + std::to_string(instance.critical.size()) +
                    " streams; the exact solver accepts at most " +
                    std::to_string(options.max_links) + " links and " +
                    std::to_string(options.max_streams) +
                    " streams. Export the model with --mode export-lp and use an "
                    "external ILP solver for larger instances.");
  }
  const Problem p = Compile(instance, options);

  const int first_count = p.compiled.empty() ? 0 : static_cast<int>(p.compiled[0].size());
  const int jobs = std::max(1, std::min(options.jobs, std::max(1, first_count)));
  std::vector<SearchResult> partial(jobs);
  auto work = [&](int worker) {
    std::vector<int> mine;
    for (int i = worker; i < first_count; i += jobs) mine.push_back(i);
    if (p.compiled.empty() && worker == 0) mine.clear();
    partial[worker] = BranchAndBound(p).Run(mine);
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < jobs; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }
  SearchResult best;
  for (const SearchResult& r : partial) {
    if (!r.found) continue;
    if (!best.found || r.value > best.value ||
        (r.value == best.value && r.choice < best.choice)) {
      best = r;
    }
  }
  if (!best.found) {
    throw Error(ErrorCode::kInfeasible,
                "no combination of stream options satisfies the capacities");
  }
  return MakePlan(instance, p, best.choice, Rational(best.value, p.denominator));
}

OfflinePlan BruteForceOracle(const Instance& instance, const SolverOptions& options) {
  const Topology& topo = instance.topology;
  if (topo.Switches().size() > 8 || instance.critical.size() > 3) {
    throw Error(ErrorCode::kSizeBound,
                "oracle accepts at most 8 switches and 3 streams");
  }
  const std::vector<VertexId> ids = ResolveIds(instance, options);
  const std::int64_t k = ObservationWeight(instance);
  const size_t n = instance.critical.size();

  std::vector<StreamOptions> all;
  std::vector<std::vector<Rational>> values;
  std::vector<std::vector<std::vector<EdgeId>>> edges;
  bool complete = true;
  for (const CriticalStream& s : instance.critical) {
    StreamOptions so = EnumerateStreamOptions(instance, s, options.option_limit, ids);
    complete = complete && so.complete;
    std::vector<Rational> v;
    std::vector<std::vector<EdgeId>> used;
    for (const StreamOption& o : so.options) {
      std::vector<EdgeId> es = topo.PathEdges(o.path);
      Rational value = topo.num_edges();
      if (o.observed) {
        const std::vector<EdgeId> rs = topo.PathEdges(o.replica_path);
        es.insert(es.end(), rs.begin(), rs.end());
        value += Rational(k * s.relevance);
      }
      for (EdgeId e : es) value -= Rational(s.demand, instance.CriticalCapacity(e));
      v.push_back(value);
      used.push_back(std::move(es));
    }
    all.push_back(std::move(so));
    values.push_back(std::move(v));
    edges.push_back(std::move(used));
  }

  std::vector<int> idx(n, 0);
  std::optional<Rational> best_value;
  std::vector<int> best_choice;
  std::vector<Bps> load(topo.num_edges());
  while (true) {
    std::fill(load.begin(), load.end(), 0);
    Bps ids_load = 0;
    std::map<VertexId, int> entries;
    for (size_t i = 0; i < n; ++i) {
      const CriticalStream& s = instance.critical[i];
      for (EdgeId e : edges[i][idx[i]]) {
        load[e] += s.demand;
        ++entries[topo.edge(e).from];
      }
      if (all[i].options[idx[i]].observed) {
        ids_load += options.ids_capacity &&
                            options.ids_capacity->second == IdsCapacityMode::kCount
                        ? 1
                        : s.demand;
      }
    }
    bool feasible = true;
    for (const Edge& e : topo.edges()) {
      if (load[e.id] > instance.CriticalCapacity(e.id)) feasible = false;
    }
    if (options.ids_capacity && ids_load > options.ids_capacity->first) feasible = false;
    for (const auto& [v, limit] : options.flow_table) {
      auto it = entries.find(v);
      if (it != entries.end() && it->second > limit) feasible = false;
    }
    if (feasible) {
      Rational total = 0;
      for (size_t i = 0; i < n; ++i) total += values[i][idx[i]];
      if (!best_value || total > *best_value) {
        best_value = total;
        best_choice = idx;
      }
    }
    // Odometer in lexicographic order, last stream fastest.
    size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < static_cast<int>(all[pos].options.size())) break;
      idx[pos] = 0;
      if (pos == 0) {
        pos = n + 1;
        break;
      }
    }
    if (n == 0 || pos == n + 1) break;
  }
  if (!best_value) {
    throw Error(ErrorCode::kInfeasible,
                "no combination of stream options satisfies the capacities");
  }
  OfflinePlan plan;
  plan.status = complete ? SolveStatus::kExact : SolveStatus::kEnumerationLimited;
  plan.objective = *best_value;
  for (size_t i = 0; i < n; ++i) {
    const StreamOption& o = all[i].options[best_choice[i]];
    plan.streams.push_back(
        {instance.critical[i].id, o.path, o.observed, o.op, o.replica_path});
  }
  return plan;
}

}  // namespace icsroute
