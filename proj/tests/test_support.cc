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

#include "test_support.h"

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <unistd.h>

#include "core/offline_solver.h"

namespace icsroute::testing {

namespace {

using Rng = boost::random::mt19937_64;

int Uniform(Rng& rng, int lo, int hi) {
  return boost::random::uniform_int_distribution<int>(lo, hi)(rng);
}

struct Builder {
  Topology topo;
  std::set<std::pair<VertexId, VertexId>> linked;

  bool Link(VertexId a, VertexId b, Bps cap) {
    if (a == b || linked.count({std::min(a, b), std::max(a, b)})) return false;
    linked.insert({std::min(a, b), std::max(a, b)});
    topo.AddLink(a, b, cap);
    return true;
  }
};

// Random connected switch graph plus devices homed on one or two switches.
// Returns the endpoint devices (the IDS excluded).
std::vector<VertexId> RandomGraph(Rng& rng, Builder& b, int min_sw, int max_sw, int max_extra,
                                  int min_dev, int max_dev, bool random_caps) {
  auto cap = [&] { return random_caps ? Uniform(rng, 1, 10) * kMbps : kGbps; };
  const int switches = Uniform(rng, min_sw, max_sw);
  for (int i = 0; i < switches; ++i) b.topo.AddVertex(VertexKind::kSwitch);
  for (int i = 1; i < switches; ++i) b.Link(i, Uniform(rng, 0, i - 1), cap());
  const int extra = Uniform(rng, 0, max_extra);
  for (int i = 0; i < extra; ++i) {
    b.Link(Uniform(rng, 0, switches - 1), Uniform(rng, 0, switches - 1), cap());
  }
  auto home = [&](VertexId dev) {
    const VertexId first = Uniform(rng, 0, switches - 1);
    b.Link(dev, first, cap());
    if (switches > 1 && Uniform(rng, 0, 2) == 0) {
      VertexId second = Uniform(rng, 0, switches - 2);
      if (second >= first) ++second;
      b.Link(dev, second, cap());
    }
  };
  std::vector<VertexId> devices;
  const int n = Uniform(rng, min_dev, max_dev);
  for (int i = 0; i < n; ++i) {
    const VertexId dev = b.topo.AddVertex(VertexKind::kDevice);
    home(dev);
    devices.push_back(dev);
  }
  const VertexId ids = b.topo.AddVertex(VertexKind::kDevice, "ids");
  home(ids);
  b.topo.set_ids(ids);
  return devices;
}

void CollectPaths(const Topology& topo, VertexId at, VertexId v, std::vector<bool>& on,
                  std::vector<VertexId>& cur, std::vector<std::vector<VertexId>>& out) {
  for (EdgeId e : topo.OutEdges(at)) {
    const VertexId w = topo.edge(e).to;
    if (on[w]) continue;
    if (w == v) {
      cur.push_back(w);
      out.push_back(cur);
      cur.pop_back();
      continue;
    }
    if (!topo.IsSwitch(w)) continue;
    on[w] = true;
    cur.push_back(w);
    CollectPaths(topo, w, v, on, cur, out);
    cur.pop_back();
    on[w] = false;
  }
}

Bps Bottleneck(const Topology& topo, const std::vector<Bps>& caps,
               const std::vector<VertexId>& path) {
  Bps b = std::numeric_limits<Bps>::max();
  for (size_t i = 1; i < path.size(); ++i) {
    b = std::min(b, caps[*topo.FindEdge(path[i - 1], path[i])]);
  }
  return b;
}

}  // namespace

Instance MakeInstance(const std::vector<VertexKind>& kinds, const std::vector<Link>& links,
                      VertexId ids, const std::vector<CriticalStream>& streams) {
  Instance inst;
  for (VertexKind k : kinds) inst.topology.AddVertex(k);
  for (const Link& l : links) inst.topology.AddLink(l.a, l.b, l.capacity);
  inst.topology.set_ids(ids);
  inst.critical = streams;
  inst.standard_budget.assign(inst.topology.num_edges(), 0);
  return inst;
}

Instance LineInstance(Bps capacity, Bps demand) {
  using K = VertexKind;
  return MakeInstance({K::kDevice, K::kSwitch, K::kSwitch, K::kDevice, K::kDevice},
                      {{0, 1, capacity}, {1, 2, capacity}, {2, 3, capacity}, {2, 4, capacity}},
                      4, {{0, 0, 3, demand, 1}});
}

Instance RandomTinyInstance(std::uint64_t seed, std::int64_t max_combinations) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng(seed * 1'000'003ULL + attempt);
    Builder b;
    const std::vector<VertexId> devices = RandomGraph(rng, b, 3, 8, 2, 2, 4, true);
    Instance inst;
    inst.topology = std::move(b.topo);
    inst.standard_budget.assign(inst.topology.num_edges(), 0);
    const int streams = Uniform(rng, 1, 3);
    for (int i = 0; i < streams; ++i) {
      const int a = Uniform(rng, 0, static_cast<int>(devices.size()) - 1);
      int c = Uniform(rng, 0, static_cast<int>(devices.size()) - 2);
      if (c >= a) ++c;
      inst.critical.push_back(
          {i, devices[a], devices[c], Uniform(rng, 1, 4) * kMbps, Uniform(rng, 1, 2)});
    }
    std::int64_t product = 1;
    const std::vector<VertexId> ids{inst.topology.ids()};
    for (const CriticalStream& s : inst.critical) {
      product *= static_cast<std::int64_t>(
          EnumerateStreamOptions(inst, s, 200, ids).options.size());
      if (product > max_combinations) break;
    }
    if (product <= max_combinations) {
      inst.seed = seed;
      return inst;
    }
  }
}

Instance RandomOnlineInstance(std::uint64_t seed) {
  Rng rng(seed * 7'919ULL + 17);
  Builder b;
  RandomGraph(rng, b, 4, 7, 3, 3, 5, false);
  Instance inst;
  inst.topology = std::move(b.topo);
  for (int e = 0; e < inst.topology.num_edges(); ++e) {
    // Roughly one edge in eleven has no budget, so rejections occur.
    inst.standard_budget.push_back(Uniform(rng, 0, 10) * kMbps);
  }
  inst.seed = seed;
  return inst;
}

std::vector<std::vector<VertexId>> AllSimplePaths(const Topology& topo, VertexId u,
                                                  VertexId v) {
  std::vector<std::vector<VertexId>> out;
  if (u == v) return out;
  std::vector<bool> on(topo.num_vertices(), false);
  std::vector<VertexId> cur{u};
  on[u] = true;
  CollectPaths(topo, u, v, on, cur, out);
  return out;
}

std::optional<NaiveWide> NaiveWidestPath(const Topology& topo, const std::vector<Bps>& caps,
                                         VertexId u, VertexId v) {
  std::optional<NaiveWide> best;
  for (auto& p : AllSimplePaths(topo, u, v)) {
    const Bps b = Bottleneck(topo, caps, p);
    if (b <= 0) continue;
    const bool better = !best || b > best->bottleneck ||
                        (b == best->bottleneck &&
                         (p.size() < best->path.size() ||
                          (p.size() == best->path.size() && p < best->path)));
    if (better) best = NaiveWide{p, b};
  }
  return best;
}

std::vector<Rational> ProgressiveFillingOracle(const std::vector<Rational>& capacity,
                                               const std::vector<std::vector<EdgeId>>& streams) {
  const size_t n = streams.size();
  std::vector<std::optional<Rational>> frozen(n);
  size_t left = n;
  while (left > 0) {
    // Level at which the next edge fills, given the frozen streams.
    std::optional<Rational> level;
    for (size_t e = 0; e < capacity.size(); ++e) {
      Rational used = 0;
      int active = 0;
      for (size_t s = 0; s < n; ++s) {
        for (EdgeId x : streams[s]) {
          if (x != static_cast<EdgeId>(e)) continue;
          if (frozen[s]) {
            used += *frozen[s];
          } else {
            ++active;
          }
        }
      }
      if (active == 0) continue;
      const Rational l = (capacity[e] - used) / active;
      if (!level || l < *level) level = l;
    }
    // Freeze every active stream on an edge that is now full.
    std::vector<size_t> to_freeze;
    for (size_t e = 0; e < capacity.size(); ++e) {
      Rational used = 0;
      bool any = false;
      for (size_t s = 0; s < n; ++s) {
        for (EdgeId x : streams[s]) {
          if (x != static_cast<EdgeId>(e)) continue;
          if (frozen[s]) {
            used += *frozen[s];
          } else {
            used += *level;
            any = true;
          }
        }
      }
      if (!any || used != capacity[e]) continue;
      for (size_t s = 0; s < n; ++s) {
        if (!frozen[s] && std::count(streams[s].begin(), streams[s].end(),
                                     static_cast<EdgeId>(e)) > 0) {
          to_freeze.push_back(s);
        }
      }
    }
    for (size_t s : to_freeze) {
      if (!frozen[s]) {
        frozen[s] = *level;
        --left;
      }
    }
  }
  std::vector<Rational> out;
  for (auto& f : frozen) out.push_back(*f);
  return out;
}

bool IsMaxMinFair(const std::vector<Rational>& capacity,
                  const std::vector<std::vector<EdgeId>>& streams,
                  const std::vector<Rational>& alloc, std::string* why) {
  std::vector<Rational> used(capacity.size(), 0);
  for (size_t s = 0; s < streams.size(); ++s) {
    for (EdgeId e : streams[s]) used[e] += alloc[s];
  }
  for (size_t e = 0; e < capacity.size(); ++e) {
    if (used[e] > capacity[e]) {
      if (why) *why = "edge " + std::to_string(e) + " overfilled";
      return false;
    }
  }
  for (size_t s = 0; s < streams.size(); ++s) {
    bool ok = false;
    for (EdgeId e : streams[s]) {
      if (used[e] != capacity[e]) continue;
      bool largest = true;
      for (size_t o = 0; o < streams.size(); ++o) {
        const bool shares =
            std::find(streams[o].begin(), streams[o].end(), e) != streams[o].end();
        if (shares && alloc[o] > alloc[s]) largest = false;
      }
      if (largest) ok = true;
    }
    if (!ok) {
      if (why) *why = "stream " + std::to_string(s) + " has no bottleneck";
      return false;
    }
  }
  return true;
}

AdmitChoice AdmitOracle(const OnlineState& state, VertexId s, VertexId t) {
  const Instance& inst = state.instance();
  const Topology& topo = inst.topology;
  std::vector<int> m(topo.num_edges(), 0);
  for (const auto& [id, st] : state.streams()) {
    std::set<EdgeId> used;
    for (const auto* walk : {&st.path, &st.replica_path}) {
      for (size_t i = 1; i < walk->size(); ++i) {
        used.insert(*topo.FindEdge((*walk)[i - 1], (*walk)[i]));
      }
    }
    for (EdgeId e : used) ++m[e];
  }
  std::vector<Bps> caps(topo.num_edges());
  for (EdgeId e = 0; e < topo.num_edges(); ++e) caps[e] = inst.Budget(e) / (m[e] + 1);

  auto min_hops = [&](VertexId a, VertexId b) {
    int best = -1;
    for (const auto& p : AllSimplePaths(topo, a, b)) {
      const int h = static_cast<int>(p.size()) - 1;
      if (best < 0 || h < best) best = h;
    }
    return best;
  };
  auto widest = [&](VertexId a, VertexId b) {
    Bps best = 0;
    for (const auto& p : AllSimplePaths(topo, a, b)) {
      best = std::max(best, Bottleneck(topo, caps, p));
    }
    return best;
  };

  AdmitChoice out;
  const int dist = min_hops(s, t);
  if (dist < 0) return out;
  const int k = std::max(1, dist - 2);
  std::map<int, std::vector<VertexId>> by_layer;
  for (VertexId v : topo.Switches()) {
    const int h = min_hops(v, t);
    if (h >= 1 && h <= k) by_layer[h].push_back(v);
  }
  for (auto& [layer, vs] : by_layer) {
    std::sort(vs.begin(), vs.end());
    for (VertexId v : vs) {
      const Bps b = std::min({widest(s, v), widest(v, topo.ids()), widest(v, t)});
      if (b > out.quality) {
        out.quality = b;
        out.op = v;
        out.layer = layer;
      }
    }
    if (out.quality > 0) {
      out.admitted = true;
      return out;
    }
  }
  return out;
}

bool PlanFitsCapacity(const Instance& instance, const OfflinePlan& plan) {
  const Topology& topo = instance.topology;
  std::vector<Bps> load(topo.num_edges(), 0);
  for (const PlanEntry& p : plan.streams) {
    const Bps demand = instance.stream(p.stream_id).demand;
    for (EdgeId e : topo.PathEdges(p.path)) load[e] += demand;
    if (p.observed) {
      for (EdgeId e : topo.PathEdges(p.replica_path)) load[e] += demand;
    }
  }
  for (EdgeId e = 0; e < topo.num_edges(); ++e) {
    if (load[e] > instance.CriticalCapacity(e)) return false;
  }
  return true;
}

std::vector<Mutant> PlanMutants(const Instance& instance, const OfflinePlan& plan) {
  const Topology& topo = instance.topology;
  std::vector<Mutant> out;
  auto add = [&](std::string name, auto&& edit) {
    Mutant m{std::move(name), instance, plan};
    edit(m);
    out.push_back(std::move(m));
  };
  if (plan.streams.empty()) return out;
  add("drop stream", [](Mutant& m) { m.plan.streams.pop_back(); });
  add("duplicate stream", [](Mutant& m) { m.plan.streams.push_back(m.plan.streams[0]); });
  add("unknown id", [](Mutant& m) { m.plan.streams[0].stream_id = 1'000'000; });

  for (size_t i = 0; i < plan.streams.size(); ++i) {
    const PlanEntry& p = plan.streams[i];
    const std::string tag = " #" + std::to_string(i);
    add("truncate path" + tag, [i](Mutant& m) {
      PlanEntry& e = m.plan.streams[i];
      e.path.pop_back();
      if (e.observed) e.op = e.path.back();
    });
    add("reverse path" + tag, [i](Mutant& m) {
      PlanEntry& e = m.plan.streams[i];
      std::reverse(e.path.begin(), e.path.end());
    });
    // Bounce through t and come back: a device becomes transit.
    add("device transit" + tag, [i](Mutant& m) {
      PlanEntry& e = m.plan.streams[i];
      const VertexId t = e.path.back();
      const VertexId hop = e.path[e.path.size() - 2];
      e.path.push_back(hop);
      e.path.push_back(t);
    });
    // Drop an interior vertex only when no shortcut edge exists.
    for (size_t k = 1; k + 1 < p.path.size(); ++k) {
      if (topo.FindEdge(p.path[k - 1], p.path[k + 1])) continue;
      if (p.observed && p.path[k] == *p.op) continue;
      add("skip vertex" + tag, [i, k](Mutant& m) {
        PlanEntry& e = m.plan.streams[i];
        e.path.erase(e.path.begin() + static_cast<std::ptrdiff_t>(k));
      });
      break;
    }
    if (p.observed) {
      add("unobserved with replica" + tag,
          [i](Mutant& m) { m.plan.streams[i].observed = false; });
      add("truncate replica" + tag,
          [i](Mutant& m) { m.plan.streams[i].replica_path.pop_back(); });
      add("replica to source" + tag, [i](Mutant& m) {
        PlanEntry& e = m.plan.streams[i];
        e.replica_path.back() = e.path.front();
      });
      if (p.path.size() > 3) {
        add("op not last hop" + tag, [i](Mutant& m) {
          PlanEntry& e = m.plan.streams[i];
          e.op = e.path[1];
          e.replica_path.front() = e.path[1];
        });
      }
      add("op missing" + tag, [i](Mutant& m) { m.plan.streams[i].op.reset(); });
    } else {
      add("stray replica" + tag, [i](Mutant& m) {
        PlanEntry& e = m.plan.streams[i];
        e.replica_path = {e.path[e.path.size() - 2], e.path.back()};
      });
    }
    // Shrink the first path edge below the demand.
    add("capacity" + tag, [i](Mutant& m) {
      PlanEntry& e = m.plan.streams[i];
      const EdgeId edge = *m.instance.topology.FindEdge(e.path[0], e.path[1]);
      const Bps demand = m.instance.stream(e.stream_id).demand;
      m.instance.standard_budget[edge] = m.instance.topology.edge(edge).capacity - demand + 1;
    });
  }
  return out;
}

std::string TempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() /
          ("icsroute_" + std::to_string(::getpid()) + "_" + name))
      .string();
}

}  // namespace icsroute::testing
