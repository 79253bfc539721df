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

#include "core/simulator.h"

#include <algorithm>
#include <charconv>
#include <map>

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include "core/io.h"
#include "core/verify.h"

namespace icsroute {

namespace {

void AppendDouble(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

std::vector<std::string_view> SplitLine(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

// Non-empty, non-header lines with trailing CR removed.
std::vector<std::string_view> DataLines(std::string_view csv, std::string_view header) {
  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start < csv.size()) {
    size_t nl = csv.find('\n', start);
    if (nl == std::string_view::npos) nl = csv.size();
    std::string_view line = csv.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty() && line != header) lines.push_back(line);
    start = nl + 1;
  }
  return lines;
}

template <typename T>
T ParseNumber(std::string_view field, int line) {
  T value{};
  auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ": bad number '" +
                                       std::string(field) + "'");
  }
  return value;
}

constexpr std::string_view kTraceHeader = "time,kind,c,u,s,t";
constexpr std::string_view kStatsHeader = "stream_id,begin,end,min_bw,final_bw,rejected";

}  // namespace

std::vector<Event> GenerateEvents(const Instance& instance, const WorkloadConfig& config) {
  if (!(config.mean_interarrival > 0) || !(config.mean_duration > 0) ||
      !(config.horizon >= 0) || config.operators < 0) {
    throw Error(ErrorCode::kInvalidArgument, "workload parameters must be positive");
  }
  const Topology& topo = instance.topology;
  const std::vector<VertexId> switches = topo.Switches();
  std::vector<VertexId> targets;
  for (VertexId v : topo.Devices()) {
    if (v != topo.ids()) targets.push_back(v);
  }
  if (switches.empty() || targets.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "instance needs a switch and a device");
  }
  const int operators =
      config.operators > 0 ? config.operators : std::max(1, instance.substations);

  boost::random::mt19937_64 rng(config.seed);
  boost::random::exponential_distribution<double> arrival(1.0 / config.mean_interarrival);
  boost::random::exponential_distribution<double> duration(1.0 / config.mean_duration);
  boost::random::uniform_int_distribution<size_t> pick_switch(0, switches.size() - 1);
  boost::random::uniform_int_distribution<size_t> pick_target(0, targets.size() - 1);

  struct Connection {
    double begin;
    double end;
    int op;
    VertexId attach;
    VertexId target;
  };
  std::vector<Connection> conns;
  for (int u = 0; u < operators; ++u) {
    const VertexId attach = switches[pick_switch(rng)];
    double t = arrival(rng);
    while (t < config.horizon) {
      const double dur = duration(rng);
      conns.push_back({t, t + dur, u, attach, targets[pick_target(rng)]});
      t += arrival(rng);
    }
  }
  std::stable_sort(conns.begin(), conns.end(), [](const Connection& a, const Connection& b) {
    return a.begin != b.begin ? a.begin < b.begin : a.op < b.op;
  });
  std::vector<Event> events;
  for (size_t c = 0; c < conns.size(); ++c) {
    const Connection& x = conns[c];
    const int id = static_cast<int>(c);
    events.push_back({EventKind::kBegin, x.begin, id, x.op, x.attach, x.target});
    events.push_back({EventKind::kEnd, x.end, id, x.op, x.attach, kNoVertex});
  }
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.time != b.time) return a.time < b.time;
    if (a.kind != b.kind) return a.kind == EventKind::kEnd;
    return a.connection < b.connection;
  });
  return events;
}

std::string TraceToCsv(const std::vector<Event>& events) {
  std::string out(kTraceHeader);
  out += '\n';
  for (const Event& e : events) {
    AppendDouble(out, e.time);
    out += e.kind == EventKind::kBegin ? ",begin," : ",end,";
    out += std::to_string(e.connection) + ',' + std::to_string(e.op) + ',' +
           std::to_string(e.attach) + ',';
    if (e.kind == EventKind::kBegin) out += std::to_string(e.target);
    out += '\n';
  }
  return out;
}

std::vector<Event> TraceFromCsv(std::string_view csv) {
  std::vector<Event> events;
  int n = 1;
  for (std::string_view line : DataLines(csv, kTraceHeader)) {
    ++n;
    const auto f = SplitLine(line);
    if (f.size() != 6) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(n) + ": expected 6 fields");
    }
    Event e;
    e.time = ParseNumber<double>(f[0], n);
    if (f[1] == "begin") {
      e.kind = EventKind::kBegin;
    } else if (f[1] == "end") {
      e.kind = EventKind::kEnd;
    } else {
      throw Error(ErrorCode::kParse, "line " + std::to_string(n) + ": bad kind");
    }
    e.connection = ParseNumber<int>(f[2], n);
    e.op = ParseNumber<int>(f[3], n);
    e.attach = ParseNumber<VertexId>(f[4], n);
    if (e.kind == EventKind::kBegin) e.target = ParseNumber<VertexId>(f[5], n);
    events.push_back(e);
  }
  return events;
}

RunStats Run(const Instance& instance, const std::optional<OfflinePlan>& plan,
             const std::vector<Event>& events, const RunOptions& options) {
  OnlineState state(instance, plan, options.tau);
  RunStats stats;
  for (const Edge& e : instance.topology.edges()) {
    stats.max_link_capacity = std::max(stats.max_link_capacity, e.capacity);
  }

  // One device per operator, created up front so edge ids do not depend on
  // event order.
  std::map<int, VertexId> attach_of;
  for (const Event& e : events) {
    auto [it, fresh] = attach_of.emplace(e.op, e.attach);
    if (!fresh && it->second != e.attach) {
      throw Error(ErrorCode::kParse,
                  "operator " + std::to_string(e.op) + " appears at two switches");
    }
  }
  std::map<int, VertexId> device_of;
  for (const auto& [op, attach] : attach_of) {
    if (!instance.topology.Contains(attach) || !instance.topology.IsSwitch(attach)) {
      throw Error(ErrorCode::kParse, "operator " + std::to_string(op) +
                                         " attached to non-switch " + std::to_string(attach));
    }
    device_of[op] = state.AddDevice(attach, options.operator_link, "operator" + std::to_string(op));
  }

  struct Live {
    size_t row;
    std::optional<StreamId> stream;
    Rational min;
  };
  std::map<int, Live> live;
  std::map<int, size_t> row_of;
  double last_time = -1;
  auto refresh = [&] {
    for (auto& [c, l] : live) {
      if (!l.stream) continue;
      const Rational& now = state.streams().at(*l.stream).assigned;
      if (now < l.min) l.min = now;
      ++stats.samples;
    }
  };

  for (const Event& e : events) {
    if (e.time < last_time) throw Error(ErrorCode::kParse, "trace is not sorted by time");
    last_time = e.time;
    ++stats.events;
    if (e.kind == EventKind::kBegin) {
      if (row_of.count(e.connection)) {
        throw Error(ErrorCode::kParse,
                    "connection " + std::to_string(e.connection) + " begins twice");
      }
      row_of[e.connection] = stats.streams.size();
      StreamStats row;
      row.connection = e.connection;
      row.begin = e.time;
      AdmitResult r = state.Admit(device_of.at(e.op), e.target, e.time);
      Live l{stats.streams.size(), std::nullopt, 0};
      if (r.admitted) {
        ++stats.admitted;
        l.stream = r.stream.id;
        l.min = r.stream.assigned;
      } else {
        ++stats.rejected;
        row.rejected = true;
      }
      stats.streams.push_back(row);
      live.emplace(e.connection, std::move(l));
    } else {
      auto it = live.find(e.connection);
      if (it == live.end()) {
        throw Error(ErrorCode::kParse,
                    "end without begin for connection " + std::to_string(e.connection));
      }
      StreamStats& row = stats.streams[it->second.row];
      row.end = e.time;
      if (it->second.stream) {
        row.final_bw = FloorToBps(state.streams().at(*it->second.stream).assigned);
        row.min_bw = FloorToBps(it->second.min);
        state.Remove(*it->second.stream, e.time);
      }
      live.erase(it);
    }
    refresh();
    stats.max_concurrent =
        std::max(stats.max_concurrent, static_cast<int>(state.streams().size()));
    for (const Violation& v : CheckOnlineState(state)) {
      if (v.code == "budget") {
        ++stats.budget_violations;
      } else if (v.code == "critical reservation") {
        ++stats.critical_touches;
      } else {
        ++stats.other_violations;
      }
    }
  }
  // Connections still open when the trace ends.
  for (auto& [c, l] : live) {
    StreamStats& row = stats.streams[l.row];
    row.end = last_time;
    if (l.stream) {
      row.final_bw = FloorToBps(state.streams().at(*l.stream).assigned);
      row.min_bw = FloorToBps(l.min);
    }
  }
  std::sort(stats.streams.begin(), stats.streams.end(),
            [](const StreamStats& a, const StreamStats& b) { return a.connection < b.connection; });
  stats.widest_path_calls = state.widest_path_calls();
  return stats;
}

nlohmann::json RunSummaryJson(const RunStats& stats) {
  return {{"events", stats.events},
          {"streams", stats.streams.size()},
          {"admitted", stats.admitted},
          {"rejected", stats.rejected},
          {"max_concurrent", stats.max_concurrent},
          {"samples", stats.samples},
          {"budget_violations", stats.budget_violations},
          {"critical_touches", stats.critical_touches},
          {"other_violations", stats.other_violations},
          {"widest_path_calls", stats.widest_path_calls}};
}

std::string StatsToCsv(const std::vector<StreamStats>& stats) {
  std::string out(kStatsHeader);
  out += '\n';
  for (const StreamStats& s : stats) {
    out += std::to_string(s.connection) + ',';
    AppendDouble(out, s.begin);
    out += ',';
    AppendDouble(out, s.end);
    out += ',' + std::to_string(s.min_bw) + ',' + std::to_string(s.final_bw) + ',' +
           (s.rejected ? "1" : "0") + '\n';
  }
  return out;
}

std::vector<StreamStats> StatsFromCsv(std::string_view csv) {
  std::vector<StreamStats> stats;
  int n = 1;
  for (std::string_view line : DataLines(csv, kStatsHeader)) {
    ++n;
    const auto f = SplitLine(line);
    if (f.size() != 6) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(n) + ": expected 6 fields");
    }
    StreamStats s;
    s.connection = ParseNumber<int>(f[0], n);
    s.begin = ParseNumber<double>(f[1], n);
    s.end = ParseNumber<double>(f[2], n);
    s.min_bw = ParseNumber<Bps>(f[3], n);
    s.final_bw = ParseNumber<Bps>(f[4], n);
    s.rejected = ParseNumber<int>(f[5], n) != 0;
    stats.push_back(s);
  }
  return stats;
}

std::vector<DensityBucket> DensityReport(const std::vector<StreamStats>& stats) {
  // Bucket index: 0 for [0,1), k+1 for [2^k, 2^(k+1)).
  auto index = [](Bps bw) {
    int k = 0;
    while (bw > 0) {
      bw >>= 1;
      ++k;
    }
    return k;
  };
  std::map<int, std::int64_t> counts;
  std::int64_t total = 0;
  for (const StreamStats& s : stats) {
    if (s.rejected) continue;
    ++counts[index(s.min_bw)];
    ++total;
  }
  if (total == 0) throw Error(ErrorCode::kInvalidArgument, "no admitted streams to report");
  std::vector<DensityBucket> out;
  for (int i = counts.begin()->first; i <= counts.rbegin()->first; ++i) {
    DensityBucket b;
    b.low = i == 0 ? 0 : Bps{1} << (i - 1);
    b.high = Bps{1} << i;
    auto it = counts.find(i);
    b.count = it == counts.end() ? 0 : it->second;
    b.fraction = static_cast<double>(b.count) / static_cast<double>(total);
    out.push_back(b);
  }
  return out;
}

std::string DensityToCsv(const std::vector<DensityBucket>& buckets) {
  std::string out = "bucket_low_bps,bucket_high_bps,fraction\n";
  for (const DensityBucket& b : buckets) {
    out += std::to_string(b.low) + ',' + std::to_string(b.high) + ',';
    AppendDouble(out, b.fraction);
    out += '\n';
  }
  return out;
}

}  // namespace icsroute
