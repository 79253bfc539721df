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

#include <map>

#include <gtest/gtest.h>

#include "test_support.h"

namespace icsroute {
namespace {

using testing::kMbps;

Instance SimInstance(std::uint64_t seed) {
  Instance inst = testing::RandomOnlineInstance(seed);
  inst.reserve_fraction = 0.05;
  return inst;
}

WorkloadConfig Workload(std::uint64_t seed) {
  WorkloadConfig c;
  c.operators = 4;
  c.mean_interarrival = 60;
  c.mean_duration = 120;
  c.horizon = 600;
  c.seed = seed;
  return c;
}

TEST(GenerateEventsTest, WellFormed) {
  const Instance inst = SimInstance(3);
  const std::vector<Event> ev = GenerateEvents(inst, Workload(11));
  ASSERT_FALSE(ev.empty());
  std::map<int, int> begins, ends;
  std::map<int, VertexId> attach;
  int last_begin = -1;
  for (size_t i = 0; i < ev.size(); ++i) {
    const Event& e = ev[i];
    if (i > 0) {
      EXPECT_LE(ev[i - 1].time, e.time);
    }
    EXPECT_TRUE(inst.topology.IsSwitch(e.attach));
    auto [it, fresh] = attach.emplace(e.op, e.attach);
    EXPECT_EQ(it->second, e.attach);
    if (e.kind == EventKind::kBegin) {
      ++begins[e.connection];
      EXPECT_LT(e.time, 600);
      EXPECT_EQ(e.connection, last_begin + 1);
      last_begin = e.connection;
      EXPECT_TRUE(inst.topology.IsDevice(e.target));
      EXPECT_NE(e.target, inst.topology.ids());
    } else {
      EXPECT_EQ(begins[e.connection], 1) << "end before begin";
      ++ends[e.connection];
    }
  }
  EXPECT_EQ(begins.size(), ends.size());
  EXPECT_LE(attach.size(), 4u);
}

TEST(GenerateEventsTest, DeterministicPerSeed) {
  const Instance inst = SimInstance(3);
  EXPECT_EQ(GenerateEvents(inst, Workload(5)), GenerateEvents(inst, Workload(5)));
  EXPECT_NE(GenerateEvents(inst, Workload(5)), GenerateEvents(inst, Workload(6)));
}

TEST(GenerateEventsTest, Errors) {
  const Instance inst = SimInstance(3);
  WorkloadConfig c = Workload(1);
  c.mean_duration = 0;
  EXPECT_THROW(GenerateEvents(inst, c), Error);
  EXPECT_TRUE(GenerateEvents(inst, [] {
                WorkloadConfig z;
                z.horizon = 0;
                return z;
              }()).empty());
}

TEST(TraceCsvTest, RoundTrip) {
  const std::vector<Event> ev = GenerateEvents(SimInstance(4), Workload(2));
  const std::string csv = TraceToCsv(ev);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "time,kind,c,u,s,t");
  EXPECT_EQ(TraceFromCsv(csv), ev);
  EXPECT_THROW(TraceFromCsv("time,kind,c,u,s,t\n1,middle,0,0,1,2\n"), Error);
  EXPECT_THROW(TraceFromCsv("bogus\n"), Error);
}

TEST(RunTest, NoViolationsAndConsistentCounts) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Instance inst = SimInstance(seed);
    const std::vector<Event> ev = GenerateEvents(inst, Workload(seed));
    const RunStats stats = icsroute::Run(inst, std::nullopt, ev);
    EXPECT_EQ(stats.budget_violations, 0);
    EXPECT_EQ(stats.critical_touches, 0);
    EXPECT_EQ(stats.other_violations, 0);
    EXPECT_EQ(stats.events, static_cast<int>(ev.size()));
    EXPECT_EQ(stats.admitted + stats.rejected, static_cast<int>(stats.streams.size()));
    EXPECT_EQ(static_cast<size_t>(stats.events), 2 * stats.streams.size());
    for (const StreamStats& s : stats.streams) {
      EXPECT_LE(s.min_bw, s.final_bw);
      EXPECT_LE(s.begin, s.end);
      if (s.rejected) EXPECT_EQ(s.final_bw, 0);
    }
    EXPECT_EQ(stats.max_link_capacity, kGbps);
  }
}

TEST(RunTest, HandWrittenTrace) {
  Instance inst = testing::LineInstance(100 * kMbps);
  inst.critical.clear();
  inst.reserve_fraction = 0.1;
  inst.standard_budget.assign(inst.topology.num_edges(), 10 * kMbps);
  // Operator on a (1) opens two connections to t (3).
  const std::vector<Event> ev = {
      {EventKind::kBegin, 0, 0, 0, 1, 3},
      {EventKind::kBegin, 1, 1, 0, 1, 3},
      {EventKind::kEnd, 2, 0, 0, 1, kNoVertex},
      {EventKind::kEnd, 3, 1, 0, 1, kNoVertex},
  };
  const RunStats stats = icsroute::Run(inst, std::nullopt, ev);
  ASSERT_EQ(stats.streams.size(), 2u);
  EXPECT_EQ(stats.admitted, 2);
  EXPECT_EQ(stats.max_concurrent, 2);
  EXPECT_EQ(stats.streams[0].min_bw, 5 * kMbps);
  EXPECT_EQ(stats.streams[0].final_bw, 5 * kMbps);
  EXPECT_EQ(stats.streams[1].min_bw, 5 * kMbps);
  EXPECT_EQ(stats.streams[1].final_bw, 10 * kMbps);
  EXPECT_EQ(stats.other_violations, 0);
}

TEST(RunTest, MalformedTraces) {
  const Instance inst = SimInstance(1);
  const VertexId sw = inst.topology.Switches()[0];
  const VertexId dev = inst.topology.Devices()[0];
  EXPECT_THROW(icsroute::Run(inst, std::nullopt, {{EventKind::kEnd, 0, 0, 0, sw, kNoVertex}}), Error);
  EXPECT_THROW(icsroute::Run(inst, std::nullopt,
                   {{EventKind::kBegin, 2, 0, 0, sw, dev}, {EventKind::kBegin, 1, 1, 0, sw, dev}}),
               Error);
  EXPECT_THROW(icsroute::Run(inst, std::nullopt,
                   {{EventKind::kBegin, 1, 0, 0, sw, dev}, {EventKind::kBegin, 1, 0, 0, sw, dev}}),
               Error);
}

TEST(StatsCsvTest, RoundTrip) {
  const std::vector<StreamStats> rows = {{0, 0.5, 10.25, 5, 7, false}, {1, 1, 2, 0, 0, true}};
  const std::string csv = StatsToCsv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "stream_id,begin,end,min_bw,final_bw,rejected");
  EXPECT_EQ(StatsFromCsv(csv), rows);
}

TEST(DensityReportTest, PowerOfTwoBuckets) {
  const std::vector<StreamStats> rows = {{0, 0, 1, 0, 0, false}, {1, 0, 1, 1, 1, false},
                                         {2, 0, 1, 3, 3, false}, {3, 0, 1, 12, 12, false},
                                         {4, 0, 1, 99, 0, true}};
  const auto b = DensityReport(rows);
  ASSERT_EQ(b.size(), 5u);
  EXPECT_EQ(b[0].low, 0);
  EXPECT_EQ(b[0].high, 1);
  EXPECT_EQ(b[1].low, 1);
  EXPECT_EQ(b[2].low, 2);
  EXPECT_EQ(b[3].low, 4);
  EXPECT_EQ(b[3].count, 0);
  EXPECT_EQ(b[4].low, 8);
  EXPECT_EQ(b[4].high, 16);
  double sum = 0;
  for (const auto& x : b) sum += x.fraction;
  EXPECT_DOUBLE_EQ(sum, 1.0);
  EXPECT_DOUBLE_EQ(b[4].fraction, 0.25);
  EXPECT_THROW(DensityReport({{0, 0, 1, 0, 0, true}}), Error);
  const std::string csv = DensityToCsv(b);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "bucket_low_bps,bucket_high_bps,fraction");
}

}  // namespace
}  // namespace icsroute
