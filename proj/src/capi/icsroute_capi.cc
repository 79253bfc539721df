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

#include "icsroute.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>

#include "core/formulation.h"
#include "core/io.h"
#include "core/offline_solver.h"
#include "core/online_solver.h"
#include "core/simulator.h"
#include "core/topogen.h"
#include "core/verify.h"

using nlohmann::json;

struct icsr_instance {
  icsroute::Instance inst;
};
struct icsr_plan {
  icsroute::OfflinePlan plan;
};
struct icsr_online {
  std::unique_ptr<icsroute::OnlineState> state;
};

namespace {

thread_local std::string g_last_error;

icsr_status Fail(icsr_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

icsr_status FromCode(icsroute::ErrorCode code) {
  switch (code) {
    case icsroute::ErrorCode::kInvalidArgument: return ICSR_INVALID_ARGUMENT;
    case icsroute::ErrorCode::kNotFound: return ICSR_NOT_FOUND;
    case icsroute::ErrorCode::kParse: return ICSR_PARSE_ERROR;
    case icsroute::ErrorCode::kIo: return ICSR_IO_ERROR;
    case icsroute::ErrorCode::kInfeasible: return ICSR_INFEASIBLE;
    case icsroute::ErrorCode::kSizeBound: return ICSR_SIZE_BOUND;
    case icsroute::ErrorCode::kState: return ICSR_STATE_ERROR;
  }
  return ICSR_INTERNAL;
}

// Runs `fn`, mapping exceptions to status codes.
template <typename Fn>
icsr_status Guard(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return ICSR_OK;
  } catch (const icsroute::Error& e) {
    return Fail(FromCode(e.code()), e.what());
  } catch (const json::exception& e) {
    return Fail(ICSR_PARSE_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(ICSR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(ICSR_INTERNAL, e.what());
  }
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void Emit(char** out, const json& j) {
  if (out != nullptr) *out = Dup(j.dump());
}

void Require(const void* p, const char* what) {
  if (p == nullptr) {
    throw icsroute::Error(icsroute::ErrorCode::kInvalidArgument,
                          std::string(what) + " must not be NULL");
  }
}

json Options(const char* text) {
  if (text == nullptr || *text == '\0') return json::object();
  json j = json::parse(text);
  if (!j.is_object()) {
    throw icsroute::Error(icsroute::ErrorCode::kParse, "options must be a JSON object");
  }
  return j;
}

icsroute::SolverOptions SolverOptionsFrom(const json& o) {
  icsroute::SolverOptions s;
  s.option_limit = o.value("option_limit", s.option_limit);
  s.max_links = o.value("max_links", s.max_links);
  s.max_streams = o.value("max_streams", s.max_streams);
  s.jobs = o.value("jobs", s.jobs);
  if (o.contains("multi_ids")) s.ids_set = o["multi_ids"].get<std::vector<icsroute::VertexId>>();
  if (o.contains("ids_capacity")) {
    s.ids_capacity = {o["ids_capacity"].get<icsroute::Bps>(),
                      o.value("ids_capacity_count", false)
                          ? icsroute::IdsCapacityMode::kCount
                          : icsroute::IdsCapacityMode::kBandwidth};
  }
  if (o.contains("flow_table")) {
    for (const auto& [k, v] : o["flow_table"].items()) {
      s.flow_table[std::stoi(k)] = v.get<int>();
    }
  }
  return s;
}

json InstanceSummary(const icsroute::Instance& inst) {
  const icsroute::Topology& t = inst.topology;
  return {{"vertices", t.num_vertices()},
          {"switches", t.Switches().size()},
          {"devices", t.Devices().size()},
          {"physical_links", t.num_links()},
          {"directed_edges", t.num_edges()},
          {"critical_streams", inst.critical.size()},
          {"substations", inst.substations},
          {"routers", inst.backbone_routers},
          {"backbone_links", inst.backbone_links},
          {"alpha", inst.alpha},
          {"reserve_fraction", inst.reserve_fraction},
          {"ids", t.ids()}};
}

void RequireValid(const icsroute::Instance& inst) {
  const auto issues = icsroute::ValidateInstance(inst);
  if (issues.empty()) return;
  std::string msg = "invalid instance:";
  for (size_t i = 0; i < issues.size() && i < 5; ++i) {
    msg += " [" + issues[i].code + ": " + issues[i].detail + "]";
  }
  throw icsroute::Error(icsroute::ErrorCode::kParse, msg);
}

json AssignmentToJson(const std::map<icsroute::StreamId, icsroute::Rational>& a) {
  json out = json::array();
  for (const auto& [id, r] : a) {
    out.push_back({{"id", id},
                   {"bps", icsroute::FloorToBps(r)},
                   {"exact", icsroute::RationalToString(r)}});
  }
  return out;
}

}  // namespace

extern "C" {

const char* icsr_version(void) { return "1.0.0"; }

const char* icsr_last_error(void) { return g_last_error.c_str(); }

const char* icsr_status_name(icsr_status status) {
  switch (status) {
    case ICSR_OK: return "ok";
    case ICSR_INVALID_ARGUMENT: return "invalid argument";
    case ICSR_NOT_FOUND: return "not found";
    case ICSR_PARSE_ERROR: return "parse error";
    case ICSR_IO_ERROR: return "i/o error";
    case ICSR_INFEASIBLE: return "infeasible";
    case ICSR_SIZE_BOUND: return "size bound exceeded";
    case ICSR_STATE_ERROR: return "state error";
    case ICSR_INTERNAL: return "internal error";
  }
  return "unknown";
}

void icsr_string_free(char* s) { std::free(s); }

icsr_status icsr_instance_generate(const char* backbone_path, const char* options_json,
                                   icsr_instance** out, char** report_json) {
  return Guard([&] {
    Require(backbone_path, "backbone_path");
    Require(out, "out");
    const json o = Options(options_json);
    const icsroute::Topology backbone = icsroute::LoadTopology(backbone_path);
    json report = json::object();
    double alpha = o.value("alpha", 0.7);
    if (o.contains("q_target")) {
      const int target = o["q_target"].get<int>();
      const icsroute::AlphaSearch found = icsroute::SearchAlpha(backbone, target);
      report["q_target"] = target;
      report["alpha_found"] = found.alpha.has_value();
      alpha = found.alpha.value_or(found.nearest_alpha);
    }
    const double fraction = o.value("reserve_fraction", 0.05);
    auto inst = std::make_unique<icsr_instance>();
    inst->inst = icsroute::ReserveStandardFraction(
        icsroute::AttachSubstations(backbone, icsroute::DefaultSubstationTemplate(), alpha,
                                    o.value("seed", std::uint64_t{1})),
        fraction);
    report.update(InstanceSummary(inst->inst));
    Emit(report_json, report);
    *out = inst.release();
  });
}

icsr_status icsr_instance_load(const char* path, icsr_instance** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    auto inst = std::make_unique<icsr_instance>();
    inst->inst = icsroute::LoadInstance(path);
    RequireValid(inst->inst);
    *out = inst.release();
  });
}

icsr_status icsr_instance_save(const icsr_instance* inst, const char* path) {
  return Guard([&] {
    Require(inst, "inst");
    Require(path, "path");
    icsroute::SaveInstance(inst->inst, path);
  });
}

icsr_status icsr_instance_summary(const icsr_instance* inst, char** summary_json) {
  return Guard([&] {
    Require(inst, "inst");
    Emit(summary_json, InstanceSummary(inst->inst));
  });
}

void icsr_instance_free(icsr_instance* inst) { delete inst; }

icsr_status icsr_plan_solve(const icsr_instance* inst, const char* options_json,
                            icsr_plan** out) {
  return Guard([&] {
    Require(inst, "inst");
    Require(out, "out");
    const icsroute::SolverOptions opts = SolverOptionsFrom(Options(options_json));
    auto plan = std::make_unique<icsr_plan>();
    plan->plan = icsroute::SolveExact(inst->inst, opts);
    *out = plan.release();
  });
}

icsr_status icsr_plan_export_lp(const icsr_instance* inst, const char* options_json,
                                const char* lp_path, char** summary_json) {
  return Guard([&] {
    Require(inst, "inst");
    Require(lp_path, "lp_path");
    const icsroute::SolverOptions opts = SolverOptionsFrom(Options(options_json));
    icsroute::IlpModel model = opts.ids_set.empty()
                                   ? icsroute::BuildBase(inst->inst)
                                   : icsroute::BuildMultiIds(inst->inst, opts.ids_set);
    if (opts.ids_capacity) {
      model = icsroute::AddIdsCapacity(std::move(model), opts.ids_capacity->first,
                                       opts.ids_capacity->second);
    }
    if (!opts.flow_table.empty()) {
      model = icsroute::AddFlowTableLimits(std::move(model), opts.flow_table);
    }
    std::ofstream file(lp_path, std::ios::binary | std::ios::trunc);
    if (!file) {
      throw icsroute::Error(icsroute::ErrorCode::kIo,
                            std::string("cannot open ") + lp_path);
    }
    icsroute::ExportLp(model, file);
    file.close();
    if (!file) {
      throw icsroute::Error(icsroute::ErrorCode::kIo,
                            std::string("cannot write ") + lp_path);
    }
    Emit(summary_json, icsroute::SummaryToJson(model.Summary()));
  });
}

icsr_status icsr_plan_load(const char* path, icsr_plan** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    auto plan = std::make_unique<icsr_plan>();
    plan->plan = icsroute::LoadPlan(path);
    *out = plan.release();
  });
}

icsr_status icsr_plan_save(const icsr_plan* plan, const char* path) {
  return Guard([&] {
    Require(plan, "plan");
    Require(path, "path");
    icsroute::SavePlan(plan->plan, path);
  });
}

icsr_status icsr_plan_to_json(const icsr_plan* plan, char** json_out) {
  return Guard([&] {
    Require(plan, "plan");
    Emit(json_out, icsroute::PlanToJson(plan->plan));
  });
}

icsr_status icsr_plan_objective(const icsr_instance* inst, const icsr_plan* plan,
                                char** objective) {
  return Guard([&] {
    Require(inst, "inst");
    Require(plan, "plan");
    Require(objective, "objective");
    *objective = Dup(icsroute::RationalToString(icsroute::ObjectiveValue(inst->inst, plan->plan)));
  });
}

void icsr_plan_free(icsr_plan* plan) { delete plan; }

icsr_status icsr_verify_plan(const icsr_instance* inst, const icsr_plan* plan,
                             const char* options_json, int64_t* violations,
                             char** report_json) {
  return Guard([&] {
    Require(inst, "inst");
    Require(plan, "plan");
    const icsroute::SolverOptions s = SolverOptionsFrom(Options(options_json));
    icsroute::CheckOptions c;
    c.ids_set = s.ids_set;
    c.ids_capacity = s.ids_capacity;
    c.flow_table = s.flow_table;
    const auto found = icsroute::CheckPlan(inst->inst, plan->plan, c);
    if (violations != nullptr) *violations = static_cast<int64_t>(found.size());
    Emit(report_json, icsroute::ViolationsToJson(found));
  });
}

icsr_status icsr_online_create(const icsr_instance* inst, const icsr_plan* plan,
                               const char* options_json, icsr_online** out) {
  return Guard([&] {
    Require(inst, "inst");
    Require(out, "out");
    const json o = Options(options_json);
    std::optional<icsroute::OfflinePlan> p;
    if (plan != nullptr) p = plan->plan;
    auto state = std::make_unique<icsr_online>();
    state->state = std::make_unique<icsroute::OnlineState>(
        inst->inst, std::move(p), o.value("tau", icsroute::OnlineState::kDefaultTau));
    *out = state.release();
  });
}

icsr_status icsr_online_add_device(icsr_online* state, int32_t attach_switch,
                                   int64_t capacity_bps, int32_t* device) {
  return Guard([&] {
    Require(state, "state");
    const icsroute::VertexId v = state->state->AddDevice(attach_switch, capacity_bps, "");
    if (device != nullptr) *device = v;
  });
}

icsr_status icsr_online_admit(icsr_online* state, int32_t src, int32_t dst, double now,
                              char** result_json) {
  return Guard([&] {
    Require(state, "state");
    const icsroute::AdmitResult r = state->state->Admit(src, dst, now);
    json j = {{"admitted", r.admitted}};
    if (r.admitted) {
      j["stream"] = {{"id", r.stream.id},
                     {"path", r.stream.path},
                     {"op", r.stream.op},
                     {"replica_path", r.stream.replica_path},
                     {"admitted_at", r.stream.admitted_at}};
      j["quality_bps"] = r.quality;
      j["layer"] = r.layer;
      j["assignment"] = AssignmentToJson(r.assignment);
    } else {
      j["reason"] = r.reason;
    }
    Emit(result_json, j);
  });
}

icsr_status icsr_online_remove(icsr_online* state, int32_t stream_id, double now,
                               char** result_json) {
  return Guard([&] {
    Require(state, "state");
    const auto a = state->state->Remove(stream_id, now);
    Emit(result_json, {{"removed", stream_id}, {"assignment", AssignmentToJson(a)}});
  });
}

icsr_status icsr_online_observe(const icsr_online* state, int32_t critical_stream_id,
                                char** result_json) {
  return Guard([&] {
    Require(state, "state");
    const icsroute::ObserveResult r = state->state->ObserveOnRequest(critical_stream_id);
    json j = {{"found", r.found}, {"bottleneck_bps", r.bottleneck}};
    if (r.found) {
      j["op"] = r.op;
      j["replica_path"] = r.replica_path;
    } else {
      j["tight_edges"] = r.tight_edges;
      j["suggestions"] = r.suggestions;
    }
    Emit(result_json, j);
  });
}

icsr_status icsr_online_check(const icsr_online* state, int64_t* violations,
                              char** report_json) {
  return Guard([&] {
    Require(state, "state");
    const auto found = icsroute::CheckOnlineState(*state->state);
    if (violations != nullptr) *violations = static_cast<int64_t>(found.size());
    Emit(report_json, icsroute::ViolationsToJson(found));
  });
}

icsr_status icsr_online_dump(const icsr_online* state, char** json_out) {
  return Guard([&] {
    Require(state, "state");
    Emit(json_out, state->state->Dump());
  });
}

void icsr_online_free(icsr_online* state) { delete state; }

icsr_status icsr_simulate(const icsr_instance* inst, const icsr_plan* plan,
                          const char* options_json, const char* trace_path,
                          const char* stats_path, char** summary_json) {
  return Guard([&] {
    Require(inst, "inst");
    const json o = Options(options_json);
    std::vector<icsroute::Event> events;
    if (o.contains("trace_in")) {
      events = icsroute::TraceFromCsv(icsroute::ReadFile(o["trace_in"].get<std::string>()));
    } else {
      icsroute::WorkloadConfig cfg;
      cfg.operators = o.value("operators", cfg.operators);
      cfg.mean_interarrival = o.value("mean_interarrival", cfg.mean_interarrival);
      cfg.mean_duration = o.value("mean_duration", cfg.mean_duration);
      cfg.horizon = o.value("horizon", cfg.horizon);
      cfg.seed = o.value("seed", inst->inst.seed);
      events = icsroute::GenerateEvents(inst->inst, cfg);
    }
    icsroute::RunOptions run;
    run.tau = o.value("tau", run.tau);
    std::optional<icsroute::OfflinePlan> p;
    if (plan != nullptr) p = plan->plan;
    const icsroute::RunStats stats = icsroute::Run(inst->inst, p, events, run);
    if (trace_path != nullptr) icsroute::WriteFile(trace_path, icsroute::TraceToCsv(events));
    if (stats_path != nullptr) {
      icsroute::WriteFile(stats_path, icsroute::StatsToCsv(stats.streams));
    }
    Emit(summary_json, icsroute::RunSummaryJson(stats));
  });
}

icsr_status icsr_density_report(const char* stats_path, const char* density_path,
                                char** report_json) {
  return Guard([&] {
    Require(stats_path, "stats_path");
    const auto stats = icsroute::StatsFromCsv(icsroute::ReadFile(stats_path));
    const auto buckets = icsroute::DensityReport(stats);
    if (density_path != nullptr) {
      icsroute::WriteFile(density_path, icsroute::DensityToCsv(buckets));
    }
    double sum = 0;
    json rows = json::array();
    for (const auto& b : buckets) {
      sum += b.fraction;
      rows.push_back({{"low", b.low}, {"high", b.high}, {"count", b.count},
                      {"fraction", b.fraction}});
    }
    Emit(report_json, {{"buckets", rows}, {"fraction_sum", sum}});
  });
}

}  // extern "C"
