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

// icsroute command-line front end. Talks to the library only through the C
// interface.
//
// Exit codes: 0 success, 2 violations found, 3 infeasible, 4 input error,
// 1 anything else.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "icsroute.h"
#include "json.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitViolations = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitInput = 4;

int ExitFor(icsr_status s) {
  switch (s) {
    case ICSR_OK:
      return kExitOk;
    case ICSR_INFEASIBLE:
      return kExitInfeasible;
    case ICSR_INTERNAL:
      return kExitInternal;
    default:
      return kExitInput;
  }
}

// Thrown to unwind with a status after printing the library's message.
struct Failure {
  int exit_code;
};

void Check(icsr_status s, const std::string& context) {
  if (s == ICSR_OK) return;
  std::cerr << "icsroute: " << context << ": " << icsr_status_name(s) << ": "
            << icsr_last_error() << "\n";
  throw Failure{ExitFor(s)};
}

// Owns a string returned by the library.
class LibString {
 public:
  LibString() = default;
  LibString(const LibString&) = delete;
  LibString& operator=(const LibString&) = delete;
  ~LibString() { icsr_string_free(s_); }
  char** out() { return &s_; }
  std::string str() const { return s_ == nullptr ? std::string() : std::string(s_); }
  json parsed() const { return json::parse(str()); }

 private:
  char* s_ = nullptr;
};

template <typename T, void (*Free)(T*)>
class Handle {
 public:
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p_); }
  T** out() { return &p_; }
  T* get() const { return p_; }

 private:
  T* p_ = nullptr;
};

using Instance = Handle<icsr_instance, icsr_instance_free>;
using Plan = Handle<icsr_plan, icsr_plan_free>;
using Online = Handle<icsr_online, icsr_online_free>;

// Options shared by plan and verify.
struct ModelFlags {
  long long ids_capacity = -1;
  bool ids_capacity_count = false;
  std::vector<int> multi_ids;
  std::vector<std::string> flow_table;

  void Register(CLI::App* app) {
    app->add_option("--ids-capacity", ids_capacity,
                    "Limit on replica traffic into the IDS (bps, or a stream count "
                    "with --ids-capacity-count)");
    app->add_flag("--ids-capacity-count", ids_capacity_count,
                  "Read --ids-capacity as a number of observed streams");
    app->add_option("--multi-ids", multi_ids, "Comma-separated IDS vertex ids")
        ->delimiter(',');
    app->add_option("--flow-table", flow_table,
                    "Comma-separated switch=limit flow-table sizes")
        ->delimiter(',');
  }

  json ToJson() const {
    json o = json::object();
    if (ids_capacity >= 0) {
      o["ids_capacity"] = ids_capacity;
      o["ids_capacity_count"] = ids_capacity_count;
    }
    if (!multi_ids.empty()) o["multi_ids"] = multi_ids;
    if (!flow_table.empty()) {
      json ft = json::object();
      for (const std::string& item : flow_table) {
        const size_t eq = item.find('=');
        if (eq == std::string::npos) {
          std::cerr << "icsroute: --flow-table expects switch=limit, got '" << item << "'\n";
          throw Failure{kExitInput};
        }
        try {
          ft[std::to_string(std::stoi(item.substr(0, eq)))] = std::stoi(item.substr(eq + 1));
        } catch (const std::exception&) {
          std::cerr << "icsroute: bad --flow-table entry '" << item << "'\n";
          throw Failure{kExitInput};
        }
      }
      o["flow_table"] = ft;
    }
    return o;
  }
};

int RunInteractive(icsr_online* state) {
  std::string line;
  while (std::getline(std::cin, line)) {
    std::istringstream in(line);
    std::string cmd;
    if (!(in >> cmd)) continue;
    LibString out;
    icsr_status s = ICSR_OK;
    if (cmd == "ADMIT") {
      int src = 0, dst = 0;
      double now = 0;
      if (!(in >> src >> dst)) {
        std::cout << json{{"error", "usage: ADMIT s t [time]"}}.dump() << std::endl;
        continue;
      }
      in >> now;
      s = icsr_online_admit(state, src, dst, now, out.out());
    } else if (cmd == "REMOVE") {
      int id = 0;
      double now = 0;
      if (!(in >> id)) {
        std::cout << json{{"error", "usage: REMOVE id [time]"}}.dump() << std::endl;
        continue;
      }
      in >> now;
      s = icsr_online_remove(state, id, now, out.out());
    } else if (cmd == "OBSERVE") {
      int id = 0;
      if (!(in >> id)) {
        std::cout << json{{"error", "usage: OBSERVE critical_stream_id"}}.dump() << std::endl;
        continue;
      }
      s = icsr_online_observe(state, id, out.out());
    } else if (cmd == "DUMP") {
      s = icsr_online_dump(state, out.out());
    } else if (cmd == "CHECK") {
      int64_t n = 0;
      s = icsr_online_check(state, &n, out.out());
    } else if (cmd == "QUIT") {
      break;
    } else {
      std::cout << json{{"error", "unknown command " + cmd}}.dump() << std::endl;
      continue;
    }
    if (s != ICSR_OK) {
      std::cout << json{{"error", icsr_last_error()}, {"status", icsr_status_name(s)}}.dump()
                << std::endl;
    } else {
      std::cout << out.str() << std::endl;
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Routing and observation planner for ICS networks"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Build an evaluation instance from a backbone");
  std::string gen_backbone, gen_out;
  double gen_alpha = 0.7, gen_reserve = 0.05;
  int gen_q = -1;
  std::uint64_t gen_seed = 1;
  gen->add_option("backbone", gen_backbone, "Backbone GraphML or topology JSON")
      ->required()
      ->check(CLI::ExistingFile);
  auto* alpha_opt = gen->add_option("--alpha", gen_alpha, "Power-law exponent in [0.7, 1]");
  gen->add_option("--q-target", gen_q, "Search the alpha grid for this substation count")
      ->excludes(alpha_opt);
  gen->add_option("--seed", gen_seed, "Seed recorded in the instance");
  gen->add_option("--reserve-fraction", gen_reserve,
                  "Share of every link reserved for standard streams");
  gen->add_option("--out", gen_out, "Instance JSON to write");

  // plan
  auto* plan = app.add_subcommand("plan", "Plan critical streams or export the ILP");
  std::string plan_instance, plan_out, plan_mode = "exact";
  int plan_jobs = 1, plan_max_links = 40, plan_max_streams = 12, plan_limit = 200;
  ModelFlags plan_flags;
  plan->add_option("instance", plan_instance, "Instance JSON")->required();
  plan->add_option("--mode", plan_mode, "exact or export-lp")
      ->check(CLI::IsMember({"exact", "export-lp"}));
  plan->add_option("--out", plan_out, "Plan JSON (exact) or LP file (export-lp)");
  plan->add_option("--jobs", plan_jobs, "Worker threads for the exact search");
  plan->add_option("--max-links", plan_max_links, "Exact-mode bound on physical links");
  plan->add_option("--max-streams", plan_max_streams, "Exact-mode bound on critical streams");
  plan->add_option("--option-limit", plan_limit, "Paths enumerated per stream and replica");
  plan_flags.Register(plan);

  // verify
  auto* verify = app.add_subcommand("verify", "Check a plan against an instance");
  std::string verify_instance, verify_plan, verify_report;
  ModelFlags verify_flags;
  verify->add_option("instance", verify_instance, "Instance JSON")->required();
  verify->add_option("plan", verify_plan, "Plan JSON")->required();
  verify->add_option("--report", verify_report, "Write the violation report JSON here");
  verify_flags.Register(verify);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Replay an operator workload on-line");
  std::string sim_instance, sim_plan, sim_out, sim_trace_out, sim_trace_in;
  std::uint64_t sim_seed = 1;
  bool sim_seed_set = false;
  double sim_horizon = 600, sim_interarrival = 300, sim_duration = 900, sim_tau = 0.01;
  int sim_operators = 0;
  bool sim_interactive = false;
  simulate->add_option("instance", sim_instance, "Instance JSON")->required();
  simulate->add_option("--plan", sim_plan, "Off-line plan JSON fixing critical traffic");
  simulate->add_option("--seed", sim_seed, "Workload seed (default: the instance seed)")
      ->each([&](const std::string&) { sim_seed_set = true; });
  simulate->add_option("--horizon", sim_horizon, "Seconds during which connections begin");
  simulate->add_option("--mean-interarrival", sim_interarrival,
                       "Mean seconds between an operator's connections");
  simulate->add_option("--mean-duration", sim_duration, "Mean connection length in seconds");
  simulate->add_option("--operators", sim_operators, "Operator count (default: substations)");
  simulate->add_option("--tau", sim_tau, "Admission delay in seconds");
  simulate->add_option("--trace-in", sim_trace_in, "Replay this trace CSV instead");
  simulate->add_option("--trace-out", sim_trace_out, "Write the trace CSV here");
  simulate->add_option("--out", sim_out, "Stats CSV to write");
  simulate->add_flag("--interactive", sim_interactive,
                     "Read ADMIT s t [time] / REMOVE id [time] / OBSERVE id / DUMP / "
                     "CHECK / QUIT lines from stdin");

  // report
  auto* report = app.add_subcommand("report", "Bandwidth density of a simulation");
  std::string report_stats, report_out;
  report->add_option("stats", report_stats, "Stats CSV from simulate")->required();
  report->add_option("--density-out", report_out, "Density CSV to write");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (gen->parsed()) {
      json o = {{"seed", gen_seed}, {"reserve_fraction", gen_reserve}};
      if (gen_q > 0) {
        o["q_target"] = gen_q;
      } else {
        o["alpha"] = gen_alpha;
      }
      Instance inst;
      LibString rep;
      Check(icsr_instance_generate(gen_backbone.c_str(), o.dump().c_str(), inst.out(),
                                   rep.out()),
            "gen");
      const json r = rep.parsed();
      if (r.contains("alpha_found") && !r["alpha_found"].get<bool>()) {
        std::cerr << "warning: no alpha on the grid gives q=" << gen_q
                  << "; using the nearest, alpha=" << r["alpha"].get<double>()
                  << " (q=" << r["substations"] << ")\n";
      }
      std::printf("vertices %d\nphysical_links %d\ncritical_streams %d\nq %d\nalpha %.2f\n",
                  r["vertices"].get<int>(), r["physical_links"].get<int>(),
                  r["critical_streams"].get<int>(), r["substations"].get<int>(),
                  r["alpha"].get<double>());
      if (!gen_out.empty()) Check(icsr_instance_save(inst.get(), gen_out.c_str()), "save");
      return kExitOk;
    }

    if (plan->parsed()) {
      Instance inst;
      Check(icsr_instance_load(plan_instance.c_str(), inst.out()), "load instance");
      json o = plan_flags.ToJson();
      o["jobs"] = plan_jobs;
      o["max_links"] = plan_max_links;
      o["max_streams"] = plan_max_streams;
      o["option_limit"] = plan_limit;
      if (plan_mode == "export-lp") {
        if (plan_out.empty()) {
          std::cerr << "icsroute: export-lp needs --out\n";
          return kExitInput;
        }
        LibString summary;
        Check(icsr_plan_export_lp(inst.get(), o.dump().c_str(), plan_out.c_str(),
                                  summary.out()),
              "export-lp");
        std::cout << summary.parsed().dump(1) << "\n";
        return kExitOk;
      }
      Plan p;
      Check(icsr_plan_solve(inst.get(), o.dump().c_str(), p.out()), "plan");
      LibString body, objective;
      Check(icsr_plan_to_json(p.get(), body.out()), "plan");
      const json j = body.parsed();
      int observed = 0;
      for (const json& s : j["streams"]) observed += s["observed"].get<bool>() ? 1 : 0;
      std::cout << "status " << j["status"].get<std::string>() << "\nobjective "
                << j["objective"].get<std::string>() << "\nobserved " << observed << "/"
                << j["streams"].size() << "\n";
      if (!plan_out.empty()) Check(icsr_plan_save(p.get(), plan_out.c_str()), "save");
      return kExitOk;
    }

    if (verify->parsed()) {
      Instance inst;
      Plan p;
      Check(icsr_instance_load(verify_instance.c_str(), inst.out()), "load instance");
      Check(icsr_plan_load(verify_plan.c_str(), p.out()), "load plan");
      int64_t count = 0;
      LibString rep;
      Check(icsr_verify_plan(inst.get(), p.get(), verify_flags.ToJson().dump().c_str(), &count,
                             rep.out()),
            "verify");
      if (!verify_report.empty()) {
        std::FILE* f = std::fopen(verify_report.c_str(), "wb");
        if (f == nullptr) {
          std::cerr << "icsroute: cannot write " << verify_report << "\n";
          return kExitInput;
        }
        const std::string text = rep.parsed().dump(1) + "\n";
        std::fwrite(text.data(), 1, text.size(), f);
        std::fclose(f);
      }
      for (const json& v : rep.parsed()) {
        std::cout << v["code"].get<std::string>();
        if (v.contains("stream_id")) std::cout << " stream=" << v["stream_id"];
        if (v.contains("edge")) std::cout << " edge=" << v["edge"];
        std::cout << ": " << v["detail"].get<std::string>() << "\n";
      }
      std::cout << count << " violation(s)\n";
      return count == 0 ? kExitOk : kExitViolations;
    }

    if (simulate->parsed()) {
      Instance inst;
      Plan p;
      Check(icsr_instance_load(sim_instance.c_str(), inst.out()), "load instance");
      if (!sim_plan.empty()) Check(icsr_plan_load(sim_plan.c_str(), p.out()), "load plan");
      if (sim_interactive) {
        Online state;
        Check(icsr_online_create(inst.get(), p.get(), json{{"tau", sim_tau}}.dump().c_str(),
                                 state.out()),
              "online");
        return RunInteractive(state.get());
      }
      json o = {{"horizon", sim_horizon},
                {"mean_interarrival", sim_interarrival},
                {"mean_duration", sim_duration},
                {"operators", sim_operators},
                {"tau", sim_tau}};
      if (sim_seed_set) o["seed"] = sim_seed;
      if (!sim_trace_in.empty()) o["trace_in"] = sim_trace_in;
      LibString summary;
      Check(icsr_simulate(inst.get(), p.get(), o.dump().c_str(),
                          sim_trace_out.empty() ? nullptr : sim_trace_out.c_str(),
                          sim_out.empty() ? nullptr : sim_out.c_str(), summary.out()),
            "simulate");
      const json s = summary.parsed();
      std::cout << s.dump(1) << "\n";
      const bool clean = s["budget_violations"].get<int64_t>() == 0 &&
                         s["critical_touches"].get<int64_t>() == 0 &&
                         s["other_violations"].get<int64_t>() == 0;
      return clean ? kExitOk : kExitViolations;
    }

    if (report->parsed()) {
      LibString rep;
      Check(icsr_density_report(report_stats.c_str(),
                                report_out.empty() ? nullptr : report_out.c_str(), rep.out()),
            "report");
      const json r = rep.parsed();
      std::printf("%-14s %-14s %s\n", "low_bps", "high_bps", "fraction");
      for (const json& b : r["buckets"]) {
        std::printf("%-14lld %-14lld %.6f\n", b["low"].get<long long>(),
                    b["high"].get<long long>(), b["fraction"].get<double>());
      }
      std::printf("sum %.9f\n", r["fraction_sum"].get<double>());
      return kExitOk;
    }
  } catch (const Failure& f) {
    return f.exit_code;
  } catch (const json::exception& e) {
    std::cerr << "icsroute: malformed library output: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}
