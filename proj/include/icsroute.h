/* Copyright 2026 The icsroute Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the icsroute planner and simulator.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every call returns an icsr_status; on failure icsr_last_error() describes
 * the problem (thread-local, valid until the next call on that thread).
 * Strings returned through char** are heap allocated and must be released
 * with icsr_string_free. Options are passed as JSON object text; NULL or ""
 * means defaults.
 */

#ifndef ICSROUTE_H_
#define ICSROUTE_H_

#include <stdint.h>

#if defined(ICSROUTE_BUILDING_LIBRARY)
#define ICSR_API __attribute__((visibility("default")))
#else
#define ICSR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum icsr_status {
  ICSR_OK = 0,
  ICSR_INVALID_ARGUMENT = 1,
  ICSR_NOT_FOUND = 2,
  ICSR_PARSE_ERROR = 3,
  ICSR_IO_ERROR = 4,
  ICSR_INFEASIBLE = 5,
  ICSR_SIZE_BOUND = 6,
  ICSR_STATE_ERROR = 7,
  ICSR_INTERNAL = 8
} icsr_status;

typedef struct icsr_instance icsr_instance;
typedef struct icsr_plan icsr_plan;
typedef struct icsr_online icsr_online;

ICSR_API const char* icsr_version(void);
ICSR_API const char* icsr_last_error(void);
ICSR_API const char* icsr_status_name(icsr_status status);
ICSR_API void icsr_string_free(char* s);

/* Instances.
 * generate options: {"alpha": real} or {"q_target": int}, "seed",
 * "reserve_fraction" (default 0.05). The report lists the counts and the
 * alpha actually used. */
ICSR_API icsr_status icsr_instance_generate(const char* backbone_path,
                                            const char* options_json,
                                            icsr_instance** out,
                                            char** report_json);
ICSR_API icsr_status icsr_instance_load(const char* path, icsr_instance** out);
ICSR_API icsr_status icsr_instance_save(const icsr_instance* inst,
                                        const char* path);
ICSR_API icsr_status icsr_instance_summary(const icsr_instance* inst,
                                           char** summary_json);
ICSR_API void icsr_instance_free(icsr_instance* inst);

/* Off-line planning.
 * options: "ids_capacity" (bps), "ids_capacity_count" (bool),
 * "multi_ids" ([ids]), "flow_table" ({"switch": limit}), "option_limit",
 * "max_links", "max_streams", "jobs". */
ICSR_API icsr_status icsr_plan_solve(const icsr_instance* inst,
                                     const char* options_json, icsr_plan** out);
ICSR_API icsr_status icsr_plan_export_lp(const icsr_instance* inst,
                                         const char* options_json,
                                         const char* lp_path,
                                         char** summary_json);
ICSR_API icsr_status icsr_plan_load(const char* path, icsr_plan** out);
ICSR_API icsr_status icsr_plan_save(const icsr_plan* plan, const char* path);
ICSR_API icsr_status icsr_plan_to_json(const icsr_plan* plan, char** json);
ICSR_API icsr_status icsr_plan_objective(const icsr_instance* inst,
                                         const icsr_plan* plan,
                                         char** objective);
ICSR_API void icsr_plan_free(icsr_plan* plan);

/* Plan verification; the same options as icsr_plan_solve apply to the IDS
 * set, IDS capacity and flow tables. */
ICSR_API icsr_status icsr_verify_plan(const icsr_instance* inst,
                                      const icsr_plan* plan,
                                      const char* options_json,
                                      int64_t* violations, char** report_json);

/* On-line state. plan may be NULL. options: "tau" (seconds). */
ICSR_API icsr_status icsr_online_create(const icsr_instance* inst,
                                        const icsr_plan* plan,
                                        const char* options_json,
                                        icsr_online** out);
ICSR_API icsr_status icsr_online_add_device(icsr_online* state,
                                            int32_t attach_switch,
                                            int64_t capacity_bps,
                                            int32_t* device);
ICSR_API icsr_status icsr_online_admit(icsr_online* state, int32_t src,
                                       int32_t dst, double now,
                                       char** result_json);
ICSR_API icsr_status icsr_online_remove(icsr_online* state, int32_t stream_id,
                                        double now, char** result_json);
ICSR_API icsr_status icsr_online_observe(const icsr_online* state,
                                         int32_t critical_stream_id,
                                         char** result_json);
ICSR_API icsr_status icsr_online_check(const icsr_online* state,
                                       int64_t* violations, char** report_json);
ICSR_API icsr_status icsr_online_dump(const icsr_online* state, char** json);
ICSR_API void icsr_online_free(icsr_online* state);

/* Simulation. plan may be NULL. options: "seed", "operators",
 * "mean_interarrival", "mean_duration", "horizon", "tau". trace_path and
 * stats_path may be NULL. */
ICSR_API icsr_status icsr_simulate(const icsr_instance* inst,
                                   const icsr_plan* plan,
                                   const char* options_json,
                                   const char* trace_path,
                                   const char* stats_path,
                                   char** summary_json);
ICSR_API icsr_status icsr_density_report(const char* stats_path,
                                         const char* density_path,
                                         char** report_json);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* ICSROUTE_H_ */
