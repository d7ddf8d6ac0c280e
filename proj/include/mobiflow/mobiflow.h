/*
* Copyright (C) 2026 mobiflow contributors
*
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
#ifndef MOBIFLOW_MOBIFLOW_H
#define MOBIFLOW_MOBIFLOW_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(MOBIFLOW_BUILDING_LIBRARY)
#    define MF_API __declspec(dllexport)
#  else
#    define MF_API __declspec(dllimport)
#  endif
#else
#  define MF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. The numeric values double as CLI exit codes. */
typedef enum mf_status {
    MF_OK = 0,
    MF_ERR_INTERNAL = 1,
    MF_ERR_USAGE = 2,
    MF_ERR_DATA = 3
} mf_status;

/* Message of the last failed call on this thread, "" after a success. */
MF_API const char* mf_last_error(void);
/* Error category of the last failure, e.g. "MissingInput"; "" after success. */
MF_API const char* mf_last_error_kind(void);
MF_API const char* mf_version(void);

/* ---- Pipeline ---------------------------------------------------------- */

typedef struct mf_pipeline mf_pipeline;

/* Opens a pipeline from a key-value configuration file. `config_path` may be
 * NULL for an empty configuration whose relative paths resolve against the
 * working directory. */
MF_API mf_status mf_pipeline_open(const char* config_path, mf_pipeline** out);
/* Overrides (or adds, for repeatable keys such as `phase`) one setting. */
MF_API mf_status mf_pipeline_set(mf_pipeline* p, const char* key, const char* value);
MF_API mf_status mf_pipeline_append(mf_pipeline* p, const char* key, const char* value);
/* Current value of a setting, or NULL when unset. Valid until the next call
 * on `p`. */
MF_API const char* mf_pipeline_get(mf_pipeline* p, const char* key);
MF_API void mf_pipeline_close(mf_pipeline* p);

/* Daily aggregates under <out>/<day>/ for one day or an inclusive range. */
MF_API mf_status mf_run_day(mf_pipeline* p, const char* day);
MF_API mf_status mf_run_days(mf_pipeline* p, const char* first_day, const char* last_day);
/* Writes <out>/reports/<kind>_<first>_<last>[_<period>].csv; `period` may be
 * NULL. Kinds: buckets, hourly, relchange, ellipse, global_clustering,
 * local_clustering, modularity, communities, epi, all. */
MF_API mf_status mf_run_report(mf_pipeline* p, const char* kind, const char* first_day, const char* last_day,
                               const char* period);
/* Stage-level commands operating on a working directory. */
MF_API mf_status mf_ingest(mf_pipeline* p, const char* events_path, const char* day, const char* out_dir);
MF_API mf_status mf_stays(mf_pipeline* p, const char* in_dir, const char* level);
MF_API mf_status mf_rog(mf_pipeline* p, const char* in_dir, const char* day, const char* out_dir);
MF_API mf_status mf_od(mf_pipeline* p, const char* in_dir, const char* level, const char* day);

/* Synthetic scenario generation. */
MF_API mf_status mf_generate(const char* scenario_path, const char* out_dir);

/* ---- Kernels ----------------------------------------------------------- */

MF_API mf_status mf_haversine_m(double lon_a, double lat_a, double lon_b, double lat_b, double* out);
/* Time-weighted radius of gyration of n points. */
MF_API mf_status mf_radius_of_gyration(const double* lon, const double* lat, const double* weight, size_t n,
                                       double* out);
/* Two-sided Mann-Whitney U. `exact` receives 1 when the p-value was
 * enumerated exactly; it may be NULL. */
MF_API mf_status mf_mann_whitney(const double* a, size_t na, const double* b, size_t nb, double* u, double* p,
                                 int* exact);

/* ---- Graphs ------------------------------------------------------------ */

typedef struct mf_graph mf_graph;

MF_API mf_status mf_graph_create(size_t nodes, mf_graph** out);
MF_API void mf_graph_destroy(mf_graph* g);
/* Adds w > 0 to the undirected edge {m, n}, m != n. */
MF_API mf_status mf_graph_add_edge(mf_graph* g, size_t m, size_t n, double w);
MF_API mf_status mf_graph_local_clustering(const mf_graph* g, size_t m, double* out);
MF_API mf_status mf_graph_global_clustering(const mf_graph* g, double* out);
MF_API mf_status mf_graph_modularity(const mf_graph* g, const int* assignment, double* out);
/* Greedy modularity communities; `assignment` holds one entry per node. */
MF_API mf_status mf_graph_communities(const mf_graph* g, int* assignment, int* community_count, double* modularity);

#ifdef __cplusplus
}
#endif

#endif
