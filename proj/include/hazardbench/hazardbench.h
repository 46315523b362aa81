/* Copyright 2026 The HazardBench Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the hazardbench library.
 *
 * Every fallible call returns an hb_status. On failure the message of the
 * most recent error on the calling thread is available from hb_last_error().
 * Strings returned through char** out-parameters are owned by the caller and
 * released with hb_string_free(). Handles are opaque and not thread-safe
 * unless stated otherwise.
 */

#ifndef HAZARDBENCH_HAZARDBENCH_H_
#define HAZARDBENCH_HAZARDBENCH_H_

#include <stddef.h>
#include <stdint.h>

#if defined(HB_BUILDING_LIBRARY)
#define HB_API __attribute__((visibility("default")))
#else
#define HB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hb_status {
  HB_OK = 0,
  HB_INVALID_ARGUMENT = 1,
  HB_DEGENERATE_DIMENSIONS = 2,
  HB_CONFIGURATION = 3,
  HB_FRAME_MISMATCH = 4,
  HB_SCENARIO_INAPPLICABLE = 5,
  HB_CATEGORY_INAPPLICABLE = 6,
  HB_TRANSPORT = 7,
  HB_HTTP_STATUS = 8,
  HB_DECODE = 9,
  HB_DIM_MISMATCH = 10,
  HB_TIMEOUT = 11,
  HB_IO = 12,
  HB_PARSE = 13,
  HB_INSUFFICIENT_ITEMS = 14,
  HB_DUPLICATE = 15,
  HB_NOT_FOUND = 16,
  HB_CONFLICT = 17,
  HB_INTERNAL = 18
} hb_status;

HB_API const char* hb_version(void);
HB_API const char* hb_status_name(hb_status status);
/* Thread-local; empty string when the last call succeeded. */
HB_API const char* hb_last_error(void);
HB_API void hb_string_free(char* s);

/* Progress and notice lines from long-running calls. May be invoked from
 * worker threads, one line at a time. Pass NULL to silence. */
typedef void (*hb_log_fn)(const char* line, void* user);
HB_API void hb_set_log_callback(hb_log_fn fn, void* user);

/* Asks running generate/evaluate calls to finish in-flight work, flush their
 * manifests and return. Async-signal-safe. */
HB_API void hb_request_stop(void);
HB_API void hb_clear_stop(void);

/* ---- configuration ---------------------------------------------------- */

typedef struct hb_config hb_config;

HB_API hb_status hb_config_create(hb_config** out);
HB_API void hb_config_destroy(hb_config* cfg);
HB_API hb_status hb_config_load_file(hb_config* cfg, const char* path);
/* Reads HF_EDITOR_URL, HF_JUDGE_URL, HF_ANSWERER_URL and HF_TOKEN. */
HB_API hb_status hb_config_apply_env(hb_config* cfg);
HB_API hb_status hb_config_set(hb_config* cfg, const char* key, const char* value);
/* *out stays valid until the next change to cfg. */
HB_API hb_status hb_config_get(const hb_config* cfg, const char* key, const char** out);
/* "default", "file", "env" or "flag". */
HB_API hb_status hb_config_origin(const hb_config* cfg, const char* key, const char** out);
HB_API hb_status hb_config_validate(const hb_config* cfg, int needs_editor, int needs_judge,
                                    int needs_answerer);

HB_API size_t hb_config_key_count(void);
HB_API hb_status hb_config_key_info(size_t index, const char** name, const char** default_value,
                                    const char** help);

/* ---- geometry and vanishing point ----------------------------------- */

/* Bottom-left origin, half-open: [x_min, x_max) x [y_min, y_max). */
typedef struct hb_region {
  int x_min;
  int x_max;
  int y_min;
  int y_max;
} hb_region;

/* Left, center and right thirds of a width x height image. */
HB_API hb_status hb_split_regions(int width, int height, hb_region out[3]);

typedef struct hb_vp_result {
  int found;
  double x; /* bottom-left frame; valid when found */
  double y;
  int support;
  double confidence;
  double y_used; /* clamped y, or the 0.45 H fallback */
  int fallback;
} hb_vp_result;

/* dump_path may be NULL; otherwise segments and the vote grid are written
 * there as text. */
HB_API hb_status hb_detect_vp(const char* image_path, const char* dump_path, hb_vp_result* out);

/* ---- generation ------------------------------------------------------- */

typedef struct hb_generate_summary {
  int attempted;
  int resumed;
  int ineligible;
  int inapplicable;
  int success;
  int partial_failure;
  int failed;
  int outside_mask_warnings;
  int vp_fallbacks;
  int interrupted;
  int exit_code; /* 0 when the corpus has a success, 2 when everything failed */
} hb_generate_summary;

/* scenarios and categories are comma-separated names; NULL, "" or "all"
 * selects everything. Notices (e.g. ineligible pairs) go to the log. */
HB_API hb_status hb_generate(const hb_config* cfg, const char* source_manifest,
                             const char* out_dir, const char* scenarios, const char* categories,
                             int include_originals, hb_generate_summary* out);

/* Scenario x category count table of a benchmark manifest. */
HB_API hb_status hb_stats(const char* manifest, char** table_out);

/* ---- evaluation ------------------------------------------------------- */

typedef struct hb_eval_summary {
  int total;
  int correct;
  int unparsed;
  int errors;
} hb_eval_summary;

/* Filters are comma-separated; "none" in scenarios selects original items. */
HB_API hb_status hb_evaluate(const hb_config* cfg, const char* manifest, const char* results_path,
                             const char* scenarios, const char* categories, const char* sources,
                             hb_eval_summary* out);

/* Joins result files with the manifest and renders the three accuracy tables.
 * answer_key and human_answers are optional (NULL / 0) and add reference
 * rows labelled human_label. */
HB_API hb_status hb_report(const char* manifest, const char* const* results_paths,
                           size_t n_results, const char* answer_key,
                           const char* const* human_answers, size_t n_human,
                           const char* human_label, char** text_out, char** csv_out);

HB_API hb_status hb_export_sheets(const char* manifest, const char* out_dir, int sheets,
                                  int per_group, uint64_t seed, int* rows_out);

HB_API hb_status hb_score_human(const char* answer_key, const char* const* answers_paths,
                                size_t n_answers, const char* label, char** text_out,
                                char** csv_out);

/* ---- annotation server ------------------------------------------------ */

typedef struct hb_annotation_server hb_annotation_server;

typedef struct hb_annotation_options {
  const char* sheets_dir; /* sheet_<k>.csv and optional answer_key.csv */
  const char* images_dir; /* sheet image paths are relative to this */
  const char* app_dir;    /* static UI build; NULL serves a placeholder page */
  const char* host;
  int port; /* 0 picks a free port */
} hb_annotation_options;

HB_API hb_status hb_annotation_server_create(const hb_annotation_options* options,
                                             hb_annotation_server** out);
/* HB_IO when the port is taken. */
HB_API hb_status hb_annotation_server_bind(hb_annotation_server* server, int* port_out);
/* Blocks until hb_annotation_server_stop() is called from another thread. */
HB_API hb_status hb_annotation_server_run(hb_annotation_server* server);
/* Thread-safe. */
HB_API void hb_annotation_server_stop(hb_annotation_server* server);
HB_API void hb_annotation_server_destroy(hb_annotation_server* server);

#ifdef __cplusplus
}
#endif

#endif /* HAZARDBENCH_HAZARDBENCH_H_ */
