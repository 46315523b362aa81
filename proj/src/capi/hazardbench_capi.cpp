// Copyright 2026 The HazardBench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hazardbench/hazardbench.h"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <new>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "core/annotation.hpp"
#include "core/config.hpp"
#include "core/error.hpp"
#include "core/evaluator.hpp"
#include "core/http_backends.hpp"
#include "core/manifest.hpp"
#include "core/orchestrator.hpp"
#include "core/report.hpp"
#include "core/sheets.hpp"
#include "core/stub_backends.hpp"
#include "core/vp_detect.hpp"
#include "json.hpp"

struct hb_config {
  hb::Config config;
};

struct hb_annotation_server {
  std::unique_ptr<hb::AnnotationServer> server;
};

namespace {

thread_local std::string g_last_error;
std::atomic<bool> g_stop{false};

std::mutex g_log_mu;
hb_log_fn g_log_fn = nullptr;
void* g_log_user = nullptr;

void log_line(const std::string& line) {
  std::lock_guard lock(g_log_mu);
  if (g_log_fn) g_log_fn(line.c_str(), g_log_user);
}

hb_status fail(hb_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Runs f, mapping exceptions onto status codes.
template <typename F>
hb_status guarded(F&& f) {
  g_last_error.clear();
  try {
    f();
    return HB_OK;
  } catch (const hb::Error& e) {
    return fail(static_cast<hb_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(HB_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(HB_INTERNAL, e.what());
  }
}

void require(const void* p, const char* what) {
  if (!p) throw hb::Error(hb::ErrorCode::kInvalidArgument, std::string(what) + " is NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<std::string> split_list(const char* text) {
  std::vector<std::string> out;
  if (!text) return out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto b = part.find_first_not_of(" \t");
    const auto e = part.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(part.substr(b, e - b + 1));
  }
  if (out.size() == 1 && out[0] == "all") out.clear();
  return out;
}

std::vector<hb::ScenarioKind> parse_scenarios(const char* text) {
  const auto names = split_list(text);
  if (names.empty()) return {hb::kAllScenarios.begin(), hb::kAllScenarios.end()};
  std::vector<hb::ScenarioKind> out;
  for (const auto& n : names) {
    const auto s = hb::parse_scenario(n);
    if (!s) throw hb::Error(hb::ErrorCode::kConfiguration, "unknown scenario '" + n + "'");
    out.push_back(*s);
  }
  return out;
}

std::vector<hb::ObjectCategory> parse_categories(const char* text) {
  const auto names = split_list(text);
  if (names.empty()) return {hb::kAllCategories.begin(), hb::kAllCategories.end()};
  std::vector<hb::ObjectCategory> out;
  for (const auto& n : names) {
    const auto c = hb::parse_category(n);
    if (!c) throw hb::Error(hb::ErrorCode::kConfiguration, "unknown category '" + n + "'");
    out.push_back(*c);
  }
  return out;
}

// "auto" resolves to `fallback`.
bool tri_state(const hb::Config& cfg, const char* key, bool fallback) {
  const std::string& v = cfg.get(key);
  if (v == "auto") return fallback;
  return hb::parse_bool(v).value_or(fallback);
}

hb::Backends make_generation_backends(const hb::Config& cfg) {
  hb::Backends b;
  if (cfg.get_bool("run.stub")) {
    hb::FailureInjection inj;
    inj.rate = cfg.get_double("stub.failure_rate");
    inj.fail_first_trials = static_cast<int>(cfg.get_int("stub.fail_first_trials"));
    b.editor = std::make_shared<hb::StubEditor>(inj);
    b.judge = std::make_shared<hb::StubJudgeModel>();
  } else {
    b.editor = std::make_shared<hb::HttpEditor>(cfg.endpoint("editor"),
                                                cfg.get_bool("editor.composite"));
    b.judge = std::make_shared<hb::HttpChatModel>(cfg.endpoint("judge"));
  }
  return b;
}

std::map<std::string, std::string> read_script(const std::string& path) {
  const auto bytes = hb::read_file_bytes(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::exception& e) {
    throw hb::Error(hb::ErrorCode::kParse, path + ": " + e.what());
  }
  if (!j.is_object()) throw hb::Error(hb::ErrorCode::kParse, path + ": expected a JSON object");
  std::map<std::string, std::string> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_string()) {
      throw hb::Error(hb::ErrorCode::kParse, path + ": reply for '" + it.key() + "' is not a string");
    }
    out[it.key()] = it.value().get<std::string>();
  }
  return out;
}

std::unique_ptr<hb::Answerer> make_answerer(const hb::Config& cfg, const std::string& manifest) {
  const std::string kind = cfg.get("answerer.stub");
  hb::StubLatency latency;
  latency.delay_ms = static_cast<int>(cfg.get_int("answerer.delay_ms"));
  latency.timeout_ms = static_cast<int>(cfg.get_int("http.timeout_ms"));
  if (kind == "oracle") {
    std::map<std::string, hb::Action> truth;
    for (const auto& e : hb::read_benchmark(manifest)) truth[e.id] = e.gt_action;
    return std::make_unique<hb::OracleAnswerer>(std::move(truth), latency);
  }
  if (kind == "constant") {
    return std::make_unique<hb::ConstantAnswerer>(cfg.get("answerer.constant"), latency);
  }
  if (kind == "scripted") {
    return std::make_unique<hb::ScriptedAnswerer>(read_script(cfg.get("answerer.script")), "",
                                                  latency);
  }
  return std::make_unique<hb::ChatAnswerer>(
      std::make_shared<hb::HttpChatModel>(cfg.endpoint("answerer")));
}

std::set<std::string> filter_set(const char* text) {
  const auto v = split_list(text);
  return {v.begin(), v.end()};
}

std::vector<std::pair<std::string, std::string>> read_all_answers(const char* const* paths,
                                                                  size_t n) {
  std::vector<std::pair<std::string, std::string>> out;
  for (size_t i = 0; i < n; ++i) {
    require(paths[i], "answers path");
    for (auto& a : hb::read_answers(paths[i])) out.push_back(std::move(a));
  }
  return out;
}

void emit_report(const std::vector<hb::ModelReport>& models, char** text_out, char** csv_out) {
  const hb::RenderedReport r = hb::render_report(models);
  char* text = dup_string(r.text);
  char* csv = nullptr;
  if (csv_out) {
    try {
      csv = dup_string(r.csv);
    } catch (...) {
      std::free(text);
      throw;
    }
    *csv_out = csv;
  }
  *text_out = text;
}

}  // namespace

extern "C" {

const char* hb_version(void) { return "0.1.0"; }

const char* hb_status_name(hb_status status) {
  if (status < HB_OK || status > HB_INTERNAL) return "unknown";
  return hb::error_code_name(static_cast<hb::ErrorCode>(status));
}

const char* hb_last_error(void) { return g_last_error.c_str(); }

void hb_string_free(char* s) { std::free(s); }

void hb_set_log_callback(hb_log_fn fn, void* user) {
  std::lock_guard lock(g_log_mu);
  g_log_fn = fn;
  g_log_user = user;
}

void hb_request_stop(void) { g_stop.store(true); }

void hb_clear_stop(void) { g_stop.store(false); }

hb_status hb_config_create(hb_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new hb_config();
  });
}

void hb_config_destroy(hb_config* cfg) { delete cfg; }

hb_status hb_config_load_file(hb_config* cfg, const char* path) {
  return guarded([&] {
    require(cfg, "cfg");
    require(path, "path");
    cfg->config.load_file(path);
  });
}

hb_status hb_config_apply_env(hb_config* cfg) {
  return guarded([&] {
    require(cfg, "cfg");
    cfg->config.apply_env([](const char* name) { return std::getenv(name); });
  });
}

hb_status hb_config_set(hb_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    require(cfg, "cfg");
    require(key, "key");
    require(value, "value");
    cfg->config.set_origin("flag");
    cfg->config.set(key, value);
  });
}

hb_status hb_config_get(const hb_config* cfg, const char* key, const char** out) {
  return guarded([&] {
    require(cfg, "cfg");
    require(key, "key");
    require(out, "out");
    *out = cfg->config.get(key).c_str();
  });
}

hb_status hb_config_origin(const hb_config* cfg, const char* key, const char** out) {
  return guarded([&] {
    require(cfg, "cfg");
    require(key, "key");
    require(out, "out");
    *out = cfg->config.origin(key).c_str();
  });
}

hb_status hb_config_validate(const hb_config* cfg, int needs_editor, int needs_judge,
                             int needs_answerer) {
  return guarded([&] {
    require(cfg, "cfg");
    cfg->config.validate(needs_editor != 0, needs_judge != 0, needs_answerer != 0);
  });
}

size_t hb_config_key_count(void) { return hb::config_keys().size(); }

hb_status hb_config_key_info(size_t index, const char** name, const char** default_value,
                             const char** help) {
  return guarded([&] {
    const auto& keys = hb::config_keys();
    if (index >= keys.size()) {
      throw hb::Error(hb::ErrorCode::kInvalidArgument, "key index out of range");
    }
    // Views point into static string literals, so they are NUL-terminated.
    if (name) *name = keys[index].name.data();
    if (default_value) *default_value = keys[index].default_value.data();
    if (help) *help = keys[index].help.data();
  });
}

hb_status hb_split_regions(int width, int height, hb_region out[3]) {
  return guarded([&] {
    require(out, "out");
    const auto regions = hb::split_regions(hb::ImageDims{width, height});
    for (int i = 0; i < 3; ++i) {
      out[i] = {regions[i].x_min, regions[i].x_max, regions[i].y_min, regions[i].y_max};
    }
  });
}

hb_status hb_detect_vp(const char* image_path, const char* dump_path, hb_vp_result* out) {
  return guarded([&] {
    require(image_path, "image_path");
    require(out, "out");
    const hb::Raster image = hb::decode_png(hb::read_file_bytes(image_path));
    hb::VpDiagnostics diag;
    const auto vp = hb::detect_vp(image, {}, dump_path ? &diag : nullptr);
    const auto est = hb::resolve_vp_y(vp, image.height);
    *out = hb_vp_result{};
    out->found = vp.has_value();
    if (vp) {
      out->x = vp->x;
      out->y = vp->y;
      out->support = vp->support;
      out->confidence = vp->confidence;
    }
    out->y_used = est.y;
    out->fallback = est.fallback;
    if (dump_path) hb::write_file_atomic(dump_path, diag.to_text());
  });
}

hb_status hb_generate(const hb_config* cfg, const char* source_manifest, const char* out_dir,
                      const char* scenarios, const char* categories, int include_originals,
                      hb_generate_summary* out) {
  return guarded([&] {
    require(cfg, "cfg");
    require(source_manifest, "source_manifest");
    require(out_dir, "out_dir");
    require(out, "out");
    const hb::Config& c = cfg->config;
    c.validate(true, true, false);
    hb::GenerateOptions opts;
    opts.scenarios = parse_scenarios(scenarios);
    opts.categories = parse_categories(categories);
    opts.max_trials = static_cast<int>(c.get_int("run.max_trials"));
    opts.seed = c.get_uint64("run.seed");
    opts.workers = static_cast<int>(c.get_int("run.workers"));
    opts.geometry = c.geometry_overrides();
    opts.include_originals = include_originals != 0;
    opts.record_timestamps = tri_state(c, "run.record_timestamps", !c.get_bool("run.stub"));
    opts.stop = &g_stop;
    opts.log = log_line;
    const hb::GenerateSummary s =
        hb::generate_benchmark(source_manifest, out_dir, make_generation_backends(c), opts);
    for (const auto& n : s.notices) log_line(n);
    *out = hb_generate_summary{s.attempted,
                               s.resumed,
                               s.ineligible,
                               s.inapplicable,
                               s.success,
                               s.partial_failure,
                               s.failed,
                               s.outside_mask_warnings,
                               s.vp_fallbacks,
                               s.interrupted ? 1 : 0,
                               s.exit_code()};
  });
}

hb_status hb_stats(const char* manifest, char** table_out) {
  return guarded([&] {
    require(manifest, "manifest");
    require(table_out, "table_out");
    const auto table = hb::compute_stats(hb::read_benchmark(manifest));
    *table_out = dup_string(hb::render_stats_table(table));
  });
}

hb_status hb_evaluate(const hb_config* cfg, const char* manifest, const char* results_path,
                      const char* scenarios, const char* categories, const char* sources,
                      hb_eval_summary* out) {
  return guarded([&] {
    require(cfg, "cfg");
    require(manifest, "manifest");
    require(results_path, "results_path");
    require(out, "out");
    const hb::Config& c = cfg->config;
    c.validate(false, false, true);
    hb::EvaluateOptions opts;
    opts.model = c.get("eval.model");
    opts.concurrency = static_cast<int>(c.get_int("eval.concurrency"));
    opts.max_attempts = static_cast<int>(c.get_int("eval.max_attempts"));
    opts.record_latency = tri_state(c, "eval.record_latency", c.get("answerer.stub").empty());
    opts.scenarios = filter_set(scenarios);
    opts.categories = filter_set(categories);
    opts.sources = filter_set(sources);
    for (const auto& s : opts.scenarios) {
      if (s != "none" && !hb::parse_scenario(s)) {
        throw hb::Error(hb::ErrorCode::kConfiguration, "unknown scenario '" + s + "'");
      }
    }
    for (const auto& k : opts.categories) {
      if (!hb::parse_category(k)) {
        throw hb::Error(hb::ErrorCode::kConfiguration, "unknown category '" + k + "'");
      }
    }
    opts.stop = &g_stop;
    opts.log = log_line;
    auto answerer = make_answerer(c, manifest);
    const auto results = hb::evaluate(manifest, *answerer, opts, results_path);
    *out = hb_eval_summary{};
    for (const auto& r : results) {
      ++out->total;
      if (r.correct) ++out->correct;
      if (!r.parsed) ++out->unparsed;
      if (r.error) ++out->errors;
    }
  });
}

hb_status hb_report(const char* manifest, const char* const* results_paths, size_t n_results,
                    const char* answer_key, const char* const* human_answers, size_t n_human,
                    const char* human_label, char** text_out, char** csv_out) {
  return guarded([&] {
    require(manifest, "manifest");
    require(text_out, "text_out");
    if (n_results > 0) require(results_paths, "results_paths");
    if (n_human > 0) {
      require(human_answers, "human_answers");
      require(answer_key, "answer_key");
    }
    const auto entries = hb::read_benchmark(manifest);
    std::vector<hb::ModelReport> models;
    if (n_human > 0) {
      models.push_back(hb::score_human(hb::read_answer_key(answer_key),
                                       read_all_answers(human_answers, n_human),
                                       human_label ? human_label : "Human eval."));
    }
    for (size_t i = 0; i < n_results; ++i) {
      require(results_paths[i], "results path");
      const auto results = hb::read_results(results_paths[i]);
      std::string model = std::filesystem::path(results_paths[i]).stem().string();
      if (!results.empty() && !results.front().model.empty()) model = results.front().model;
      models.push_back(hb::aggregate(model, hb::outcomes_for(entries, results)));
    }
    emit_report(models, text_out, csv_out);
  });
}

hb_status hb_export_sheets(const char* manifest, const char* out_dir, int sheets, int per_group,
                           uint64_t seed, int* rows_out) {
  return guarded([&] {
    require(manifest, "manifest");
    require(out_dir, "out_dir");
    hb::SheetOptions opts;
    opts.sheets = sheets;
    opts.per_group = per_group;
    opts.seed = seed;
    const int rows = hb::export_human_sheets(manifest, out_dir, opts);
    if (rows_out) *rows_out = rows;
  });
}

hb_status hb_score_human(const char* answer_key, const char* const* answers_paths,
                         size_t n_answers, const char* label, char** text_out, char** csv_out) {
  return guarded([&] {
    require(answer_key, "answer_key");
    require(text_out, "text_out");
    if (n_answers > 0) require(answers_paths, "answers_paths");
    const auto report = hb::score_human(hb::read_answer_key(answer_key),
                                        read_all_answers(answers_paths, n_answers),
                                        label ? label : "Human eval.");
    emit_report({report}, text_out, csv_out);
  });
}

hb_status hb_annotation_server_create(const hb_annotation_options* options,
                                      hb_annotation_server** out) {
  return guarded([&] {
    require(options, "options");
    require(options->sheets_dir, "sheets_dir");
    require(out, "out");
    hb::AnnotationServerOptions o;
    o.sheets_dir = options->sheets_dir;
    o.images_dir = options->images_dir ? options->images_dir : options->sheets_dir;
    if (options->app_dir) o.app_dir = options->app_dir;
    if (options->host) o.host = options->host;
    o.port = options->port;
    auto handle = std::make_unique<hb_annotation_server>();
    handle->server = std::make_unique<hb::AnnotationServer>(o);
    *out = handle.release();
  });
}

hb_status hb_annotation_server_bind(hb_annotation_server* server, int* port_out) {
  return guarded([&] {
    require(server, "server");
    const int port = server->server->bind();
    if (port_out) *port_out = port;
  });
}

hb_status hb_annotation_server_run(hb_annotation_server* server) {
  return guarded([&] {
    require(server, "server");
    server->server->run();
  });
}

void hb_annotation_server_stop(hb_annotation_server* server) {
  if (server) server->server->stop();
}

void hb_annotation_server_destroy(hb_annotation_server* server) { delete server; }

}  // extern "C"
