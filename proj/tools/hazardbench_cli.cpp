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

// hazardbench command-line entry point. Talks to the library only through
// the C interface.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "hazardbench/hazardbench.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;

volatile std::sig_atomic_t g_interrupted = 0;

void on_sigint(int) {
  g_interrupted = 1;
  hb_request_stop();
}

void log_to_stderr(const char* line, void*) { std::fprintf(stderr, "%s\n", line); }

int report_error(hb_status s) {
  std::fprintf(stderr, "error: %s: %s\n", hb_status_name(s), hb_last_error());
  return kExitError;
}

bool write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) {
    std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
    return false;
  }
  return true;
}

// Owns a C string handed out by the library.
struct OwnedText {
  char* p = nullptr;
  ~OwnedText() { hb_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct ConfigHandle {
  hb_config* cfg = nullptr;
  ConfigHandle() {
    if (hb_config_create(&cfg) != HB_OK) cfg = nullptr;
  }
  ~ConfigHandle() { hb_config_destroy(cfg); }
};

// A flag that maps onto a config key and is applied only when given.
struct Binding {
  CLI::Option* opt = nullptr;
  std::string key;
  std::string value;
  bool is_switch = false;
  bool switch_value = false;
};

class Flags {
 public:
  void value(CLI::App* app, const std::string& name, const std::string& key,
             const std::string& help) {
    auto b = std::make_unique<Binding>();
    b->key = key;
    b->opt = app->add_option(name, b->value, help + " [" + key + "]");
    items_.push_back(std::move(b));
  }

  void toggle(CLI::App* app, const std::string& name, const std::string& key,
              const std::string& help) {
    auto b = std::make_unique<Binding>();
    b->key = key;
    b->is_switch = true;
    b->opt = app->add_flag(name, b->switch_value, help + " [" + key + "]");
    items_.push_back(std::move(b));
  }

  // defaults -> file -> env -> flags.
  hb_status apply(hb_config* cfg, const std::string& config_file,
                  const std::vector<std::string>& sets) const {
    hb_status s = HB_OK;
    if (!config_file.empty() && (s = hb_config_load_file(cfg, config_file.c_str())) != HB_OK) {
      return s;
    }
    if ((s = hb_config_apply_env(cfg)) != HB_OK) return s;
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
        return HB_CONFIGURATION;
      }
      if ((s = hb_config_set(cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str())) != HB_OK) {
        return s;
      }
    }
    for (const auto& b : items_) {
      if (b->opt->count() == 0) continue;
      const std::string v = b->is_switch ? (b->switch_value ? "true" : "false") : b->value;
      if ((s = hb_config_set(cfg, b->key.c_str(), v.c_str())) != HB_OK) return s;
    }
    return HB_OK;
  }

 private:
  std::vector<std::unique_ptr<Binding>> items_;
};

struct Common {
  std::string config_file;
  std::vector<std::string> sets;
  Flags flags;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_file, "TOML-style configuration file");
  app->add_option("--set", c.sets, "override any configuration key (key=value, repeatable)");
  c.flags.value(app, "--seed", "run.seed", "run seed");
}

void add_http_flags(CLI::App* app, Common& c) {
  c.flags.value(app, "--token", "auth.token", "bearer token for all endpoints");
  c.flags.value(app, "--timeout-ms", "http.timeout_ms", "per-request timeout");
  c.flags.value(app, "--max-in-flight", "http.max_in_flight", "concurrent requests per endpoint");
}

std::string describe_config_keys() {
  std::string out = "Configuration keys (file sections, --set or flags):\n";
  for (size_t i = 0; i < hb_config_key_count(); ++i) {
    const char* name = nullptr;
    const char* def = nullptr;
    const char* help = nullptr;
    if (hb_config_key_info(i, &name, &def, &help) != HB_OK) continue;
    char line[256];
    std::snprintf(line, sizeof(line), "  %-32s %s (default \"%s\")\n", name, help, def);
    out += line;
  }
  out += "Environment: HF_EDITOR_URL, HF_JUDGE_URL, HF_ANSWERER_URL, HF_TOKEN.\n";
  out += "Precedence: flags > environment > config file > defaults.\n";
  return out;
}

std::vector<const char*> c_strings(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hazard scenario benchmark generation and evaluation"};
  app.require_subcommand(1);
  app.footer(describe_config_keys());
  app.set_version_flag("--version", hb_version());

  // generate
  Common gen;
  std::string gen_source, gen_out, gen_scenarios = "all", gen_categories = "all";
  bool gen_originals = false;
  auto* generate = app.add_subcommand("generate", "synthesize scenario images from a source manifest");
  add_common(generate, gen);
  add_http_flags(generate, gen);
  generate->add_option("--source", gen_source, "source items.jsonl")->required();
  generate->add_option("--out", gen_out, "output directory")->required();
  generate->add_option("--scenarios", gen_scenarios,
                       "comma-separated: static,motion,intrusion,distance or all");
  generate->add_option("--categories", gen_categories, "comma-separated category names or all");
  generate->add_flag("--include-originals", gen_originals,
                     "also emit the unedited source images as benchmark items");
  gen.flags.value(generate, "--max-trials", "run.max_trials", "generate-and-check attempts per step");
  gen.flags.value(generate, "--workers", "run.workers", "items processed in parallel");
  gen.flags.toggle(generate, "--stub", "run.stub", "offline procedural editor and judge");
  gen.flags.value(generate, "--editor-url", "editor.url", "editor endpoint");
  gen.flags.value(generate, "--judge-url", "judge.url", "judge endpoint");
  gen.flags.value(generate, "--pad-width", "geometry.pad_width", "outpaint width r");
  gen.flags.value(generate, "--intrusion-half-width", "geometry.intrusion_half_width",
                  "intrusion half-width l");
  gen.flags.value(generate, "--distance-band", "geometry.distance_band", "distance band d");
  gen.flags.value(generate, "--failure-rate", "stub.failure_rate", "stub edit failure probability");
  gen.flags.value(generate, "--fail-first-trials", "stub.fail_first_trials",
                  "stub edits fail below this trial index");

  // stats
  std::string stats_manifest;
  auto* stats = app.add_subcommand("stats", "count benchmark items per scenario and category");
  stats->add_option("manifest", stats_manifest, "benchmark items.jsonl")->required();

  // evaluate
  Common ev;
  std::string ev_manifest, ev_results, ev_scenarios, ev_categories, ev_sources;
  auto* evaluate = app.add_subcommand("evaluate", "ask an answerer every benchmark question");
  add_common(evaluate, ev);
  add_http_flags(evaluate, ev);
  evaluate->add_option("--manifest", ev_manifest, "benchmark items.jsonl")->required();
  evaluate->add_option("--results", ev_results, "results.jsonl to write")->required();
  evaluate->add_option("--scenarios", ev_scenarios, "filter; 'none' selects originals");
  evaluate->add_option("--categories", ev_categories, "filter by category");
  evaluate->add_option("--sources", ev_sources, "filter by source benchmark");
  ev.flags.value(evaluate, "--model", "eval.model", "model tag written into results");
  ev.flags.value(evaluate, "--answerer-url", "answerer.url", "answerer endpoint");
  ev.flags.value(evaluate, "--answerer", "answerer.stub", "offline answerer: oracle, constant, scripted");
  ev.flags.value(evaluate, "--constant", "answerer.constant", "reply of the constant answerer");
  ev.flags.value(evaluate, "--script", "answerer.script", "JSON item_id -> reply file");
  ev.flags.value(evaluate, "--concurrency", "eval.concurrency", "concurrent asks");

  // report
  std::string rep_manifest, rep_key, rep_label = "Human eval.", rep_text, rep_csv;
  std::vector<std::string> rep_results, rep_human;
  auto* report = app.add_subcommand("report", "render accuracy tables from result files");
  report->add_option("--manifest", rep_manifest, "benchmark items.jsonl")->required();
  report->add_option("--results", rep_results, "results.jsonl files, one per model");
  report->add_option("--key", rep_key, "answer key for human rows");
  report->add_option("--human", rep_human, "human answer CSVs (row_id,answer)")->needs("--key");
  report->add_option("--human-label", rep_label, "row label for human answers");
  report->add_option("--out", rep_text, "write the text report here instead of stdout");
  report->add_option("--csv", rep_csv, "write machine-readable rows here");

  // export-sheets
  std::string ex_manifest, ex_out;
  int ex_sheets = 3, ex_per_group = 60;
  std::uint64_t ex_seed = 0;
  auto* export_sheets = app.add_subcommand("export-sheets", "sample human-evaluation sheets");
  export_sheets->add_option("--manifest", ex_manifest, "benchmark items.jsonl")->required();
  export_sheets->add_option("--out", ex_out, "output directory")->required();
  export_sheets->add_option("--sheets", ex_sheets, "number of sheets")->capture_default_str();
  export_sheets->add_option("--per-group", ex_per_group,
                            "rows per group (original, static, motion, intrusion, distance)")
      ->capture_default_str();
  export_sheets->add_option("--seed", ex_seed, "sampling seed")->capture_default_str();

  // score-human
  std::string sh_key, sh_label = "Human eval.", sh_csv;
  std::vector<std::string> sh_answers;
  auto* score_human = app.add_subcommand("score-human", "score annotator answers against the key");
  score_human->add_option("--key", sh_key, "answer_key.csv")->required();
  score_human->add_option("--answers", sh_answers, "answer CSVs (row_id,answer)")->required();
  score_human->add_option("--label", sh_label, "row label");
  score_human->add_option("--csv", sh_csv, "write machine-readable rows here");

  // serve-annotation
  Common sa;
  std::string sa_sheets, sa_images, sa_app;
  auto* serve = app.add_subcommand("serve-annotation", "host the annotation API and UI");
  add_common(serve, sa);
  serve->add_option("--sheets", sa_sheets, "directory with sheet_<k>.csv")->required();
  serve->add_option("--images", sa_images, "root that sheet image paths are relative to");
  serve->add_option("--app-dir", sa_app, "built UI assets served under /app");
  sa.flags.value(serve, "--host", "annotation.host", "bind address");
  sa.flags.value(serve, "--port", "annotation.port", "port (0 picks a free one)");

  // detect-vp
  std::vector<std::string> vp_images;
  std::string vp_dump_dir;
  auto* detect_vp = app.add_subcommand("detect-vp", "estimate the vanishing point of images");
  detect_vp->add_option("images", vp_images, "PNG files")->required();
  detect_vp->add_option("--dump", vp_dump_dir, "write <image>.vp.txt diagnostics here");

  // config
  Common cf;
  auto* show_config = app.add_subcommand("config", "print the resolved configuration");
  add_common(show_config, cf);
  add_http_flags(show_config, cf);

  CLI11_PARSE(app, argc, argv);

  hb_set_log_callback(log_to_stderr, nullptr);
  std::signal(SIGINT, on_sigint);
  std::signal(SIGTERM, on_sigint);

  ConfigHandle handle;
  if (!handle.cfg) return report_error(HB_INTERNAL);
  hb_status s = HB_OK;

  if (*generate) {
    if ((s = gen.flags.apply(handle.cfg, gen.config_file, gen.sets)) != HB_OK) return report_error(s);
    hb_generate_summary sum{};
    s = hb_generate(handle.cfg, gen_source.c_str(), gen_out.c_str(), gen_scenarios.c_str(),
                    gen_categories.c_str(), gen_originals ? 1 : 0, &sum);
    if (s != HB_OK) return report_error(s);
    std::printf(
        "attempted %d, resumed %d, success %d, partial_failure %d, failed %d, "
        "ineligible %d, inapplicable %d, outside-mask warnings %d, vp fallbacks %d\n",
        sum.attempted, sum.resumed, sum.success, sum.partial_failure, sum.failed, sum.ineligible,
        sum.inapplicable, sum.outside_mask_warnings, sum.vp_fallbacks);
    if (sum.interrupted) std::printf("interrupted; rerun the same command to resume\n");
    return sum.exit_code;
  }

  if (*stats) {
    OwnedText table;
    if ((s = hb_stats(stats_manifest.c_str(), &table.p)) != HB_OK) return report_error(s);
    std::fputs(table.p, stdout);
    return kExitOk;
  }

  if (*evaluate) {
    if ((s = ev.flags.apply(handle.cfg, ev.config_file, ev.sets)) != HB_OK) return report_error(s);
    hb_eval_summary sum{};
    s = hb_evaluate(handle.cfg, ev_manifest.c_str(), ev_results.c_str(), ev_scenarios.c_str(),
                    ev_categories.c_str(), ev_sources.c_str(), &sum);
    if (s != HB_OK) return report_error(s);
    std::printf("%d items, %d correct (%.1f%%), %d unparsed, %d errors\n", sum.total, sum.correct,
                sum.total ? 100.0 * sum.correct / sum.total : 0.0, sum.unparsed, sum.errors);
    return kExitOk;
  }

  if (*report) {
    const auto results = c_strings(rep_results);
    const auto human = c_strings(rep_human);
    OwnedText text, csv;
    s = hb_report(rep_manifest.c_str(), results.data(), results.size(),
                  rep_key.empty() ? nullptr : rep_key.c_str(), human.data(), human.size(),
                  rep_label.c_str(), &text.p, &csv.p);
    if (s != HB_OK) return report_error(s);
    if (rep_text.empty()) {
      std::fputs(text.p, stdout);
    } else if (!write_text(rep_text, text.str())) {
      return kExitError;
    }
    if (!rep_csv.empty() && !write_text(rep_csv, csv.str())) return kExitError;
    return kExitOk;
  }

  if (*export_sheets) {
    int rows = 0;
    s = hb_export_sheets(ex_manifest.c_str(), ex_out.c_str(), ex_sheets, ex_per_group, ex_seed,
                         &rows);
    if (s != HB_OK) return report_error(s);
    std::printf("wrote %d sheets, %d rows, answer key in %s\n", ex_sheets, rows, ex_out.c_str());
    return kExitOk;
  }

  if (*score_human) {
    const auto answers = c_strings(sh_answers);
    OwnedText text, csv;
    s = hb_score_human(sh_key.c_str(), answers.data(), answers.size(), sh_label.c_str(), &text.p,
                       &csv.p);
    if (s != HB_OK) return report_error(s);
    std::fputs(text.p, stdout);
    if (!sh_csv.empty() && !write_text(sh_csv, csv.str())) return kExitError;
    return kExitOk;
  }

  if (*serve) {
    if ((s = sa.flags.apply(handle.cfg, sa.config_file, sa.sets)) != HB_OK) return report_error(s);
    const char* host = nullptr;
    const char* port_text = nullptr;
    hb_config_get(handle.cfg, "annotation.host", &host);
    hb_config_get(handle.cfg, "annotation.port", &port_text);
    hb_annotation_options opts{};
    opts.sheets_dir = sa_sheets.c_str();
    opts.images_dir = sa_images.empty() ? nullptr : sa_images.c_str();
    opts.app_dir = sa_app.empty() ? nullptr : sa_app.c_str();
    opts.host = host;
    opts.port = std::stoi(port_text);
    hb_annotation_server* server = nullptr;
    if ((s = hb_annotation_server_create(&opts, &server)) != HB_OK) return report_error(s);
    int port = 0;
    if ((s = hb_annotation_server_bind(server, &port)) != HB_OK) {
      hb_annotation_server_destroy(server);
      return report_error(s);
    }
    std::printf("annotation server on http://%s:%d/app/\n", host, port);
    std::fflush(stdout);
    std::thread worker([server] { hb_annotation_server_run(server); });
    while (!g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    hb_annotation_server_stop(server);
    worker.join();
    hb_annotation_server_destroy(server);
    return kExitOk;
  }

  if (*detect_vp) {
    int rc = kExitOk;
    for (const auto& image : vp_images) {
      std::string dump;
      if (!vp_dump_dir.empty()) {
        std::filesystem::create_directories(vp_dump_dir);
        dump = (std::filesystem::path(vp_dump_dir) /
                (std::filesystem::path(image).filename().string() + ".vp.txt"))
                   .string();
      }
      hb_vp_result r{};
      s = hb_detect_vp(image.c_str(), dump.empty() ? nullptr : dump.c_str(), &r);
      if (s != HB_OK) {
        std::fprintf(stderr, "%s: error: %s: %s\n", image.c_str(), hb_status_name(s),
                     hb_last_error());
        rc = kExitError;
        continue;
      }
      if (r.found) {
        std::printf("%s: vp (%.1f, %.1f) support %d confidence %.3f\n", image.c_str(), r.x, r.y,
                    r.support, r.confidence);
      } else {
        std::printf("%s: not found, fallback y %.1f\n", image.c_str(), r.y_used);
      }
    }
    return rc;
  }

  if (*show_config) {
    if ((s = cf.flags.apply(handle.cfg, cf.config_file, cf.sets)) != HB_OK) return report_error(s);
    for (size_t i = 0; i < hb_config_key_count(); ++i) {
      const char* name = nullptr;
      const char* value = nullptr;
      const char* origin = nullptr;
      hb_config_key_info(i, &name, nullptr, nullptr);
      hb_config_get(handle.cfg, name, &value);
      hb_config_origin(handle.cfg, name, &origin);
      std::printf("%s = %s (%s)\n", name, value, origin);
    }
    return kExitOk;
  }
  return kExitOk;
}
