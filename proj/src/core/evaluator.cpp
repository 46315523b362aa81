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

#include "core/evaluator.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "core/error.hpp"
#include "core/prompts.hpp"
#include "json.hpp"

namespace hb {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

}  // namespace

char option_letter(Action a) { return static_cast<char>('A' + static_cast<int>(a)); }

std::string build_question(const BenchmarkEntry& entry) {
  if (entry.question.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "item " + entry.id + " has an empty question");
  }
  return mcq_prompt(entry.question, kOptionTexts);
}

std::optional<Action> parse_answer(std::string_view raw) {
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const char c = raw[i];
    if (c < 'A' || c > 'C') continue;
    const bool left_ok = i == 0 || !is_alnum(raw[i - 1]);
    const bool right_ok = i + 1 >= raw.size() || !is_alnum(raw[i + 1]);
    if (left_ok && right_ok) return static_cast<Action>(c - 'A');
  }
  std::string lower(raw);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  std::optional<Action> best;
  std::size_t best_pos = std::string::npos;
  for (Action a : kAllActions) {
    const std::size_t pos = lower.find(kOptionTexts[static_cast<std::size_t>(a)]);
    if (pos < best_pos) {
      best_pos = pos;
      best = a;
    }
  }
  return best;
}

std::string result_to_json(const EvalResult& r) {
  json j = {{"item_id", r.item_id}, {"model", r.model}, {"raw", r.raw},
            {"correct", r.correct}, {"ms", r.ms}};
  j["parsed"] = r.parsed ? json(action_name(*r.parsed)) : json(nullptr);
  if (r.error) j["error"] = *r.error;
  return j.dump();
}

EvalResult result_from_json(const std::string& line) {
  const json j = json::parse(line);
  if (!j.is_object()) throw Error(ErrorCode::kParse, "expected a JSON object");
  EvalResult r;
  r.item_id = j.at("item_id").get<std::string>();
  r.model = j.at("model").get<std::string>();
  r.raw = j.value("raw", std::string());
  r.correct = j.at("correct").get<bool>();
  r.ms = j.value("ms", std::int64_t{0});
  if (j.contains("parsed") && !j["parsed"].is_null()) {
    const std::string p = j["parsed"].get<std::string>();
    r.parsed = parse_action_name(p);
    if (!r.parsed) throw Error(ErrorCode::kParse, "unknown parsed action '" + p + "'");
  }
  if (j.contains("error") && j["error"].is_string()) r.error = j["error"].get<std::string>();
  if (r.correct && !r.parsed) throw Error(ErrorCode::kParse, "correct result without an answer");
  return r;
}

std::vector<EvalResult> read_results(const std::string& path) {
  std::vector<EvalResult> out;
  for_each_jsonl_line(path, [&](const std::string& line, int) {
    out.push_back(result_from_json(line));
  });
  return out;
}

bool entry_selected(const BenchmarkEntry& e, const EvaluateOptions& options) {
  const std::string scenario = e.scenario ? std::string(scenario_name(*e.scenario)) : "none";
  if (!options.scenarios.empty() && !options.scenarios.count(scenario)) return false;
  if (!options.categories.empty()) {
    if (!e.category || !options.categories.count(std::string(category_name(*e.category)))) {
      return false;
    }
  }
  if (!options.sources.empty() && !options.sources.count(e.source.name)) return false;
  return true;
}

std::vector<EvalResult> evaluate(const std::string& manifest_path, Answerer& answerer,
                                 const EvaluateOptions& options,
                                 const std::string& results_path) {
  if (options.concurrency < 1 || options.max_attempts < 1) {
    throw Error(ErrorCode::kConfiguration, "concurrency and attempts must be at least 1");
  }
  std::vector<BenchmarkEntry> entries;
  for (auto& e : read_benchmark(manifest_path)) {
    if (entry_selected(e, options)) entries.push_back(std::move(e));
  }
  std::sort(entries.begin(), entries.end(),
            [](const BenchmarkEntry& a, const BenchmarkEntry& b) { return a.id < b.id; });
  const fs::path base = fs::path(manifest_path).parent_path();

  std::ofstream append(results_path, std::ios::binary | std::ios::trunc);
  if (!append) throw Error(ErrorCode::kIo, "cannot write " + results_path);
  std::mutex mu;
  std::vector<std::optional<EvalResult>> slots(entries.size());
  std::atomic<std::size_t> next{0};

  auto run_one = [&](const BenchmarkEntry& e) {
    EvalResult r;
    r.item_id = e.id;
    r.model = options.model;
    const auto start = std::chrono::steady_clock::now();
    try {
      AskRequest req;
      req.item_id = e.id;
      req.question = e.question;
      build_question(e);  // validates
      for (std::size_t i = 0; i < 3; ++i) req.options[i] = std::string(kOptionTexts[i]);
      req.image = read_file_bytes((base / e.image).string());
      for (int attempt = 1;; ++attempt) {
        try {
          r.raw = answerer.ask(req);
          break;
        } catch (const Error& err) {
          if (!err.retryable() || attempt >= options.max_attempts) throw;
        }
      }
      r.parsed = parse_answer(r.raw);
      r.correct = r.parsed && *r.parsed == e.gt_action;
    } catch (const Error& err) {
      r.error = std::string(error_code_name(err.code())) + ": " + err.what();
      r.correct = false;
    }
    if (options.record_latency) {
      r.ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                 std::chrono::steady_clock::now() - start)
                 .count();
    }
    return r;
  };

  auto worker = [&] {
    for (;;) {
      if (options.stop && options.stop->load()) return;
      const std::size_t i = next++;
      if (i >= entries.size()) return;
      EvalResult r = run_one(entries[i]);
      std::lock_guard lock(mu);
      append << result_to_json(r) << '\n';
      append.flush();
      if (options.log) options.log(r.item_id + (r.correct ? ": correct" : ": incorrect"));
      slots[i] = std::move(r);
    }
  };
  const int width =
      std::max(1, std::min<int>(options.concurrency, static_cast<int>(entries.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < width; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  append.close();

  std::vector<EvalResult> results;
  std::vector<std::string> lines;
  for (auto& s : slots) {
    if (!s) continue;
    lines.push_back(result_to_json(*s));
    results.push_back(std::move(*s));
  }
  write_file_atomic(results_path, join_lines(lines));
  return results;
}

}  // namespace hb
