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

// Multiple-choice evaluation of an answerer over a benchmark manifest.

#ifndef HAZARDBENCH_CORE_EVALUATOR_HPP_
#define HAZARDBENCH_CORE_EVALUATOR_HPP_

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "core/backends.hpp"
#include "core/manifest.hpp"

namespace hb {

// Question plus the fixed A/B/C option block. Throws kInvalidArgument for an
// empty question.
std::string build_question(const BenchmarkEntry& entry);

// (1) first word-bounded uppercase A, B or C; (2) first "go left",
// "go straight" or "go right", case-insensitive; (3) nothing.
std::optional<Action> parse_answer(std::string_view raw);

struct EvalResult {
  std::string item_id;
  std::string model;
  std::string raw;
  std::optional<Action> parsed;
  bool correct = false;
  std::int64_t ms = 0;
  std::optional<std::string> error;
};

std::string result_to_json(const EvalResult& r);
EvalResult result_from_json(const std::string& line);
std::vector<EvalResult> read_results(const std::string& path);

struct EvaluateOptions {
  std::string model = "model";
  int concurrency = 4;
  int max_attempts = 2;  // per item, on retryable errors
  bool record_latency = true;
  // Empty sets select everything. "none" selects original items.
  std::set<std::string> scenarios;
  std::set<std::string> categories;
  std::set<std::string> sources;
  const std::atomic<bool>* stop = nullptr;
  std::function<void(const std::string&)> log;
};

bool entry_selected(const BenchmarkEntry& e, const EvaluateOptions& options);

// Asks every selected item once (bounded concurrency), appends each result
// to results_path as it lands, then rewrites the file sorted by item id.
std::vector<EvalResult> evaluate(const std::string& manifest_path, Answerer& answerer,
                                 const EvaluateOptions& options, const std::string& results_path);

// Option letter for an action: A, B or C.
char option_letter(Action a);

}  // namespace hb

#endif  // HAZARDBENCH_CORE_EVALUATOR_HPP_
