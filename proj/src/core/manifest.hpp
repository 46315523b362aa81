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

// JSONL manifests: source items in, generation records and benchmark items
// out. Every reader reports malformed input as kParse with "path:line:".

#ifndef HAZARDBENCH_CORE_MANIFEST_HPP_
#define HAZARDBENCH_CORE_MANIFEST_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "core/backends.hpp"
#include "core/bench_item.hpp"
#include "core/geometry.hpp"
#include "core/planner.hpp"

namespace hb {

// Source manifest line: {id, image, question, gt, source}.
std::vector<BenchItem> read_source_manifest(const std::string& path);
std::string source_item_to_json(const BenchItem& item);

struct TrialRecord {
  std::uint64_t seed = 0;
  std::optional<Completeness> completeness;
  std::optional<Direction> direction;
  std::vector<std::string> judge_raw;
  std::optional<std::string> error;  // backend failure that consumed the trial
  bool accepted = false;
};

struct StepRecord {
  std::string prompt;  // effective prompt sent to the editor
  MaskRegion mask;
  EditMode mode = EditMode::kDefault;
  Orientation orientation = Orientation::kFacingForward;
  std::optional<PadSpec> pad;
  int trials_used = 0;
  std::vector<TrialRecord> trials;
  bool accepted = false;
};

struct VpRecord {
  double x = 0.0;  // detected position; zero when not found
  double y = 0.0;  // the y actually used for the distance band
  int support = 0;
  double confidence = 0.0;
  bool fallback = false;
};

enum class RecordStatus { kSuccess, kPartialFailure, kFailed };
std::string_view record_status_name(RecordStatus s);

struct GenerationRecord {
  std::string id;  // <item>__<scenario>__<category>
  std::string item_id;
  ScenarioKind scenario = ScenarioKind::kStatic;
  ObjectCategory category = ObjectCategory::kHuman;
  Action gt_action = Action::kCenter;
  SourceTag source;
  std::string question;
  std::string source_image;
  std::uint64_t seed = 0;
  std::vector<StepRecord> steps;
  std::optional<VpRecord> vp;
  RecordStatus status = RecordStatus::kFailed;
  std::string output_image;  // relative to the output dir; empty when Failed
  int outside_mask_warnings = 0;
  std::optional<std::string> error;  // item-level abort reason
  std::optional<std::string> started_at;
  std::optional<std::string> finished_at;
};

std::string record_id(const std::string& item_id, ScenarioKind scenario,
                      ObjectCategory category);

std::string record_to_json(const GenerationRecord& rec);
GenerationRecord record_from_json(const std::string& line);
std::vector<GenerationRecord> read_records(const std::string& path);

// One benchmark question. Originals carry scenario "none" and no category.
struct BenchmarkEntry {
  std::string id;
  std::string source_id;
  std::string image;  // relative to the manifest directory
  std::string question;
  Action gt_action = Action::kCenter;
  SourceTag source;
  std::optional<ScenarioKind> scenario;
  std::optional<ObjectCategory> category;

  bool is_original() const { return !scenario.has_value(); }
};

std::string entry_to_json(const BenchmarkEntry& e);
BenchmarkEntry entry_from_json(const std::string& line);
std::vector<BenchmarkEntry> read_benchmark(const std::string& path);

// Calls fn(line, line_number) for every non-blank line; exceptions thrown by
// fn are rethrown as kParse with the location prefixed.
void for_each_jsonl_line(const std::string& path,
                         const std::function<void(const std::string&, int)>& fn);

// Lines joined with '\n', trailing newline included when non-empty.
std::string join_lines(const std::vector<std::string>& lines);

}  // namespace hb

#endif  // HAZARDBENCH_CORE_MANIFEST_HPP_
