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

// Generate-and-check execution of edit plans and batch benchmark generation.

#ifndef HAZARDBENCH_CORE_ORCHESTRATOR_HPP_
#define HAZARDBENCH_CORE_ORCHESTRATOR_HPP_

#include <array>
#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "core/backends.hpp"
#include "core/manifest.hpp"
#include "core/planner.hpp"
#include "core/vp_detect.hpp"

namespace hb {

struct Backends {
  std::shared_ptr<Editor> editor;
  std::shared_ptr<ChatModel> judge;
};

// Mean absolute per-channel deviation outside the mask above which a step
// bumps the record's warning counter (2/255).
inline constexpr double kOutsideMaskTolerance = 2.0 / 255.0;

struct StepOutcome {
  Raster image;  // edited image when accepted, otherwise the input
  StepRecord record;
  int outside_mask_warnings = 0;
};

// Up to max_trials attempts of one step. Retryable backend errors consume a
// trial; any other hb::Error propagates and aborts the item.
StepOutcome run_step(const Raster& current, const EditStep& step, std::size_t step_index,
                     Editor& editor, Judge& judge, int max_trials, std::uint64_t item_seed);

struct PlanOutcome {
  GenerationRecord record;
  Raster image;  // final image; meaningless when the record is Failed
};

// Runs the steps in order, feeding each accepted output into the next step.
PlanOutcome run_plan(const BenchItem& item, const EditPlan& plan, const Raster& source,
                     const Backends& backends, int max_trials, std::uint64_t item_seed);

struct GenerateOptions {
  std::vector<ScenarioKind> scenarios{kAllScenarios.begin(), kAllScenarios.end()};
  std::vector<ObjectCategory> categories{kAllCategories.begin(), kAllCategories.end()};
  int max_trials = 3;
  std::uint64_t seed = 0;
  int workers = 1;
  // Zero fields fall back to the per-image defaults.
  GeometryConfig geometry{0, 0, 0.0};
  VpParams vp;
  bool include_originals = false;
  bool record_timestamps = false;
  const std::atomic<bool>* stop = nullptr;
  std::function<void(const std::string&)> log;
};

struct GenerateSummary {
  int attempted = 0;         // plans executed in this run
  int resumed = 0;           // existing records kept
  int ineligible = 0;        // (scenario, category) pairs filtered out
  int inapplicable = 0;      // (item, scenario, category) triples with no plan
  int success = 0;           // over the final corpus
  int partial_failure = 0;
  int failed = 0;
  int outside_mask_warnings = 0;
  int vp_fallbacks = 0;
  bool interrupted = false;
  std::vector<std::string> notices;

  // 0 when the corpus has a success or nothing was attempted, 2 otherwise.
  int exit_code() const;
};

// Reads the source manifest, runs every eligible (item, scenario, category)
// plan and writes images/, records.jsonl and items.jsonl under out_dir.
// Existing records are kept unless their image is missing.
GenerateSummary generate_benchmark(const std::string& source_manifest, const std::string& out_dir,
                                   const Backends& backends, const GenerateOptions& options);

// Resolves zero fields of `overrides` against the defaults for `dims`.
GeometryConfig resolve_geometry(const GeometryConfig& overrides, const ImageDims& dims);

struct StatsTable {
  std::array<std::array<int, 13>, 4> counts{};  // [scenario][category]
  int originals = 0;

  int row_total(ScenarioKind s) const;
  int column_total(ObjectCategory c) const;
  int grand_total() const;
};

StatsTable compute_stats(const std::vector<BenchmarkEntry>& entries);
// Scenario rows by category columns, "-" for ineligible cells, totals last.
std::string render_stats_table(const StatsTable& table);

}  // namespace hb

#endif  // HAZARDBENCH_CORE_ORCHESTRATOR_HPP_
