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

// Accuracy aggregation and the three report layouts: by scenario, by object
// category and by source benchmark.

#ifndef HAZARDBENCH_CORE_REPORT_HPP_
#define HAZARDBENCH_CORE_REPORT_HPP_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/evaluator.hpp"
#include "core/manifest.hpp"

namespace hb {

struct Cell {
  int correct = 0;
  int total = 0;

  void add(bool ok) {
    ++total;
    if (ok) ++correct;
  }
  bool empty() const { return total == 0; }
  double percent() const { return total == 0 ? 0.0 : 100.0 * correct / total; }
  friend bool operator==(const Cell&, const Cell&) = default;
};

// "%.1f" of the value, or "-" when absent.
std::string format_percent(std::optional<double> value);
std::string format_cell(const Cell& c);

// One scored question, stripped to what aggregation needs.
struct Outcome {
  std::optional<ScenarioKind> scenario;  // nullopt: original image
  std::optional<ObjectCategory> category;
  SourceTag source;
  bool correct = false;
};

struct ModelReport {
  std::string model;
  // Reference rows (e.g. human annotators) are shown but kept out of averages.
  bool reference = false;
  Cell no_edit;
  std::array<Cell, 4> scenario{};
  std::array<Cell, 13> category{};
  Cell normal;
  Cell anomalous;
  Cell overall;  // edited items only
  std::map<std::string, Cell> source;  // edited items only
};

ModelReport aggregate(const std::string& model, const std::vector<Outcome>& outcomes);

// Joins results with the manifest. Results for unknown items are an error
// (kNotFound); manifest items without a result are not counted.
std::vector<Outcome> outcomes_for(const std::vector<BenchmarkEntry>& entries,
                                  const std::vector<EvalResult>& results);

struct RenderedReport {
  std::string text;
  std::string csv;  // table,model,column,correct,total,accuracy
};

RenderedReport render_report(const std::vector<ModelReport>& models);

}  // namespace hb

#endif  // HAZARDBENCH_CORE_REPORT_HPP_
