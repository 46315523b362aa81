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

// Human-evaluation sheets: sampling, CSV export and scoring.
//
// Files written by export_human_sheets:
//   sheet_<k>.csv    row_id,image,question,option_a,option_b,option_c
//   answer_key.csv   row_id,sheet,item_id,gt,scenario,category,source
// Annotators return answers as row_id,answer (A, B, C or blank).

#ifndef HAZARDBENCH_CORE_SHEETS_HPP_
#define HAZARDBENCH_CORE_SHEETS_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/manifest.hpp"
#include "core/report.hpp"

namespace hb {

enum class SheetGroup { kOriginal, kStatic, kMotion, kIntrusion, kDistance };
inline constexpr std::array<SheetGroup, 5> kAllSheetGroups = {
    SheetGroup::kOriginal, SheetGroup::kStatic, SheetGroup::kMotion, SheetGroup::kIntrusion,
    SheetGroup::kDistance};

std::string_view sheet_group_name(SheetGroup g);
SheetGroup sheet_group_of(const BenchmarkEntry& e);

struct SheetOptions {
  int sheets = 3;
  int per_group = 60;
  std::uint64_t seed = 0;
};

struct SheetRow {
  std::string row_id;  // s<k>-<nnn>
  int sheet = 1;
  BenchmarkEntry entry;
};

// Rows of each sheet in presentation order. Throws kInsufficientItems naming
// the first group that cannot fill sheets * per_group rows.
std::vector<std::vector<SheetRow>> plan_sheets(const std::vector<BenchmarkEntry>& entries,
                                               const SheetOptions& options);

std::string sheet_csv(const std::vector<SheetRow>& rows);
std::string answer_key_csv(const std::vector<std::vector<SheetRow>>& sheets);
std::string sheet_file_name(int sheet);  // "sheet_<k>.csv"

// Writes the sheets and the answer key; returns the number of rows written.
int export_human_sheets(const std::string& manifest_path, const std::string& out_dir,
                        const SheetOptions& options);

struct KeyRow {
  std::string row_id;
  int sheet = 1;
  std::string item_id;
  Action gt = Action::kCenter;
  std::optional<ScenarioKind> scenario;
  std::optional<ObjectCategory> category;
  SourceTag source;
};

std::vector<KeyRow> read_answer_key(const std::string& path);

// Scores the rows present in the answer files. Blank or unparseable answers
// are incorrect; a duplicate row id is kDuplicate, an unknown one kNotFound.
ModelReport score_human(const std::vector<KeyRow>& key,
                        const std::vector<std::pair<std::string, std::string>>& answers,
                        const std::string& label = "Human eval.");
std::vector<std::pair<std::string, std::string>> read_answers(const std::string& path);

}  // namespace hb

#endif  // HAZARDBENCH_CORE_SHEETS_HPP_
