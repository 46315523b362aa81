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

#include "core/sheets.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>

#include "core/csv.hpp"
#include "core/error.hpp"
#include "test_util.hpp"

namespace hb {
namespace {

using hb_test::read_text;
using hb_test::TempDir;
using hb_test::write_text;

// `per_group` entries in each of the five sheet groups.
std::vector<BenchmarkEntry> grouped_entries(int per_group) {
  std::vector<BenchmarkEntry> out;
  for (SheetGroup g : kAllSheetGroups) {
    for (int i = 0; i < per_group; ++i) {
      BenchmarkEntry e;
      e.source_id = std::string(sheet_group_name(g)) + std::to_string(i);
      e.question = "Which way?";
      e.gt_action = static_cast<Action>(i % 3);
      if (g == SheetGroup::kOriginal) {
        e.id = e.source_id + "__none";
      } else {
        e.scenario = static_cast<ScenarioKind>(static_cast<int>(g) - 1);
        e.category = kAllCategories[static_cast<std::size_t>(i) % 3];  // all movable
        e.id = record_id(e.source_id, *e.scenario, *e.category);
      }
      e.image = "images/" + e.id + ".png";
      out.push_back(std::move(e));
    }
  }
  return out;
}

std::string write_manifest(const TempDir& dir, const std::vector<BenchmarkEntry>& entries) {
  std::string text;
  for (const auto& e : entries) text += entry_to_json(e) + "\n";
  write_text(dir.path() / "items.jsonl", text);
  return dir.str("items.jsonl");
}

TEST(PlanSheets, ThreeSheetsOfThreeHundredDisjoint) {
  const auto entries = grouped_entries(180);
  ASSERT_EQ(entries.size(), 900u);
  const auto sheets = plan_sheets(entries, SheetOptions{3, 60, 0});
  ASSERT_EQ(sheets.size(), 3u);
  std::set<std::string> ids;
  std::set<std::string> row_ids;
  for (int k = 0; k < 3; ++k) {
    ASSERT_EQ(sheets[k].size(), 300u);
    std::map<SheetGroup, int> per_group;
    for (const auto& row : sheets[k]) {
      EXPECT_EQ(row.sheet, k + 1);
      ++per_group[sheet_group_of(row.entry)];
      EXPECT_TRUE(ids.insert(row.entry.id).second) << "reused " << row.entry.id;
      EXPECT_TRUE(row_ids.insert(row.row_id).second);
      EXPECT_EQ(row.row_id.rfind("s" + std::to_string(k + 1) + "-", 0), 0u);
    }
    for (SheetGroup g : kAllSheetGroups) EXPECT_EQ(per_group[g], 60) << sheet_group_name(g);
  }
  EXPECT_EQ(ids.size(), 900u);
}

TEST(PlanSheets, SmallCaseAndDeterminism) {
  const auto entries = grouped_entries(10);
  const auto a = plan_sheets(entries, SheetOptions{1, 2, 5});
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].size(), 10u);
  EXPECT_EQ(sheet_csv(a[0]), sheet_csv(plan_sheets(entries, SheetOptions{1, 2, 5})[0]));
  // Input order does not matter; the seed does.
  auto reversed = entries;
  std::reverse(reversed.begin(), reversed.end());
  EXPECT_EQ(answer_key_csv(a), answer_key_csv(plan_sheets(reversed, SheetOptions{1, 2, 5})));
  EXPECT_NE(answer_key_csv(a), answer_key_csv(plan_sheets(entries, SheetOptions{1, 2, 6})));
}

TEST(PlanSheets, ShortfallNamesGroup) {
  auto entries = grouped_entries(10);
  entries.erase(std::remove_if(entries.begin(), entries.end(),
                               [](const BenchmarkEntry& e) {
                                 return sheet_group_of(e) == SheetGroup::kIntrusion &&
                                        e.source_id != "intrusion0";
                               }),
                entries.end());
  try {
    plan_sheets(entries, SheetOptions{1, 2, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientItems);
    EXPECT_NE(std::string(e.what()).find("intrusion"), std::string::npos) << e.what();
  }
  EXPECT_THROW(plan_sheets(grouped_entries(10), SheetOptions{0, 2, 0}), Error);
}

TEST(SheetCsv, NoAnswerColumns) {
  const auto sheets = plan_sheets(grouped_entries(4), SheetOptions{2, 1, 0});
  const std::string csv = sheet_csv(sheets[0]);
  EXPECT_EQ(csv.rfind("row_id,image,question,option_a,option_b,option_c\n", 0), 0u);
  // Option texts are "go left" etc.; a bare action name would be a GT leak.
  for (const char* leaked : {",gt", ",left", ",center", ",right"}) {
    EXPECT_EQ(csv.find(leaked), std::string::npos) << leaked;
  }
}

TEST(ExportSheets, WritesFilesAndKeyRoundTrips) {
  TempDir dir;
  const std::string manifest = write_manifest(dir, grouped_entries(10));
  const int rows = export_human_sheets(manifest, dir.str("sheets"), SheetOptions{2, 3, 1});
  EXPECT_EQ(rows, 30);
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "sheets/sheet_1.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "sheets/sheet_2.csv"));
  const auto key = read_answer_key(dir.str("sheets/answer_key.csv"));
  ASSERT_EQ(key.size(), 30u);
  const auto bench = read_benchmark(manifest);
  std::map<std::string, BenchmarkEntry> by_id;
  for (const auto& e : bench) by_id[e.id] = e;
  for (const auto& k : key) {
    const BenchmarkEntry& e = by_id.at(k.item_id);
    EXPECT_EQ(k.gt, e.gt_action);
    EXPECT_EQ(k.scenario, e.scenario);
    EXPECT_EQ(k.category, e.category);
  }
}

// Answers every row in `key` correctly except those listed in `wrong`.
std::vector<std::pair<std::string, std::string>> answers_for(const std::vector<KeyRow>& key,
                                                             std::set<std::size_t> wrong = {}) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < key.size(); ++i) {
    const Action a = wrong.count(i) ? static_cast<Action>((static_cast<int>(key[i].gt) + 1) % 3)
                                    : key[i].gt;
    out.emplace_back(key[i].row_id, std::string(1, option_letter(a)));
  }
  return out;
}

std::vector<KeyRow> four_row_key() {
  std::vector<KeyRow> key;
  for (int i = 0; i < 4; ++i) {
    KeyRow k;
    k.row_id = "s1-00" + std::to_string(i + 1);
    k.item_id = "item" + std::to_string(i);
    k.gt = static_cast<Action>(i % 3);
    k.scenario = ScenarioKind::kStatic;
    k.category = ObjectCategory::kDog;
    key.push_back(k);
  }
  return key;
}

TEST(ScoreHuman, AllCorrectAndOneWrong) {
  const auto key = four_row_key();
  const ModelReport all = score_human(key, answers_for(key));
  EXPECT_EQ(format_cell(all.overall), "100.0");
  EXPECT_TRUE(all.reference);
  EXPECT_EQ(all.model, "Human eval.");
  const ModelReport three = score_human(key, answers_for(key, {2}), "Annotator 1");
  EXPECT_EQ(format_cell(three.overall), "75.0");
  EXPECT_EQ(three.model, "Annotator 1");
}

TEST(ScoreHuman, BlankIsIncorrectAndErrorsAreTyped) {
  const auto key = four_row_key();
  auto answers = answers_for(key);
  answers[0].second = "";
  EXPECT_EQ(format_cell(score_human(key, answers).overall), "75.0");
  answers.push_back(answers[1]);
  try {
    score_human(key, answers);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicate);
  }
  try {
    score_human(key, {{"s9-001", "A"}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
}

TEST(ScoreHuman, ReadsAnswerFiles) {
  TempDir dir;
  write_text(dir.path() / "a.csv", "row_id,answer\ns1-001,A\ns1-002,\"B\"\r\ns1-003,\n");
  const auto answers = read_answers(dir.str("a.csv"));
  ASSERT_EQ(answers.size(), 3u);
  EXPECT_EQ(answers[1].second, "B");
  EXPECT_EQ(answers[2].second, "");
  write_text(dir.path() / "bad.csv", "id,choice\nx,A\n");
  EXPECT_THROW(read_answers(dir.str("bad.csv")), Error);
}

}  // namespace
}  // namespace hb
