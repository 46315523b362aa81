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

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <set>

#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/evaluator.hpp"
#include "core/seeding.hpp"

namespace hb {

namespace {

namespace fs = std::filesystem;

// std::shuffle's draw sequence differs between standard libraries.
template <typename T>
void seeded_shuffle(std::vector<T>& v, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

std::string row_id_for(int sheet, int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "s%d-%03d", sheet, index);
  return buf;
}

}  // namespace

std::string_view sheet_group_name(SheetGroup g) {
  switch (g) {
    case SheetGroup::kOriginal: return "original";
    case SheetGroup::kStatic: return "static";
    case SheetGroup::kMotion: return "motion";
    case SheetGroup::kIntrusion: return "intrusion";
    case SheetGroup::kDistance: return "distance";
  }
  return "";
}

SheetGroup sheet_group_of(const BenchmarkEntry& e) {
  if (!e.scenario) return SheetGroup::kOriginal;
  return static_cast<SheetGroup>(static_cast<int>(*e.scenario) + 1);
}

std::string sheet_file_name(int sheet) { return "sheet_" + std::to_string(sheet) + ".csv"; }

std::vector<std::vector<SheetRow>> plan_sheets(const std::vector<BenchmarkEntry>& entries,
                                               const SheetOptions& options) {
  if (options.sheets < 1 || options.per_group < 1) {
    throw Error(ErrorCode::kInvalidArgument, "sheet count and per-group count must be positive");
  }
  std::array<std::vector<BenchmarkEntry>, 5> pools;
  for (const auto& e : entries) pools[static_cast<std::size_t>(sheet_group_of(e))].push_back(e);

  const std::size_t needed = static_cast<std::size_t>(options.sheets) * options.per_group;
  for (SheetGroup g : kAllSheetGroups) {
    const auto& pool = pools[static_cast<std::size_t>(g)];
    if (pool.size() < needed) {
      throw Error(ErrorCode::kInsufficientItems,
                  "group '" + std::string(sheet_group_name(g)) + "' has " +
                      std::to_string(pool.size()) + " items, " + std::to_string(needed) +
                      " needed");
    }
  }

  std::vector<std::vector<SheetRow>> sheets(static_cast<std::size_t>(options.sheets));
  for (SheetGroup g : kAllSheetGroups) {
    auto& pool = pools[static_cast<std::size_t>(g)];
    std::sort(pool.begin(), pool.end(),
              [](const BenchmarkEntry& a, const BenchmarkEntry& b) { return a.id < b.id; });
    seeded_shuffle(pool, mix_seed(options.seed, fnv1a64(sheet_group_name(g))));
    for (int k = 0; k < options.sheets; ++k) {
      for (int i = 0; i < options.per_group; ++i) {
        SheetRow row;
        row.sheet = k + 1;
        row.entry = pool[static_cast<std::size_t>(k) * options.per_group + i];
        sheets[static_cast<std::size_t>(k)].push_back(std::move(row));
      }
    }
  }
  for (int k = 0; k < options.sheets; ++k) {
    auto& rows = sheets[static_cast<std::size_t>(k)];
    seeded_shuffle(rows, mix_seed(options.seed, static_cast<std::uint64_t>(k + 1)));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      rows[i].row_id = row_id_for(k + 1, static_cast<int>(i + 1));
    }
  }
  return sheets;
}

std::string sheet_csv(const std::vector<SheetRow>& rows) {
  std::string out = csv_line({"row_id", "image", "question", "option_a", "option_b", "option_c"});
  for (const auto& r : rows) {
    out += csv_line({r.row_id, r.entry.image, r.entry.question, std::string(kOptionTexts[0]),
                     std::string(kOptionTexts[1]), std::string(kOptionTexts[2])});
  }
  return out;
}

std::string answer_key_csv(const std::vector<std::vector<SheetRow>>& sheets) {
  std::string out =
      csv_line({"row_id", "sheet", "item_id", "gt", "scenario", "category", "source"});
  for (const auto& rows : sheets) {
    for (const auto& r : rows) {
      const auto& e = r.entry;
      out += csv_line({r.row_id, std::to_string(r.sheet), e.id, std::string(action_name(e.gt_action)),
                       e.scenario ? std::string(scenario_name(*e.scenario)) : "none",
                       e.category ? std::string(category_name(*e.category)) : "",
                       e.source.name});
    }
  }
  return out;
}

int export_human_sheets(const std::string& manifest_path, const std::string& out_dir,
                        const SheetOptions& options) {
  const auto sheets = plan_sheets(read_benchmark(manifest_path), options);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + out_dir);
  int rows = 0;
  for (std::size_t k = 0; k < sheets.size(); ++k) {
    write_file_atomic((fs::path(out_dir) / sheet_file_name(static_cast<int>(k + 1))).string(),
                      sheet_csv(sheets[k]));
    rows += static_cast<int>(sheets[k].size());
  }
  write_file_atomic((fs::path(out_dir) / "answer_key.csv").string(), answer_key_csv(sheets));
  return rows;
}

std::vector<KeyRow> read_answer_key(const std::string& path) {
  const CsvTable t = read_csv_table(
      path, {"row_id", "sheet", "item_id", "gt", "scenario", "category", "source"});
  std::vector<KeyRow> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::string where = path + ": row " + std::to_string(i + 2) + ": ";
    KeyRow k;
    k.row_id = t.at(i, "row_id");
    if (!seen.insert(k.row_id).second) {
      throw Error(ErrorCode::kDuplicate, where + "duplicate row id '" + k.row_id + "'");
    }
    try {
      k.sheet = std::stoi(t.at(i, "sheet"));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParse, where + "bad sheet number");
    }
    k.item_id = t.at(i, "item_id");
    const auto gt = parse_action_name(t.at(i, "gt"));
    if (!gt) throw Error(ErrorCode::kParse, where + "bad gt '" + t.at(i, "gt") + "'");
    k.gt = *gt;
    const std::string& scenario = t.at(i, "scenario");
    if (scenario != "none") {
      k.scenario = parse_scenario(scenario);
      k.category = parse_category(t.at(i, "category"));
      if (!k.scenario || !k.category) {
        throw Error(ErrorCode::kParse, where + "bad scenario or category");
      }
    }
    k.source = SourceTag::parse(t.at(i, "source"));
    out.push_back(std::move(k));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> read_answers(const std::string& path) {
  const CsvTable t = read_csv_table(path, {"row_id", "answer"});
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    out.emplace_back(t.at(i, "row_id"), t.at(i, "answer"));
  }
  return out;
}

ModelReport score_human(const std::vector<KeyRow>& key,
                        const std::vector<std::pair<std::string, std::string>>& answers,
                        const std::string& label) {
  std::map<std::string, const KeyRow*> by_id;
  for (const auto& k : key) by_id[k.row_id] = &k;
  std::set<std::string> seen;
  std::vector<Outcome> outcomes;
  for (const auto& [row_id, answer] : answers) {
    auto it = by_id.find(row_id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kNotFound, "answer for unknown row '" + row_id + "'");
    }
    if (!seen.insert(row_id).second) {
      throw Error(ErrorCode::kDuplicate, "row '" + row_id + "' answered twice");
    }
    const KeyRow& k = *it->second;
    const auto parsed = parse_answer(answer);
    outcomes.push_back({k.scenario, k.category, k.source, parsed && *parsed == k.gt});
  }
  ModelReport r = aggregate(label, outcomes);
  r.reference = true;
  return r;
}

}  // namespace hb
