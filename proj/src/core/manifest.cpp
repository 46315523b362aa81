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

#include "core/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include "core/error.hpp"
#include "json.hpp"

namespace hb {

namespace {

using json = nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::kParse, what); }

json parse_object(const std::string& line) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) bad("invalid JSON");
  if (!j.is_object()) bad("expected a JSON object");
  return j;
}

std::string get_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) bad(std::string("missing string field '") + key + "'");
  return it->get<std::string>();
}

std::optional<std::string> get_optional_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) bad(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

Action get_action(const json& j, const char* key) {
  const std::string s = get_string(j, key);
  auto a = parse_action_name(s);
  if (!a) bad("unknown action '" + s + "' (expected left, center or right)");
  return *a;
}

ScenarioKind get_scenario(const json& j) {
  const std::string s = get_string(j, "scenario");
  auto v = parse_scenario(s);
  if (!v) bad("unknown scenario '" + s + "'");
  return *v;
}

ObjectCategory get_category(const json& j) {
  const std::string s = get_string(j, "category");
  auto v = parse_category(s);
  if (!v) bad("unknown category '" + s + "'");
  return *v;
}

std::string_view frame_name(const Frame& f) {
  switch (f.kind) {
    case Frame::Kind::kOriginal: return "original";
    case Frame::Kind::kPaddedLeft: return "padded_left";
    case Frame::Kind::kPaddedRight: return "padded_right";
  }
  return "";
}

json mask_to_json(const MaskRegion& m) {
  return {{"x_min", m.x_min}, {"x_max", m.x_max}, {"y_min", m.y_min},
          {"y_max", m.y_max}, {"frame", frame_name(m.frame)}, {"pad", m.frame.pad}};
}

MaskRegion mask_from_json(const json& j) {
  if (!j.is_object()) bad("mask must be an object");
  MaskRegion m;
  m.x_min = j.at("x_min").get<int>();
  m.x_max = j.at("x_max").get<int>();
  m.y_min = j.at("y_min").get<int>();
  m.y_max = j.at("y_max").get<int>();
  const std::string frame = j.at("frame").get<std::string>();
  const int pad = j.value("pad", 0);
  if (frame == "original") {
    m.frame = Frame::original();
  } else if (frame == "padded_left") {
    m.frame = Frame::padded(Edge::kLeft, pad);
  } else if (frame == "padded_right") {
    m.frame = Frame::padded(Edge::kRight, pad);
  } else {
    bad("unknown mask frame '" + frame + "'");
  }
  return m;
}

template <typename E, std::size_t N, typename NameFn>
E enum_from_name(const std::string& s, const std::array<E, N>& all, NameFn name,
                 const char* what) {
  for (E e : all) {
    if (name(e) == s) return e;
  }
  bad(std::string("unknown ") + what + " '" + s + "'");
}

constexpr std::array<Completeness, 3> kCompleteness = {
    Completeness::kNotGenerated, Completeness::kComplete, Completeness::kIncomplete};
constexpr std::array<Direction, 4> kDirections = {Direction::kLeft, Direction::kRight,
                                                  Direction::kForward, Direction::kBackward};
constexpr std::array<EditMode, 4> kModes = {EditMode::kDefault, EditMode::kMotion,
                                            EditMode::kIntrusion, EditMode::kDistance};
constexpr std::array<Orientation, 4> kOrientations = {
    Orientation::kFacingLeft, Orientation::kFacingRight, Orientation::kFacingForward,
    Orientation::kFacingBackward};
constexpr std::array<RecordStatus, 3> kStatuses = {
    RecordStatus::kSuccess, RecordStatus::kPartialFailure, RecordStatus::kFailed};

json trial_to_json(const TrialRecord& t) {
  json j = {{"seed", t.seed}, {"judge_raw", t.judge_raw}, {"accepted", t.accepted}};
  j["completeness"] = t.completeness ? json(completeness_name(*t.completeness)) : json(nullptr);
  j["direction"] = t.direction ? json(direction_name(*t.direction)) : json(nullptr);
  if (t.error) j["error"] = *t.error;
  return j;
}

TrialRecord trial_from_json(const json& j) {
  TrialRecord t;
  t.seed = j.at("seed").get<std::uint64_t>();
  t.judge_raw = j.at("judge_raw").get<std::vector<std::string>>();
  t.accepted = j.at("accepted").get<bool>();
  if (auto c = get_optional_string(j, "completeness")) {
    t.completeness = enum_from_name(*c, kCompleteness, completeness_name, "completeness");
  }
  if (auto d = get_optional_string(j, "direction")) {
    t.direction = enum_from_name(*d, kDirections, direction_name, "direction");
  }
  t.error = get_optional_string(j, "error");
  return t;
}

}  // namespace

SourceTag SourceTag::parse(std::string_view raw) {
  std::string key;
  for (char c : raw) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  if (key == "drivebench") return {"DriveBench"};
  if (key == "sabench") return {"SA-Bench"};
  if (raw.empty()) return {};
  return {std::string(raw)};
}

void for_each_jsonl_line(const std::string& path,
                         const std::function<void(const std::string&, int)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (std::all_of(line.begin(), line.end(),
                    [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    try {
      fn(line, number);
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, path + ":" + std::to_string(number) + ": " + e.what());
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kParse, path + ":" + std::to_string(number) + ": " + e.what());
    }
  }
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

std::vector<BenchItem> read_source_manifest(const std::string& path) {
  std::vector<BenchItem> items;
  std::set<std::string> seen;
  for_each_jsonl_line(path, [&](const std::string& line, int) {
    const json j = parse_object(line);
    BenchItem item;
    item.item_id = get_string(j, "id");
    if (item.item_id.empty()) bad("empty id");
    if (item.item_id.find("__") != std::string::npos || item.item_id.find('/') != std::string::npos) {
      bad("id '" + item.item_id + "' may not contain '__' or '/'");
    }
    if (!seen.insert(item.item_id).second) bad("duplicate id '" + item.item_id + "'");
    item.image_ref = get_string(j, "image");
    item.question = get_string(j, "question");
    item.gt_action = get_action(j, "gt");
    item.source = SourceTag::parse(get_optional_string(j, "source").value_or(""));
    items.push_back(std::move(item));
  });
  return items;
}

std::string source_item_to_json(const BenchItem& item) {
  json j = {{"id", item.item_id},
            {"image", item.image_ref},
            {"question", item.question},
            {"gt", action_name(item.gt_action)},
            {"source", item.source.name}};
  return j.dump();
}

std::string_view record_status_name(RecordStatus s) {
  switch (s) {
    case RecordStatus::kSuccess: return "success";
    case RecordStatus::kPartialFailure: return "partial_failure";
    case RecordStatus::kFailed: return "failed";
  }
  return "";
}

std::string record_id(const std::string& item_id, ScenarioKind scenario,
                      ObjectCategory category) {
  return item_id + "__" + std::string(scenario_name(scenario)) + "__" +
         std::string(category_name(category));
}

std::string record_to_json(const GenerationRecord& rec) {
  json steps = json::array();
  for (const auto& s : rec.steps) {
    json trials = json::array();
    for (const auto& t : s.trials) trials.push_back(trial_to_json(t));
    json step = {{"prompt", s.prompt},
                 {"mask", mask_to_json(s.mask)},
                 {"mode", edit_mode_name(s.mode)},
                 {"orientation", orientation_text(s.orientation)},
                 {"trials_used", s.trials_used},
                 {"trials", trials},
                 {"accepted", s.accepted}};
    if (s.pad) step["pad"] = {{"side", edge_name(s.pad->side)}, {"pixels", s.pad->pixels}};
    steps.push_back(std::move(step));
  }
  json j = {{"id", rec.id},
            {"item_id", rec.item_id},
            {"scenario", scenario_name(rec.scenario)},
            {"category", category_name(rec.category)},
            {"gt", action_name(rec.gt_action)},
            {"source", rec.source.name},
            {"question", rec.question},
            {"source_image", rec.source_image},
            {"seed", rec.seed},
            {"steps", steps},
            {"status", record_status_name(rec.status)},
            {"output_image", rec.output_image},
            {"outside_mask_warnings", rec.outside_mask_warnings}};
  if (rec.vp) {
    j["vp"] = {{"x", rec.vp->x},
               {"y", rec.vp->y},
               {"support", rec.vp->support},
               {"confidence", rec.vp->confidence},
               {"fallback", rec.vp->fallback}};
  }
  if (rec.error) j["error"] = *rec.error;
  if (rec.started_at) j["started_at"] = *rec.started_at;
  if (rec.finished_at) j["finished_at"] = *rec.finished_at;
  return j.dump();
}

GenerationRecord record_from_json(const std::string& line) {
  const json j = parse_object(line);
  GenerationRecord rec;
  rec.id = get_string(j, "id");
  rec.item_id = get_string(j, "item_id");
  rec.scenario = get_scenario(j);
  rec.category = get_category(j);
  rec.gt_action = get_action(j, "gt");
  rec.source = SourceTag::parse(get_string(j, "source"));
  rec.question = get_string(j, "question");
  rec.source_image = get_string(j, "source_image");
  rec.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& s : j.at("steps")) {
    StepRecord step;
    step.prompt = get_string(s, "prompt");
    step.mask = mask_from_json(s.at("mask"));
    step.mode = enum_from_name(get_string(s, "mode"), kModes, edit_mode_name, "mode");
    step.orientation = enum_from_name(get_string(s, "orientation"), kOrientations,
                                      orientation_text, "orientation");
    step.trials_used = s.at("trials_used").get<int>();
    for (const auto& t : s.at("trials")) step.trials.push_back(trial_from_json(t));
    step.accepted = s.at("accepted").get<bool>();
    if (s.contains("pad")) {
      const json& p = s["pad"];
      step.pad = PadSpec{get_string(p, "side") == "left" ? Edge::kLeft : Edge::kRight,
                         p.at("pixels").get<int>()};
    }
    rec.steps.push_back(std::move(step));
  }
  rec.status = enum_from_name(get_string(j, "status"), kStatuses, record_status_name, "status");
  rec.output_image = get_string(j, "output_image");
  rec.outside_mask_warnings = j.value("outside_mask_warnings", 0);
  if (j.contains("vp")) {
    const json& v = j["vp"];
    rec.vp = VpRecord{v.at("x").get<double>(), v.at("y").get<double>(),
                      v.at("support").get<int>(), v.at("confidence").get<double>(),
                      v.at("fallback").get<bool>()};
  }
  rec.error = get_optional_string(j, "error");
  rec.started_at = get_optional_string(j, "started_at");
  rec.finished_at = get_optional_string(j, "finished_at");
  return rec;
}

std::vector<GenerationRecord> read_records(const std::string& path) {
  std::vector<GenerationRecord> out;
  for_each_jsonl_line(path, [&](const std::string& line, int) {
    out.push_back(record_from_json(line));
  });
  return out;
}

std::string entry_to_json(const BenchmarkEntry& e) {
  json j = {{"id", e.id},
            {"source_id", e.source_id},
            {"image", e.image},
            {"question", e.question},
            {"gt", action_name(e.gt_action)},
            {"source", e.source.name},
            {"scenario", e.scenario ? scenario_name(*e.scenario) : "none"}};
  j["category"] = e.category ? json(category_name(*e.category)) : json(nullptr);
  return j.dump();
}

BenchmarkEntry entry_from_json(const std::string& line) {
  const json j = parse_object(line);
  BenchmarkEntry e;
  e.id = get_string(j, "id");
  if (e.id.empty()) bad("empty id");
  e.source_id = get_optional_string(j, "source_id").value_or(e.id);
  e.image = get_string(j, "image");
  e.question = get_string(j, "question");
  e.gt_action = get_action(j, "gt");
  e.source = SourceTag::parse(get_optional_string(j, "source").value_or(""));
  const std::string scenario = get_optional_string(j, "scenario").value_or("none");
  if (scenario != "none") {
    e.scenario = get_scenario(j);
    e.category = get_category(j);
    if (!eligibility(*e.category, *e.scenario)) {
      bad(std::string(category_name(*e.category)) + " cannot appear in the " + scenario +
          " scenario");
    }
  }
  return e;
}

std::vector<BenchmarkEntry> read_benchmark(const std::string& path) {
  std::vector<BenchmarkEntry> out;
  std::set<std::string> seen;
  for_each_jsonl_line(path, [&](const std::string& line, int) {
    BenchmarkEntry e = entry_from_json(line);
    if (!seen.insert(e.id).second) bad("duplicate id '" + e.id + "'");
    out.push_back(std::move(e));
  });
  return out;
}

}  // namespace hb
