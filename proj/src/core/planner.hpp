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

// Scenario planning: turns (item, scenario, category) into an ordered list of
// mask-conditioned edit steps. Planning is pure and deterministic.

#ifndef HAZARDBENCH_CORE_PLANNER_HPP_
#define HAZARDBENCH_CORE_PLANNER_HPP_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/bench_item.hpp"
#include "core/geometry.hpp"

namespace hb {

enum class ObjectCategory {
  kHuman, kMotorcycle, kBicycle, kCone,
  kRocks, kDebris, kRoadkill, kDog, kCat, kDeer, kFox, kPig, kRaccoon,
};

inline constexpr std::array<ObjectCategory, 13> kAllCategories = {
    ObjectCategory::kHuman, ObjectCategory::kMotorcycle, ObjectCategory::kBicycle,
    ObjectCategory::kCone,  ObjectCategory::kRocks,      ObjectCategory::kDebris,
    ObjectCategory::kRoadkill, ObjectCategory::kDog,     ObjectCategory::kCat,
    ObjectCategory::kDeer,  ObjectCategory::kFox,        ObjectCategory::kPig,
    ObjectCategory::kRaccoon};

enum class CategoryClass { kCommon, kAnomalous };
enum class Mobility { kMovable, kStatic };

struct CategoryInfo {
  ObjectCategory id;
  std::string_view name;  // lower-case, as rendered into prompts
  CategoryClass cls;
  Mobility mobility;
};

const CategoryInfo& category_info(ObjectCategory c);
inline std::string_view category_name(ObjectCategory c) { return category_info(c).name; }
std::optional<ObjectCategory> parse_category(std::string_view name);

enum class ScenarioKind { kStatic, kMotion, kIntrusion, kDistance };

inline constexpr std::array<ScenarioKind, 4> kAllScenarios = {
    ScenarioKind::kStatic, ScenarioKind::kMotion, ScenarioKind::kIntrusion,
    ScenarioKind::kDistance};

std::string_view scenario_name(ScenarioKind s);
std::optional<ScenarioKind> parse_scenario(std::string_view name);

enum class Orientation { kFacingLeft, kFacingRight, kFacingForward, kFacingBackward };

std::string_view orientation_text(Orientation o);  // "facing left", ...
std::optional<Orientation> parse_orientation(std::string_view text);

enum class EditMode { kDefault, kMotion, kIntrusion, kDistance };

std::string_view edit_mode_name(EditMode m);

struct EditStep {
  MaskRegion mask;  // padded frame for intrusion steps
  std::string prompt;
  Orientation orientation = Orientation::kFacingForward;
  EditMode mode = EditMode::kDefault;
  std::optional<PadSpec> pad;
  bool distance_suffix = false;
};

struct EditPlan {
  std::string item_id;
  ScenarioKind scenario = ScenarioKind::kStatic;
  ObjectCategory category = ObjectCategory::kHuman;
  Action gt_action = Action::kCenter;
  ImageDims dims;
  std::vector<EditStep> steps;
};

// "Render a {name}, {orientation}."
std::string build_prompt(ObjectCategory category, Orientation orientation);
// The prompt actually sent to the editor; distance steps get the shrink suffix.
std::string effective_prompt(const EditStep& step);

// False exactly for static-mobility categories in motion/intrusion scenarios.
bool eligibility(ObjectCategory category, ScenarioKind scenario);

EditPlan plan_static(const BenchItem& item, ObjectCategory category, const ImageDims& dims);
EditPlan plan_motion(const BenchItem& item, ObjectCategory category, const ImageDims& dims,
                     const GeometryConfig& cfg);
EditPlan plan_intrusion(const BenchItem& item, ObjectCategory category,
                        const ImageDims& dims, const GeometryConfig& cfg);
EditPlan plan_distance(const BenchItem& item, ObjectCategory category,
                       const ImageDims& dims, const GeometryConfig& cfg, double vp_y);

// Dispatches on `scenario`. Inapplicable combinations throw hb::Error with
// kScenarioInapplicable or kCategoryInapplicable. `vp_y` is only read for
// distance plans.
EditPlan plan_scenario(ScenarioKind scenario, const BenchItem& item, ObjectCategory category,
                       const ImageDims& dims, const GeometryConfig& cfg, double vp_y);

// Checks step invariants and the ground-truth region rule: no step other than
// the single distance step may touch the GT region (intrusion masks are
// checked after the crop). Throws kConfiguration on violation.
void validate_plan(const EditPlan& plan);

}  // namespace hb

#endif  // HAZARDBENCH_CORE_PLANNER_HPP_
