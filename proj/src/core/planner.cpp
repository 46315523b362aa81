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

#include "core/planner.hpp"

#include "core/error.hpp"
#include "core/prompts.hpp"

namespace hb {

namespace {

constexpr std::array<CategoryInfo, 13> kCategoryTable = {{
    {ObjectCategory::kHuman, "human", CategoryClass::kCommon, Mobility::kMovable},
    {ObjectCategory::kMotorcycle, "motorcycle", CategoryClass::kCommon, Mobility::kMovable},
    {ObjectCategory::kBicycle, "bicycle", CategoryClass::kCommon, Mobility::kMovable},
    {ObjectCategory::kCone, "cone", CategoryClass::kCommon, Mobility::kStatic},
    {ObjectCategory::kRocks, "rocks", CategoryClass::kAnomalous, Mobility::kStatic},
    {ObjectCategory::kDebris, "debris", CategoryClass::kAnomalous, Mobility::kStatic},
    {ObjectCategory::kRoadkill, "roadkill", CategoryClass::kAnomalous, Mobility::kStatic},
    {ObjectCategory::kDog, "dog", CategoryClass::kAnomalous, Mobility::kMovable},
    {ObjectCategory::kCat, "cat", CategoryClass::kAnomalous, Mobility::kMovable},
    {ObjectCategory::kDeer, "deer", CategoryClass::kAnomalous, Mobility::kMovable},
    {ObjectCategory::kFox, "fox", CategoryClass::kAnomalous, Mobility::kMovable},
    {ObjectCategory::kPig, "pig", CategoryClass::kAnomalous, Mobility::kMovable},
    {ObjectCategory::kRaccoon, "raccoon", CategoryClass::kAnomalous, Mobility::kMovable},
}};

EditStep make_step(const MaskRegion& mask, ObjectCategory category, Orientation orientation,
                   EditMode mode) {
  EditStep step;
  step.mask = mask;
  step.prompt = build_prompt(category, orientation);
  step.orientation = orientation;
  step.mode = mode;
  step.distance_suffix = mode == EditMode::kDistance;
  return step;
}

EditPlan make_plan(const BenchItem& item, ScenarioKind scenario, ObjectCategory category,
                   const ImageDims& dims) {
  EditPlan plan;
  plan.item_id = item.item_id;
  plan.scenario = scenario;
  plan.category = category;
  plan.gt_action = item.gt_action;
  plan.dims = dims;
  return plan;
}

void require_movable(ObjectCategory category, ScenarioKind scenario) {
  if (!eligibility(category, scenario)) {
    throw Error(ErrorCode::kCategoryInapplicable,
                std::string(category_name(category)) + " cannot appear in the " +
                    std::string(scenario_name(scenario)) + " scenario");
  }
}

// Front-facing default edits in every region except the ground truth, L->C->R.
void add_near_objects(EditPlan& plan, ObjectCategory category) {
  const auto regions = split_regions(plan.dims);
  for (Action a : kAllActions) {
    if (a == plan.gt_action) continue;
    plan.steps.push_back(make_step(regions[static_cast<std::size_t>(a)], category,
                                   Orientation::kFacingForward, EditMode::kDefault));
  }
}

EditStep make_intrusion_step(Edge side, ObjectCategory category, const ImageDims& dims,
                             const GeometryConfig& cfg) {
  // The object faces into the frame.
  const Orientation facing =
      side == Edge::kLeft ? Orientation::kFacingRight : Orientation::kFacingLeft;
  EditStep step = make_step(intrusion_mask(side, dims, cfg), category, facing,
                            EditMode::kIntrusion);
  step.pad = PadSpec{side, cfg.pad_width};
  return step;
}

}  // namespace

const CategoryInfo& category_info(ObjectCategory c) {
  return kCategoryTable[static_cast<std::size_t>(c)];
}

std::optional<ObjectCategory> parse_category(std::string_view name) {
  for (const auto& info : kCategoryTable) {
    if (info.name == name) return info.id;
  }
  return std::nullopt;
}

std::string_view scenario_name(ScenarioKind s) {
  switch (s) {
    case ScenarioKind::kStatic: return "static";
    case ScenarioKind::kMotion: return "motion";
    case ScenarioKind::kIntrusion: return "intrusion";
    case ScenarioKind::kDistance: return "distance";
  }
  return "";
}

std::optional<ScenarioKind> parse_scenario(std::string_view name) {
  for (ScenarioKind s : kAllScenarios) {
    if (scenario_name(s) == name) return s;
  }
  return std::nullopt;
}

std::string_view orientation_text(Orientation o) {
  switch (o) {
    case Orientation::kFacingLeft: return "facing left";
    case Orientation::kFacingRight: return "facing right";
    case Orientation::kFacingForward: return "facing forward";
    case Orientation::kFacingBackward: return "facing backward";
  }
  return "";
}

std::optional<Orientation> parse_orientation(std::string_view text) {
  for (Orientation o : {Orientation::kFacingLeft, Orientation::kFacingRight,
                        Orientation::kFacingForward, Orientation::kFacingBackward}) {
    if (orientation_text(o) == text) return o;
  }
  return std::nullopt;
}

std::string_view edit_mode_name(EditMode m) {
  switch (m) {
    case EditMode::kDefault: return "default";
    case EditMode::kMotion: return "motion";
    case EditMode::kIntrusion: return "intrusion";
    case EditMode::kDistance: return "distance";
  }
  return "";
}

std::string build_prompt(ObjectCategory category, Orientation orientation) {
  std::string out = "Render a ";
  out += category_name(category);
  out += ", ";
  out += orientation_text(orientation);
  out += ".";
  return out;
}

std::string effective_prompt(const EditStep& step) {
  if (step.mode != EditMode::kDistance) return step.prompt;
  return step.prompt + std::string(kDistanceSuffix);
}

bool eligibility(ObjectCategory category, ScenarioKind scenario) {
  const bool moving_scenario =
      scenario == ScenarioKind::kMotion || scenario == ScenarioKind::kIntrusion;
  return !(moving_scenario && category_info(category).mobility == Mobility::kStatic);
}

EditPlan plan_static(const BenchItem& item, ObjectCategory category, const ImageDims& dims) {
  EditPlan plan = make_plan(item, ScenarioKind::kStatic, category, dims);
  add_near_objects(plan, category);
  return plan;
}

EditPlan plan_motion(const BenchItem& item, ObjectCategory category, const ImageDims& dims,
                     [[maybe_unused]] const GeometryConfig& cfg) {
  require_movable(category, ScenarioKind::kMotion);
  if (item.gt_action == Action::kCenter) {
    throw Error(ErrorCode::kScenarioInapplicable,
                "motion scenario needs a left or right ground truth (item " + item.item_id + ")");
  }
  EditPlan plan = make_plan(item, ScenarioKind::kMotion, category, dims);
  // The centred object heads away from the safe side.
  const Orientation facing = item.gt_action == Action::kRight ? Orientation::kFacingLeft
                                                              : Orientation::kFacingRight;
  plan.steps.push_back(make_step(region_for_action(Action::kCenter, dims), category, facing,
                                 EditMode::kMotion));
  return plan;
}

EditPlan plan_intrusion(const BenchItem& item, ObjectCategory category,
                        const ImageDims& dims, const GeometryConfig& cfg) {
  require_movable(category, ScenarioKind::kIntrusion);
  EditPlan plan = make_plan(item, ScenarioKind::kIntrusion, category, dims);
  const MaskRegion center = region_for_action(Action::kCenter, dims);
  switch (item.gt_action) {
    case Action::kLeft:
      plan.steps.push_back(
          make_step(center, category, Orientation::kFacingForward, EditMode::kDefault));
      plan.steps.push_back(make_intrusion_step(Edge::kRight, category, dims, cfg));
      break;
    case Action::kRight:
      plan.steps.push_back(make_intrusion_step(Edge::kLeft, category, dims, cfg));
      plan.steps.push_back(
          make_step(center, category, Orientation::kFacingForward, EditMode::kDefault));
      break;
    case Action::kCenter:
      plan.steps.push_back(make_intrusion_step(Edge::kLeft, category, dims, cfg));
      plan.steps.push_back(make_intrusion_step(Edge::kRight, category, dims, cfg));
      break;
  }
  return plan;
}

EditPlan plan_distance(const BenchItem& item, ObjectCategory category,
                       const ImageDims& dims, const GeometryConfig& cfg, double vp_y) {
  EditPlan plan = make_plan(item, ScenarioKind::kDistance, category, dims);
  add_near_objects(plan, category);
  const MaskRegion far =
      distance_mask(region_for_action(item.gt_action, dims), vp_y, dims, cfg);
  plan.steps.push_back(
      make_step(far, category, Orientation::kFacingForward, EditMode::kDistance));
  return plan;
}

EditPlan plan_scenario(ScenarioKind scenario, const BenchItem& item, ObjectCategory category,
                       const ImageDims& dims, const GeometryConfig& cfg, double vp_y) {
  EditPlan plan;
  switch (scenario) {
    case ScenarioKind::kStatic: plan = plan_static(item, category, dims); break;
    case ScenarioKind::kMotion: plan = plan_motion(item, category, dims, cfg); break;
    case ScenarioKind::kIntrusion: plan = plan_intrusion(item, category, dims, cfg); break;
    case ScenarioKind::kDistance:
      plan = plan_distance(item, category, dims, cfg, vp_y);
      break;
  }
  validate_plan(plan);
  return plan;
}

void validate_plan(const EditPlan& plan) {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::kConfiguration, "plan for " + plan.item_id + " (" +
                                               std::string(scenario_name(plan.scenario)) +
                                               "): " + what);
  };
  if (plan.steps.empty()) fail("no steps");
  const MaskRegion gt = region_for_action(plan.gt_action, plan.dims);
  int distance_steps = 0;
  for (const EditStep& step : plan.steps) {
    if ((step.mode == EditMode::kIntrusion) != step.pad.has_value()) {
      fail("intrusion steps and pad specs must coincide");
    }
    if ((step.mode == EditMode::kDistance) != step.distance_suffix) {
      fail("distance steps and the distance suffix must coincide");
    }
    if (step.prompt != build_prompt(plan.category, step.orientation)) {
      fail("prompt does not match category and orientation");
    }
    const int frame_width = step.mask.frame.width_for(plan.dims.width);
    step.mask.validate_within(frame_width, plan.dims.height);

    const std::optional<MaskRegion> visible = mask_after_crop(step.mask, plan.dims);
    if (!visible) fail("mask " + describe(step.mask) + " does not survive the crop");
    if (step.mode == EditMode::kDistance) {
      ++distance_steps;
      if (!gt.contains(*visible)) fail("distance mask leaves the ground-truth region");
    } else if (visible->intersects(gt)) {
      fail("mask " + describe(step.mask) + " touches the ground-truth region " + describe(gt));
    }
  }
  const int expected = plan.scenario == ScenarioKind::kDistance ? 1 : 0;
  if (distance_steps != expected) fail("unexpected number of distance steps");
}

}  // namespace hb
