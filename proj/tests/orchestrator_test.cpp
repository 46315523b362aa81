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

#include "core/orchestrator.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <memory>
#include <set>

#include "core/error.hpp"
#include "core/seeding.hpp"
#include "core/stub_backends.hpp"
#include "table_counts.hpp"
#include "test_util.hpp"

namespace hb {
namespace {

namespace fs = std::filesystem;
using hb_test::read_text;
using hb_test::TempDir;

Raster road(int w, int h) {
  Raster img(w, h, 3);
  for (int row = 0; row < h; ++row) {
    for (int col = 0; col < w; ++col) {
      auto* p = img.px(col, row);
      p[0] = static_cast<std::uint8_t>(60 + (col % 17));
      p[1] = static_cast<std::uint8_t>(70 + (row % 13));
      p[2] = 90;
    }
  }
  return img;
}

BenchItem item_with(Action gt) {
  return BenchItem{"item_a", "images/item_a.png", "Which way?", gt, SourceTag{}};
}

EditStep step_at(const MaskRegion& mask, ObjectCategory cat, Orientation o) {
  EditStep s;
  s.mask = mask;
  s.prompt = build_prompt(cat, o);
  s.orientation = o;
  return s;
}

bool inside(const MaskRegion& m, int col, int row, int height) {
  const int y = raster_row(row, height);
  return col >= m.x_min && col < m.x_max && y >= m.y_min && y < m.y_max;
}

// Returns the input unchanged for edit calls whose ordinal is in `drop`.
class DroppingEditor : public Editor {
 public:
  explicit DroppingEditor(std::set<int> drop) : drop_(std::move(drop)) {}
  PngBytes edit(const EditRequest& req) override {
    const int n = calls_++;
    return drop_.count(n) ? req.image : inner_.edit(req);
  }
  PngBytes outpaint(const OutpaintRequest& req) override { return inner_.outpaint(req); }

 private:
  StubEditor inner_;
  std::set<int> drop_;
  int calls_ = 0;
};

// Throws `code` on the first `n` edit calls.
class ThrowingEditor : public Editor {
 public:
  ThrowingEditor(ErrorCode code, int n) : code_(code), n_(n) {}
  PngBytes edit(const EditRequest& req) override {
    if (calls_++ < n_) throw Error(code_, "injected");
    return inner_.edit(req);
  }
  PngBytes outpaint(const OutpaintRequest& req) override { return inner_.outpaint(req); }

 private:
  StubEditor inner_;
  ErrorCode code_;
  int n_;
  int calls_ = 0;
};

TEST(RunStep, AcceptsOnThirdTrialAfterInjectedFailures) {
  const Raster img = road(120, 60);
  const MaskRegion mask = region_for_action(Action::kLeft, {120, 60});
  const EditStep step = step_at(mask, ObjectCategory::kDog, Orientation::kFacingLeft);
  StubEditor editor(FailureInjection{0.0, 2});
  Judge judge(std::make_shared<StubJudgeModel>());
  const StepOutcome out = run_step(img, step, 0, editor, judge, 3, 99);
  EXPECT_TRUE(out.record.accepted);
  EXPECT_EQ(out.record.trials_used, 3);
  ASSERT_EQ(out.record.trials.size(), 3u);
  EXPECT_EQ(out.record.trials[0].completeness, Completeness::kNotGenerated);
  EXPECT_EQ(out.record.trials[1].completeness, Completeness::kNotGenerated);
  EXPECT_FALSE(out.record.trials[1].accepted);
  EXPECT_TRUE(out.record.trials[2].accepted);
  EXPECT_EQ(out.record.trials[2].direction, Direction::kLeft);
  for (int t = 0; t < 3; ++t) {
    EXPECT_EQ(out.record.trials[t].seed, derive_trial_seed(99, 0, t));
  }
  EXPECT_EQ(editor.edit_calls(), 3);
  EXPECT_EQ(out.outside_mask_warnings, 0);
  int changed = 0;
  for (int row = 0; row < 60; ++row) {
    for (int col = 0; col < 120; ++col) {
      const bool same = std::equal(img.px(col, row), img.px(col, row) + 3, out.image.px(col, row));
      if (!inside(mask, col, row, 60)) {
        ASSERT_TRUE(same) << col << "," << row;
      } else if (!same) {
        ++changed;
      }
    }
  }
  EXPECT_GT(changed, 0);
}

TEST(RunStep, RejectsWhenEveryTrialFails) {
  const Raster img = road(120, 60);
  const EditStep step = step_at(region_for_action(Action::kRight, {120, 60}),
                                ObjectCategory::kCat, Orientation::kFacingForward);
  StubEditor editor(FailureInjection{0.0, 3});
  Judge judge(std::make_shared<StubJudgeModel>());
  const StepOutcome out = run_step(img, step, 1, editor, judge, 3, 5);
  EXPECT_FALSE(out.record.accepted);
  EXPECT_EQ(out.record.trials_used, 3);
  EXPECT_EQ(out.image, img);
}

TEST(RunStep, WrongDirectionIsRejected) {
  const Raster img = road(120, 60);
  const EditStep step = step_at(region_for_action(Action::kCenter, {120, 60}),
                                ObjectCategory::kDeer, Orientation::kFacingLeft);
  StubEditor editor;
  int calls = 0;
  Judge judge(std::make_shared<ScriptedChatModel>(
      [&](const std::vector<PngBytes>&, std::string_view) {
        return ++calls % 2 == 1 ? std::string("Complete.") : std::string("Right");
      }));
  const StepOutcome out = run_step(img, step, 0, editor, judge, 2, 1);
  EXPECT_FALSE(out.record.accepted);
  EXPECT_EQ(out.record.trials[0].direction, Direction::kRight);
  EXPECT_EQ(out.record.trials[1].judge_raw.size(), 2u);
  EXPECT_EQ(out.image, img);
}

TEST(RunStep, RetryableErrorConsumesTrial) {
  const Raster img = road(120, 60);
  const EditStep step = step_at(region_for_action(Action::kLeft, {120, 60}),
                                ObjectCategory::kPig, Orientation::kFacingRight);
  ThrowingEditor editor(ErrorCode::kTimeout, 1);
  Judge judge(std::make_shared<StubJudgeModel>());
  const StepOutcome out = run_step(img, step, 0, editor, judge, 3, 1);
  EXPECT_TRUE(out.record.accepted);
  EXPECT_EQ(out.record.trials_used, 2);
  ASSERT_TRUE(out.record.trials[0].error.has_value());
  EXPECT_NE(out.record.trials[0].error->find("injected"), std::string::npos);
}

TEST(RunStep, NonRetryableErrorPropagates) {
  const Raster img = road(120, 60);
  const EditStep step = step_at(region_for_action(Action::kLeft, {120, 60}),
                                ObjectCategory::kPig, Orientation::kFacingRight);
  ThrowingEditor editor(ErrorCode::kConfiguration, 1);
  Judge judge(std::make_shared<StubJudgeModel>());
  EXPECT_THROW(run_step(img, step, 0, editor, judge, 3, 1), Error);
  EXPECT_THROW(run_step(img, step, 0, editor, judge, 0, 1), Error);
}

TEST(RunStep, IntrusionCropsBackToOriginalSize) {
  const ImageDims dims{120, 60};
  const BenchItem item = item_with(Action::kLeft);
  const EditPlan plan =
      plan_intrusion(item, ObjectCategory::kDog, dims, GeometryConfig::defaults_for(dims));
  StubEditor editor;
  Judge judge(std::make_shared<StubJudgeModel>());
  Raster current = road(120, 60);
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const StepOutcome out = run_step(current, plan.steps[i], i, editor, judge, 3, 7);
    EXPECT_TRUE(out.record.accepted) << i;
    EXPECT_EQ(out.image.width, 120);
    EXPECT_EQ(out.image.height, 60);
    current = out.image;
  }
  EXPECT_GT(editor.outpaint_calls(), 0);
}

Backends stub_backends(std::shared_ptr<Editor> editor) {
  return Backends{std::move(editor), std::make_shared<StubJudgeModel>()};
}

TEST(RunPlan, SuccessKeepsEveryAcceptedEdit) {
  const ImageDims dims{150, 80};
  const BenchItem item = item_with(Action::kCenter);
  const EditPlan plan = plan_static(item, ObjectCategory::kCone, dims);
  ASSERT_GE(plan.steps.size(), 2u);
  const PlanOutcome out = run_plan(item, plan, road(150, 80), stub_backends(std::make_shared<StubEditor>()), 3, 11);
  EXPECT_EQ(out.record.status, RecordStatus::kSuccess);
  EXPECT_EQ(out.record.id, "item_a__static__cone");
  // Lineage: every accepted sprite survives into the final image.
  for (const EditStep& s : plan.steps) {
    const auto tag = read_sprite_tag(crop_to_mask(out.image, s.mask));
    ASSERT_TRUE(tag.has_value());
    EXPECT_EQ(tag->category, ObjectCategory::kCone);
  }
}

TEST(RunPlan, PartialAndFailedStatuses) {
  const ImageDims dims{150, 80};
  const BenchItem item = item_with(Action::kLeft);
  const EditPlan plan = plan_static(item, ObjectCategory::kRocks, dims);
  ASSERT_EQ(plan.steps.size(), 2u);
  const Raster src = road(150, 80);

  const PlanOutcome partial =
      run_plan(item, plan, src, stub_backends(std::make_shared<DroppingEditor>(std::set<int>{1})), 1, 3);
  EXPECT_EQ(partial.record.status, RecordStatus::kPartialFailure);
  EXPECT_TRUE(partial.record.steps[0].accepted);
  EXPECT_FALSE(partial.record.steps[1].accepted);
  EXPECT_TRUE(read_sprite_tag(crop_to_mask(partial.image, plan.steps[0].mask)).has_value());
  EXPECT_EQ(crop_to_mask(partial.image, plan.steps[1].mask), crop_to_mask(src, plan.steps[1].mask));

  const PlanOutcome failed =
      run_plan(item, plan, src, stub_backends(std::make_shared<DroppingEditor>(std::set<int>{0, 1})), 1, 3);
  EXPECT_EQ(failed.record.status, RecordStatus::kFailed);
  EXPECT_EQ(failed.image, src);

  const PlanOutcome mismatch =
      run_plan(item, plan, road(100, 80), stub_backends(std::make_shared<StubEditor>()), 1, 3);
  EXPECT_EQ(mismatch.record.status, RecordStatus::kFailed);
  ASSERT_TRUE(mismatch.record.error.has_value());
}

GenerateOptions fixture_options(std::uint64_t seed = 0) {
  GenerateOptions opt;
  opt.categories = {ObjectCategory::kDog, ObjectCategory::kCone};
  opt.seed = seed;
  return opt;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = read_text(e.path());
  }
  return files;
}

TEST(Generate, FixtureCountsAndDeterminism) {
  TempDir a, b;
  auto editor = std::make_shared<StubEditor>();
  const GenerateSummary sa =
      generate_benchmark(hb_test::fixture_manifest(), a.str(), stub_backends(editor), fixture_options());
  // 6 items x 6 eligible (scenario, category) pairs, minus motion on the two
  // centre-GT items.
  EXPECT_EQ(sa.ineligible, 2);
  EXPECT_EQ(sa.inapplicable, 2);
  EXPECT_EQ(sa.attempted, 34);
  EXPECT_EQ(sa.success, 34);
  EXPECT_EQ(sa.exit_code(), 0);
  EXPECT_EQ(sa.notices.size(), 2u);

  generate_benchmark(hb_test::fixture_manifest(), b.str(),
                     stub_backends(std::make_shared<StubEditor>()), fixture_options());
  const auto fa = snapshot(a.path());
  EXPECT_EQ(fa, snapshot(b.path()));
  EXPECT_EQ(fa.size(), 36u);  // 34 images + two manifests

  // Trial accounting: every trial is exactly one editor call.
  long trials = 0;
  long intrusion_trials = 0;
  for (const auto& rec : read_records(a.str("records.jsonl"))) {
    for (const auto& s : rec.steps) {
      trials += s.trials_used;
      if (s.mode == EditMode::kIntrusion) intrusion_trials += s.trials_used;
    }
  }
  EXPECT_EQ(trials, editor->edit_calls());
  EXPECT_EQ(intrusion_trials, editor->outpaint_calls());
}

TEST(Generate, SeedChangesRecords) {
  TempDir a, b;
  GenerateOptions o1 = fixture_options(0), o2 = fixture_options(1);
  o1.scenarios = o2.scenarios = {ScenarioKind::kStatic};
  generate_benchmark(hb_test::fixture_manifest(), a.str(), stub_backends(std::make_shared<StubEditor>()), o1);
  generate_benchmark(hb_test::fixture_manifest(), b.str(), stub_backends(std::make_shared<StubEditor>()), o2);
  EXPECT_NE(read_text(a.path() / "records.jsonl"), read_text(b.path() / "records.jsonl"));
  EXPECT_EQ(read_text(a.path() / "items.jsonl"), read_text(b.path() / "items.jsonl"));
}

TEST(Generate, ResumeRerunsOnlyMissing) {
  TempDir dir;
  GenerateOptions opt = fixture_options();
  opt.scenarios = {ScenarioKind::kStatic, ScenarioKind::kDistance};
  const GenerateSummary first = generate_benchmark(
      hb_test::fixture_manifest(), dir.str(), stub_backends(std::make_shared<StubEditor>()), opt);
  ASSERT_EQ(first.success, 24);
  const auto before = snapshot(dir.path());

  const auto records = read_records(dir.str("records.jsonl"));
  for (int i : {0, 7, 19}) fs::remove(dir.path() / records[i].output_image);
  auto editor = std::make_shared<StubEditor>();
  const GenerateSummary second =
      generate_benchmark(hb_test::fixture_manifest(), dir.str(), stub_backends(editor), opt);
  EXPECT_EQ(second.attempted, 3);
  EXPECT_EQ(second.resumed, 21);
  EXPECT_EQ(second.success, 24);
  EXPECT_EQ(snapshot(dir.path()), before);

  const GenerateSummary third = generate_benchmark(
      hb_test::fixture_manifest(), dir.str(), stub_backends(std::make_shared<StubEditor>()), opt);
  EXPECT_EQ(third.attempted, 0);
  EXPECT_EQ(third.resumed, 24);
}

TEST(Generate, AllFailingExitsTwo) {
  TempDir dir;
  GenerateOptions opt = fixture_options();
  opt.scenarios = {ScenarioKind::kStatic};
  opt.max_trials = 2;
  const GenerateSummary s = generate_benchmark(
      hb_test::fixture_manifest(), dir.str(),
      stub_backends(std::make_shared<StubEditor>(FailureInjection{0.0, 99})), opt);
  EXPECT_EQ(s.failed, 12);
  EXPECT_EQ(s.success, 0);
  EXPECT_EQ(s.exit_code(), 2);
  EXPECT_EQ(read_text(dir.path() / "items.jsonl"), "");
}

TEST(Generate, OriginalsAndInterrupt) {
  TempDir dir;
  GenerateOptions opt = fixture_options();
  opt.scenarios = {ScenarioKind::kStatic};
  opt.categories = {ObjectCategory::kHuman};
  opt.include_originals = true;
  const GenerateSummary s = generate_benchmark(
      hb_test::fixture_manifest(), dir.str(), stub_backends(std::make_shared<StubEditor>()), opt);
  const auto entries = read_benchmark(dir.str("items.jsonl"));
  EXPECT_EQ(entries.size(), 12u);
  EXPECT_EQ(compute_stats(entries).originals, 6);
  EXPECT_TRUE(fs::exists(dir.path() / "images/drive_001__none.png"));
  EXPECT_FALSE(s.interrupted);

  TempDir other;
  std::atomic<bool> stop{true};
  opt.stop = &stop;
  const GenerateSummary halted = generate_benchmark(
      hb_test::fixture_manifest(), other.str(), stub_backends(std::make_shared<StubEditor>()), opt);
  EXPECT_TRUE(halted.interrupted);
  EXPECT_EQ(halted.attempted, 0);
}

TEST(Generate, RejectsBadOptions) {
  TempDir dir;
  GenerateOptions opt = fixture_options();
  opt.geometry = GeometryConfig{30, 20, 0.0};
  EXPECT_THROW(generate_benchmark(hb_test::fixture_manifest(), dir.str(),
                                  stub_backends(std::make_shared<StubEditor>()), opt),
               Error);
  opt = fixture_options();
  EXPECT_THROW(generate_benchmark(hb_test::fixture_manifest(), dir.str(), Backends{}, opt), Error);
}

TEST(Stats, ReferenceCountsReproduceTotals) {
  const StatsTable t = compute_stats(hb_test::synthesize_reference_entries());
  for (std::size_t s = 0; s < 4; ++s) {
    EXPECT_EQ(t.row_total(kAllScenarios[s]), hb_test::kReferenceRowTotals[s]);
  }
  EXPECT_EQ(t.grand_total(), hb_test::kReferenceGrandTotal);
  EXPECT_EQ(t.column_total(ObjectCategory::kHuman), 144 + 99 + 162 + 38);
  const std::string text = render_stats_table(t);
  EXPECT_NE(text.find("3093"), std::string::npos);
  EXPECT_NE(text.find("7254"), std::string::npos);
  // Motion and intrusion rows print "-" for the four static categories.
  std::size_t dashes = 0;
  for (std::size_t p = text.find(" - "); p != std::string::npos; p = text.find(" - ", p + 1)) ++dashes;
  EXPECT_EQ(dashes, 8u);
}

TEST(Stats, EmptyTableIsAllZero) {
  const StatsTable t = compute_stats({});
  EXPECT_EQ(t.grand_total(), 0);
  const std::string text = render_stats_table(t);
  EXPECT_NE(text.find("Static"), std::string::npos);
  EXPECT_NE(text.find("Total"), std::string::npos);
}

}  // namespace
}  // namespace hb
