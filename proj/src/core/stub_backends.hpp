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

// Procedural offline backends.
//
// The stub editor paints a flat "sprite" into the mask and writes a three
// pixel tag into the top-left corner of the mask: magic bytes, orientation,
// category and size. The stub judge reads that tag back from the crop it is
// shown, so a stub edit followed by a stub judge round-trips exactly.

#ifndef HAZARDBENCH_CORE_STUB_BACKENDS_HPP_
#define HAZARDBENCH_CORE_STUB_BACKENDS_HPP_

#include <atomic>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "core/backends.hpp"
#include "core/planner.hpp"

namespace hb {

struct SpriteTag {
  Orientation orientation = Orientation::kFacingForward;
  ObjectCategory category = ObjectCategory::kHuman;
  bool small = false;
  friend bool operator==(const SpriteTag&, const SpriteTag&) = default;
};

// Reads the tag from row 0, columns 0..2 of an RGB crop.
std::optional<SpriteTag> read_sprite_tag(const Raster& crop);

struct FailureInjection {
  // Probability that an edit silently produces nothing, drawn from the seed.
  double rate = 0.0;
  // Trials with trial_index < this value always fail.
  int fail_first_trials = 0;
};

class StubEditor : public Editor {
 public:
  explicit StubEditor(FailureInjection injection = {}) : injection_(injection) {}

  PngBytes edit(const EditRequest& req) override;
  PngBytes outpaint(const OutpaintRequest& req) override;

  long edit_calls() const { return edit_calls_.load(); }
  long outpaint_calls() const { return outpaint_calls_.load(); }

 private:
  FailureInjection injection_;
  std::atomic<long> edit_calls_{0};
  std::atomic<long> outpaint_calls_{0};
};

// Answers the two judge prompts by inspecting the stub sprite tag.
class StubJudgeModel : public ChatModel {
 public:
  std::string chat(const std::vector<PngBytes>& images, std::string_view prompt) override;
};

// Returns whatever the callback produces; for transcript-level tests.
class ScriptedChatModel : public ChatModel {
 public:
  using Script = std::function<std::string(const std::vector<PngBytes>&, std::string_view)>;
  explicit ScriptedChatModel(Script script) : script_(std::move(script)) {}
  std::string chat(const std::vector<PngBytes>& images, std::string_view prompt) override {
    return script_(images, prompt);
  }

 private:
  Script script_;
};

// Simulated latency for stub answerers. A call whose latency exceeds the
// timeout budget fails with kTimeout once the budget has elapsed.
struct StubLatency {
  int delay_ms = 0;
  int timeout_ms = 0;  // 0 disables the budget
};

class StubAnswerer : public Answerer {
 public:
  explicit StubAnswerer(StubLatency latency = {}) : latency_(latency) {}
  std::string ask(const AskRequest& req) final;

 protected:
  virtual std::string respond(const AskRequest& req) = 0;

 private:
  StubLatency latency_;
};

class ConstantAnswerer : public StubAnswerer {
 public:
  explicit ConstantAnswerer(std::string text, StubLatency latency = {})
      : StubAnswerer(latency), text_(std::move(text)) {}

 protected:
  std::string respond(const AskRequest&) override { return text_; }

 private:
  std::string text_;
};

class ScriptedAnswerer : public StubAnswerer {
 public:
  ScriptedAnswerer(std::map<std::string, std::string> by_item, std::string fallback,
                   StubLatency latency = {})
      : StubAnswerer(latency), by_item_(std::move(by_item)), fallback_(std::move(fallback)) {}

 protected:
  std::string respond(const AskRequest& req) override;

 private:
  std::map<std::string, std::string> by_item_;
  std::string fallback_;
};

// Knows the ground truth and always answers with its option letter.
class OracleAnswerer : public StubAnswerer {
 public:
  explicit OracleAnswerer(std::map<std::string, Action> truth, StubLatency latency = {})
      : StubAnswerer(latency), truth_(std::move(truth)) {}

 protected:
  std::string respond(const AskRequest& req) override;

 private:
  std::map<std::string, Action> truth_;
};

}  // namespace hb

#endif  // HAZARDBENCH_CORE_STUB_BACKENDS_HPP_
