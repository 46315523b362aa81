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

// Model roles used by the pipeline: an image editor (edit + outpaint), a
// vision-language judge, and an MCQ answerer. Judge and answerer both sit on a
// generic multi-image chat model.

#ifndef HAZARDBENCH_CORE_BACKENDS_HPP_
#define HAZARDBENCH_CORE_BACKENDS_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/geometry.hpp"
#include "core/planner.hpp"
#include "core/raster.hpp"

namespace hb {

enum class Completeness { kNotGenerated, kComplete, kIncomplete };
enum class Direction { kLeft, kRight, kForward, kBackward };

std::string_view completeness_name(Completeness c);
std::string_view direction_name(Direction d);
// facing left -> Left, facing right -> Right, ...
Direction judge_direction_for(Orientation o);

// First keyword occurrence, case-insensitive, whole-word.
std::optional<Completeness> parse_completeness(std::string_view text);
std::optional<Direction> parse_direction(std::string_view text);

struct EditRequest {
  PngBytes image;
  PngBytes mask;  // single channel, 255 = editable
  std::string prompt;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> params;
  // Local bookkeeping, never serialized.
  int trial_index = 0;
};

struct OutpaintRequest {
  PngBytes image;
  Edge side = Edge::kLeft;
  int pixels = 0;
};

// Throws kInvalidArgument for an empty prompt and kDimMismatch when the image
// and mask sizes differ.
void validate_edit_request(const EditRequest& req);
void validate_outpaint_request(const OutpaintRequest& req);

// Canonical JSON bodies (sorted keys, no whitespace).
std::string encode_edit_request(const EditRequest& req);
std::string encode_outpaint_request(const OutpaintRequest& req);
std::string encode_chat_request(const std::vector<PngBytes>& images, std::string_view prompt);

class Editor {
 public:
  virtual ~Editor() = default;
  // Same dimensions as the request image.
  virtual PngBytes edit(const EditRequest& req) = 0;
  // Width grows by req.pixels on req.side.
  virtual PngBytes outpaint(const OutpaintRequest& req) = 0;
};

class ChatModel {
 public:
  virtual ~ChatModel() = default;
  virtual std::string chat(const std::vector<PngBytes>& images, std::string_view prompt) = 0;
};

struct JudgeVerdict {
  Completeness completeness = Completeness::kNotGenerated;
  std::optional<Direction> direction;
  std::vector<std::string> raw;
  bool unparseable = false;
};

class Judge {
 public:
  explicit Judge(std::shared_ptr<ChatModel> model) : model_(std::move(model)) {}

  struct CompletenessResult {
    Completeness value = Completeness::kNotGenerated;
    std::string raw;
    bool unparseable = false;  // value is then NotGenerated
  };
  struct DirectionResult {
    std::optional<Direction> value;  // nullopt when unparseable
    std::string raw;
  };

  CompletenessResult check_completeness(const PngBytes& crop_before, const PngBytes& crop_after);
  DirectionResult check_direction(const PngBytes& crop_after);

 private:
  std::shared_ptr<ChatModel> model_;
};

struct AskRequest {
  std::string item_id;  // lets offline answerers key their scripts; not sent
  PngBytes image;
  std::string question;
  std::array<std::string, 3> options;
};

class Answerer {
 public:
  virtual ~Answerer() = default;
  // Raw model transcript; no parsing.
  virtual std::string ask(const AskRequest& req) = 0;
};

// Sends the MCQ prompt plus the image through a chat model.
class ChatAnswerer : public Answerer {
 public:
  explicit ChatAnswerer(std::shared_ptr<ChatModel> model) : model_(std::move(model)) {}
  std::string ask(const AskRequest& req) override;

 private:
  std::shared_ptr<ChatModel> model_;
};

void validate_ask_request(const AskRequest& req);

}  // namespace hb

#endif  // HAZARDBENCH_CORE_BACKENDS_HPP_
