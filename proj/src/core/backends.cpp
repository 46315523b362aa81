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

#include "core/backends.hpp"

#include <algorithm>
#include <cctype>

#include "core/error.hpp"
#include "core/prompts.hpp"
#include "json.hpp"

namespace hb {

namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Earliest whole-word occurrence of any keyword; returns its index.
template <std::size_t N>
std::optional<std::size_t> first_keyword(std::string_view text,
                                         const std::array<std::string_view, N>& keywords) {
  const std::string hay = lower(text);
  std::optional<std::size_t> best;
  std::size_t best_pos = std::string::npos;
  for (std::size_t k = 0; k < N; ++k) {
    std::size_t pos = 0;
    while ((pos = hay.find(keywords[k], pos)) != std::string::npos) {
      const std::size_t end = pos + keywords[k].size();
      const bool left_ok = pos == 0 || !is_word_char(hay[pos - 1]);
      const bool right_ok = end >= hay.size() || !is_word_char(hay[end]);
      if (left_ok && right_ok) break;
      ++pos;
    }
    if (pos != std::string::npos && pos < best_pos) {
      best_pos = pos;
      best = k;
    }
  }
  return best;
}

ImageDims png_dims(const PngBytes& png) {
  const Raster r = decode_png(png);
  return {r.width, r.height};
}

}  // namespace

std::string_view completeness_name(Completeness c) {
  switch (c) {
    case Completeness::kNotGenerated: return "not generated";
    case Completeness::kComplete: return "complete";
    case Completeness::kIncomplete: return "incomplete";
  }
  return "";
}

std::string_view direction_name(Direction d) {
  switch (d) {
    case Direction::kLeft: return "left";
    case Direction::kRight: return "right";
    case Direction::kForward: return "forward";
    case Direction::kBackward: return "backward";
  }
  return "";
}

Direction judge_direction_for(Orientation o) {
  switch (o) {
    case Orientation::kFacingLeft: return Direction::kLeft;
    case Orientation::kFacingRight: return Direction::kRight;
    case Orientation::kFacingForward: return Direction::kForward;
    case Orientation::kFacingBackward: return Direction::kBackward;
  }
  return Direction::kForward;
}

std::optional<Completeness> parse_completeness(std::string_view text) {
  static constexpr std::array<std::string_view, 3> kWords = {"not generated", "complete",
                                                             "incomplete"};
  const auto k = first_keyword(text, kWords);
  if (!k) return std::nullopt;
  return static_cast<Completeness>(*k);
}

std::optional<Direction> parse_direction(std::string_view text) {
  static constexpr std::array<std::string_view, 4> kWords = {"left", "right", "forward",
                                                             "backward"};
  const auto k = first_keyword(text, kWords);
  if (!k) return std::nullopt;
  return static_cast<Direction>(*k);
}

void validate_edit_request(const EditRequest& req) {
  if (req.prompt.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "edit request needs a prompt");
  }
  const ImageDims image = png_dims(req.image);
  const ImageDims mask = png_dims(req.mask);
  if (!(image == mask)) {
    throw Error(ErrorCode::kDimMismatch,
                "mask is " + std::to_string(mask.width) + "x" + std::to_string(mask.height) +
                    " but image is " + std::to_string(image.width) + "x" +
                    std::to_string(image.height));
  }
}

void validate_outpaint_request(const OutpaintRequest& req) {
  if (req.pixels <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "outpaint needs a positive pixel count");
  }
  if (req.image.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "outpaint needs an image");
  }
}

std::string encode_edit_request(const EditRequest& req) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : req.params) params[k] = v;
  nlohmann::json body = {
      {"image_b64", base64_encode(req.image)},
      {"mask_b64", base64_encode(req.mask)},
      {"prompt", req.prompt},
      {"seed", req.seed},
      {"params", params},
  };
  return body.dump();
}

std::string encode_outpaint_request(const OutpaintRequest& req) {
  nlohmann::json body = {
      {"image_b64", base64_encode(req.image)},
      {"side", std::string(edge_name(req.side))},
      {"pixels", req.pixels},
  };
  return body.dump();
}

std::string encode_chat_request(const std::vector<PngBytes>& images, std::string_view prompt) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& img : images) list.push_back(base64_encode(img));
  nlohmann::json body = {{"images_b64", list}, {"prompt", std::string(prompt)}};
  return body.dump();
}

Judge::CompletenessResult Judge::check_completeness(const PngBytes& crop_before,
                                                    const PngBytes& crop_after) {
  CompletenessResult out;
  out.raw = model_->chat({crop_before, crop_after}, kCompletenessPrompt);
  if (auto c = parse_completeness(out.raw)) {
    out.value = *c;
  } else {
    out.value = Completeness::kNotGenerated;
    out.unparseable = true;
  }
  return out;
}

Judge::DirectionResult Judge::check_direction(const PngBytes& crop_after) {
  DirectionResult out;
  out.raw = model_->chat({crop_after}, kDirectionPrompt);
  out.value = parse_direction(out.raw);
  return out;
}

void validate_ask_request(const AskRequest& req) {
  if (req.question.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "ask needs a question");
  }
  for (const auto& o : req.options) {
    if (o.empty()) throw Error(ErrorCode::kInvalidArgument, "ask needs three options");
  }
}

std::string ChatAnswerer::ask(const AskRequest& req) {
  validate_ask_request(req);
  return model_->chat({req.image},
                      mcq_prompt(req.question, {req.options[0], req.options[1], req.options[2]}));
}

}  // namespace hb
