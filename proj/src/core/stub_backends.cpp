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

#include "core/stub_backends.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstring>
#include <thread>

#include "core/error.hpp"
#include "core/prompts.hpp"
#include "core/seeding.hpp"

namespace hb {

namespace {

constexpr std::array<std::uint8_t, 3> kMagic = {'H', 'F', 'S'};

std::uint8_t tag_checksum(const std::uint8_t* p) {
  return static_cast<std::uint8_t>((p[0] * 31 + p[1] * 7 + p[2] * 3 + 17) & 0xFF);
}

constexpr std::array<std::array<std::uint8_t, 3>, 13> kPalette = {{
    {220, 180, 140}, {200, 30, 30},  {30, 120, 200}, {250, 120, 20}, {120, 110, 100},
    {150, 130, 60},  {110, 40, 40},  {170, 120, 70}, {90, 90, 90},   {160, 100, 50},
    {230, 100, 30},  {240, 170, 180}, {100, 100, 110},
}};

struct ParsedPrompt {
  ObjectCategory category;
  Orientation orientation;
  bool small;
};

std::optional<ParsedPrompt> parse_render_prompt(std::string_view prompt) {
  constexpr std::string_view kPrefix = "Render a ";
  if (prompt.substr(0, kPrefix.size()) != kPrefix) return std::nullopt;
  prompt.remove_prefix(kPrefix.size());
  bool small = false;
  if (prompt.size() >= kDistanceSuffix.size() &&
      prompt.substr(prompt.size() - kDistanceSuffix.size()) == kDistanceSuffix) {
    small = true;
    prompt.remove_suffix(kDistanceSuffix.size());
  }
  const auto comma = prompt.find(", ");
  if (comma == std::string_view::npos || prompt.empty() || prompt.back() != '.') {
    return std::nullopt;
  }
  const auto category = parse_category(prompt.substr(0, comma));
  const auto orientation =
      parse_orientation(prompt.substr(comma + 2, prompt.size() - comma - 3));
  if (!category || !orientation) return std::nullopt;
  return ParsedPrompt{*category, *orientation, small};
}

void paint_sprite(Raster& img, int x0, int r0, int x1, int r1, const ParsedPrompt& p,
                  std::uint64_t seed) {
  // Object box: the full mask, or its central quarter for far objects.
  int bx0 = x0, bx1 = x1, br0 = r0, br1 = r1;
  if (p.small) {
    const int w = x1 - x0 + 1, h = r1 - r0 + 1;
    bx0 = x0 + w / 4;
    bx1 = std::max(bx0, x1 - w / 4);
    br0 = r0 + h / 4;
    br1 = std::max(br0, r1 - h / 4);
  }
  const double cx = 0.5 * (bx0 + bx1), cy = 0.5 * (br0 + br1);
  const double ax = std::max(0.5, 0.5 * (bx1 - bx0)), ay = std::max(0.5, 0.5 * (br1 - br0));
  std::array<std::uint8_t, 3> color = kPalette[static_cast<std::size_t>(p.category)];
  for (int c = 0; c < 3; ++c) {
    const int jitter = static_cast<int>((splitmix64(seed) >> (8 * c)) % 17) - 8;
    color[c] = static_cast<std::uint8_t>(std::clamp(color[c] + jitter, 0, 255));
  }
  for (int row = br0; row <= br1; ++row) {
    for (int x = bx0; x <= bx1; ++x) {
      const double dx = (x - cx) / ax, dy = (row - cy) / ay;
      if (dx * dx + dy * dy > 1.0) continue;
      bool marker = false;
      switch (p.orientation) {
        case Orientation::kFacingLeft: marker = dx < -0.5; break;
        case Orientation::kFacingRight: marker = dx > 0.5; break;
        case Orientation::kFacingForward: marker = dy > 0.5; break;
        case Orientation::kFacingBackward: marker = dy < -0.5; break;
      }
      std::uint8_t* px = img.px(x, row);
      for (int c = 0; c < 3; ++c) px[c] = marker ? color[c] / 3 : color[c];
    }
  }
  if (x1 - x0 + 1 >= 3) {
    std::uint8_t* t0 = img.px(x0, r0);
    std::uint8_t* t1 = img.px(x0 + 1, r0);
    std::uint8_t* t2 = img.px(x0 + 2, r0);
    std::memcpy(t0, kMagic.data(), 3);
    t1[0] = static_cast<std::uint8_t>(static_cast<int>(p.orientation) + 1);
    t1[1] = static_cast<std::uint8_t>(static_cast<int>(p.category) + 1);
    t1[2] = p.small ? 2 : 1;
    t2[0] = tag_checksum(t1);
    t2[1] = 0xA5;
    t2[2] = 0x5A;
  }
}

}  // namespace

std::optional<SpriteTag> read_sprite_tag(const Raster& crop) {
  if (crop.width < 3 || crop.height < 1) return std::nullopt;
  const Raster rgb = to_rgb(crop);
  const std::uint8_t* t0 = rgb.px(0, 0);
  const std::uint8_t* t1 = rgb.px(1, 0);
  const std::uint8_t* t2 = rgb.px(2, 0);
  if (std::memcmp(t0, kMagic.data(), 3) != 0) return std::nullopt;
  if (t2[0] != tag_checksum(t1) || t2[1] != 0xA5 || t2[2] != 0x5A) return std::nullopt;
  if (t1[0] < 1 || t1[0] > 4 || t1[1] < 1 || t1[1] > 13 || t1[2] < 1 || t1[2] > 2) {
    return std::nullopt;
  }
  SpriteTag tag;
  tag.orientation = static_cast<Orientation>(t1[0] - 1);
  tag.category = static_cast<ObjectCategory>(t1[1] - 1);
  tag.small = t1[2] == 2;
  return tag;
}

PngBytes StubEditor::edit(const EditRequest& req) {
  validate_edit_request(req);
  ++edit_calls_;
  const bool injected =
      req.trial_index < injection_.fail_first_trials ||
      (injection_.rate > 0.0 && unit_interval(req.seed ^ 0x1d872b41c3a8e5f7ULL) < injection_.rate);
  const auto parsed = parse_render_prompt(req.prompt);
  if (injected || !parsed) return req.image;

  Raster img = to_rgb(decode_png(req.image));
  const Raster mask = to_gray(decode_png(req.mask));
  int x0 = img.width, x1 = -1, r0 = img.height, r1 = -1;
  for (int row = 0; row < mask.height; ++row) {
    for (int x = 0; x < mask.width; ++x) {
      if (mask.pixels[static_cast<std::size_t>(row) * mask.width + x] < 128) continue;
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      r0 = std::min(r0, row);
      r1 = std::max(r1, row);
    }
  }
  if (x1 < 0) return req.image;
  paint_sprite(img, x0, r0, x1, r1, *parsed, req.seed);
  return encode_png(img);
}

PngBytes StubEditor::outpaint(const OutpaintRequest& req) {
  validate_outpaint_request(req);
  ++outpaint_calls_;
  const Raster img = to_rgb(decode_png(req.image));
  Raster out = pad_raster(img, PadSpec{req.side, req.pixels});
  // Fill the new strip by replicating the border column, darkened.
  const int src_col = req.side == Edge::kLeft ? req.pixels : img.width - 1;
  const int x_begin = req.side == Edge::kLeft ? 0 : img.width;
  for (int row = 0; row < out.height; ++row) {
    const std::uint8_t* src = out.px(src_col, row);
    std::array<std::uint8_t, 3> fill{};
    for (int c = 0; c < 3; ++c) fill[c] = static_cast<std::uint8_t>(src[c] * 3 / 4);
    for (int x = x_begin; x < x_begin + req.pixels; ++x) {
      std::memcpy(out.px(x, row), fill.data(), 3);
    }
  }
  return encode_png(out);
}

std::string StubJudgeModel::chat(const std::vector<PngBytes>& images, std::string_view prompt) {
  if (prompt == kCompletenessPrompt && images.size() == 2) {
    const Raster before = to_rgb(decode_png(images[0]));
    const Raster after = to_rgb(decode_png(images[1]));
    if (before == after) return "The object is not generated.";
    return read_sprite_tag(after) ? "Complete." : "The object looks incomplete.";
  }
  if (prompt == kDirectionPrompt && images.size() == 1) {
    const auto tag = read_sprite_tag(decode_png(images[0]));
    if (!tag) return "I cannot tell.";
    return "The object is facing " +
           std::string(direction_name(judge_direction_for(tag->orientation))) + ".";
  }
  return "Unsupported request.";
}

std::string StubAnswerer::ask(const AskRequest& req) {
  validate_ask_request(req);
  if (latency_.timeout_ms > 0 && latency_.delay_ms > latency_.timeout_ms) {
    std::this_thread::sleep_for(std::chrono::milliseconds(latency_.timeout_ms));
    throw Error(ErrorCode::kTimeout,
                "answerer timed out after " + std::to_string(latency_.timeout_ms) + " ms");
  }
  if (latency_.delay_ms > 0) {
    std::this_thread::sleep_for(std::chrono::milliseconds(latency_.delay_ms));
  }
  return respond(req);
}

std::string ScriptedAnswerer::respond(const AskRequest& req) {
  auto it = by_item_.find(req.item_id);
  return it == by_item_.end() ? fallback_ : it->second;
}

std::string OracleAnswerer::respond(const AskRequest& req) {
  auto it = truth_.find(req.item_id);
  if (it == truth_.end()) return "";
  static constexpr std::array<const char*, 3> kLetters = {"A", "B", "C"};
  return kLetters[static_cast<std::size_t>(it->second)];
}

}  // namespace hb
