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

#ifndef HAZARDBENCH_CORE_BENCH_ITEM_HPP_
#define HAZARDBENCH_CORE_BENCH_ITEM_HPP_

#include <array>
#include <string>
#include <string_view>

#include "core/geometry.hpp"

namespace hb {

// Source benchmark tag. Known sources get canonical spellings; anything else
// is carried through verbatim.
struct SourceTag {
  std::string name = "Other";

  static SourceTag parse(std::string_view raw);
  bool is_drivebench() const { return name == "DriveBench"; }
  bool is_sabench() const { return name == "SA-Bench"; }
  friend bool operator==(const SourceTag&, const SourceTag&) = default;
};

// Option texts in fixed A/B/C order.
inline constexpr std::array<std::string_view, 3> kOptionTexts = {"go left", "go straight",
                                                                 "go right"};

// One (image, question, ground-truth action) triplet from a source benchmark.
struct BenchItem {
  std::string item_id;
  std::string image_ref;  // path relative to the manifest directory
  std::string question;
  Action gt_action = Action::kCenter;
  SourceTag source;
};

}  // namespace hb

#endif  // HAZARDBENCH_CORE_BENCH_ITEM_HPP_
