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

// Fixed prompt texts. These strings are part of the wire contract with the
// model endpoints; changing them changes every generated transcript.

#ifndef HAZARDBENCH_CORE_PROMPTS_HPP_
#define HAZARDBENCH_CORE_PROMPTS_HPP_

#include <array>
#include <string>
#include <string_view>

namespace hb {

inline constexpr std::string_view kCompletenessPrompt =
    "Analyze the object's completeness in the edited image. "
    "Choose from: not generated, complete, incomplete";

inline constexpr std::string_view kDirectionPrompt =
    "Analyze the object's direction. Choose from: left, right, forward, backward";

// Appended to the render prompt of a distance step.
inline constexpr std::string_view kDistanceSuffix = " Make the object smaller.";

inline constexpr std::string_view kAnswerInstruction = "Answer with A, B, or C.";

// question + "\nA. go left  B. go straight  C. go right\nAnswer with A, B, or C."
std::string mcq_prompt(std::string_view question,
                       const std::array<std::string_view, 3>& options);

}  // namespace hb

#endif  // HAZARDBENCH_CORE_PROMPTS_HPP_
