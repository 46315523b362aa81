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

#include "core/prompts.hpp"

namespace hb {

std::string mcq_prompt(std::string_view question,
                       const std::array<std::string_view, 3>& options) {
  std::string out(question);
  out += "\nA. ";
  out += options[0];
  out += "  B. ";
  out += options[1];
  out += "  C. ";
  out += options[2];
  out += "\n";
  out += kAnswerInstruction;
  return out;
}

}  // namespace hb
