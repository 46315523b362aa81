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

// Run configuration as dotted keys ("editor.url", "run.seed", ...).
//
// Sources are applied in order defaults -> file -> environment -> flags, each
// overriding the previous one. The file format is TOML-style:
//
//   # comment
//   [editor]
//   url = "http://127.0.0.1:9000"
//   [run]
//   seed = 0

#ifndef HAZARDBENCH_CORE_CONFIG_HPP_
#define HAZARDBENCH_CORE_CONFIG_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/geometry.hpp"
#include "core/http_backends.hpp"

namespace hb {

struct ConfigKey {
  std::string_view name;
  std::string_view default_value;
  std::string_view help;
};

const std::vector<ConfigKey>& config_keys();

// Environment variable -> key.
const std::vector<std::pair<std::string_view, std::string_view>>& config_env_vars();

class Config {
 public:
  Config();  // all defaults

  // Throws kConfiguration for unknown keys or values that do not parse.
  void set(std::string_view key, std::string_view value);
  const std::string& get(std::string_view key) const;
  // Where the current value came from: default, file, env or flag.
  const std::string& origin(std::string_view key) const;

  void load_file(const std::string& path);
  void load_text(std::string_view text, const std::string& origin_name = "file");
  void apply_env(const std::function<const char*(const char*)>& getenv_fn);

  std::int64_t get_int(std::string_view key) const;
  std::uint64_t get_uint64(std::string_view key) const;
  double get_double(std::string_view key) const;
  bool get_bool(std::string_view key) const;

  // Checks URLs of the roles a command needs (unless stubbed).
  void validate(bool needs_editor, bool needs_judge, bool needs_answerer) const;

  EndpointConfig endpoint(std::string_view role) const;  // "editor", "judge", "answerer"
  GeometryConfig geometry_overrides() const;

  // Marks subsequent set() calls with this origin.
  void set_origin(std::string origin) { current_origin_ = std::move(origin); }

 private:
  std::map<std::string, std::string, std::less<>> values_;
  std::map<std::string, std::string, std::less<>> origins_;
  std::string current_origin_ = "flag";
};

std::optional<bool> parse_bool(std::string_view s);

}  // namespace hb

#endif  // HAZARDBENCH_CORE_CONFIG_HPP_
