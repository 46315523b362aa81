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

#include "core/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace hb {

namespace {

enum class Kind { kString, kUrl, kInt, kUint, kDouble, kBool, kTriState, kAnswererStub };

struct KeySpec {
  ConfigKey key;
  Kind kind;
  double min = 0.0;
  double max = 0.0;  // ignored when min == max
};

const std::vector<KeySpec>& specs() {
  static const std::vector<KeySpec> kSpecs = {
      {{"editor.url", "", "editor endpoint base URL (env HF_EDITOR_URL)"}, Kind::kUrl},
      {{"judge.url", "", "judge endpoint base URL (env HF_JUDGE_URL)"}, Kind::kUrl},
      {{"answerer.url", "", "answerer endpoint base URL (env HF_ANSWERER_URL)"}, Kind::kUrl},
      {{"auth.token", "", "bearer token for all endpoints (env HF_TOKEN)"}, Kind::kString},
      {{"http.timeout_ms", "120000", "per-request timeout in milliseconds"}, Kind::kInt, 1, 3.6e6},
      {{"http.max_in_flight", "4", "concurrent requests per endpoint"}, Kind::kInt, 1, 1024},
      {{"editor.composite", "true", "paste only the masked pixels of live edits"}, Kind::kBool},
      {{"geometry.pad_width", "0", "outpaint width r in pixels (0: 20% of width)"}, Kind::kInt, 0,
       1e6},
      {{"geometry.intrusion_half_width", "0", "intrusion mask half-width l (0: 6% of width)"},
       Kind::kInt, 0, 1e6},
      {{"geometry.distance_band", "0", "distance band d in (0, 1] (0: 0.1)"}, Kind::kDouble, 0, 1},
      {{"run.seed", "0", "run seed"}, Kind::kUint},
      {{"run.max_trials", "3", "generate-and-check attempts per edit step"}, Kind::kInt, 1, 1000},
      {{"run.workers", "1", "items processed in parallel"}, Kind::kInt, 1, 1024},
      {{"run.stub", "false", "use the procedural offline editor and judge"}, Kind::kBool},
      {{"run.record_timestamps", "auto", "timestamps in records (auto: off in stub mode)"},
       Kind::kTriState},
      {{"stub.failure_rate", "0", "probability that a stub edit produces nothing"}, Kind::kDouble,
       0, 1},
      {{"stub.fail_first_trials", "0", "stub edits fail for trials below this index"}, Kind::kInt,
       0, 1000},
      {{"answerer.stub", "", "offline answerer: oracle, constant or scripted"},
       Kind::kAnswererStub},
      {{"answerer.constant", "A", "reply of the constant answerer"}, Kind::kString},
      {{"answerer.script", "", "JSON object item_id -> reply for the scripted answerer"},
       Kind::kString},
      {{"answerer.delay_ms", "0", "simulated latency of offline answerers"}, Kind::kInt, 0, 3.6e6},
      {{"eval.model", "model", "model tag written into results"}, Kind::kString},
      {{"eval.concurrency", "4", "concurrent answerer calls"}, Kind::kInt, 1, 1024},
      {{"eval.max_attempts", "2", "attempts per item on transport errors"}, Kind::kInt, 1, 100},
      {{"eval.record_latency", "auto", "latency in results (auto: off for offline answerers)"},
       Kind::kTriState},
      {{"annotation.host", "127.0.0.1", "annotation server bind address"}, Kind::kString},
      {{"annotation.port", "8080", "annotation server port"}, Kind::kInt, 0, 65535},
  };
  return kSpecs;
}

const KeySpec* find_spec(std::string_view key) {
  for (const auto& s : specs()) {
    if (s.key.name == key) return &s;
  }
  return nullptr;
}

[[noreturn]] void config_error(const std::string& msg) {
  throw Error(ErrorCode::kConfiguration, msg);
}

std::optional<double> parse_number(std::string_view s) {
  std::string tmp(s);
  if (tmp.empty()) return std::nullopt;
  std::istringstream is(tmp);
  is.imbue(std::locale::classic());
  double v = 0.0;
  is >> v;
  if (is.fail() || !is.eof()) return std::nullopt;
  return v;
}

void check_value(const KeySpec& spec, std::string_view value) {
  const std::string key(spec.key.name);
  auto range_check = [&](double v) {
    if (spec.min != spec.max && (v < spec.min || v > spec.max)) {
      config_error(key + " must lie in [" + std::to_string(spec.min) + ", " +
                   std::to_string(spec.max) + "], got " + std::string(value));
    }
  };
  switch (spec.kind) {
    case Kind::kString:
      break;
    case Kind::kUrl:
      if (!value.empty()) parse_endpoint_url(value);
      break;
    case Kind::kInt: {
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc() || p != value.data() + value.size()) {
        config_error(key + " expects an integer, got '" + std::string(value) + "'");
      }
      range_check(static_cast<double>(v));
      break;
    }
    case Kind::kUint: {
      std::uint64_t v = 0;
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc() || p != value.data() + value.size()) {
        config_error(key + " expects a non-negative integer, got '" + std::string(value) + "'");
      }
      break;
    }
    case Kind::kDouble: {
      auto v = parse_number(value);
      if (!v) config_error(key + " expects a number, got '" + std::string(value) + "'");
      range_check(*v);
      break;
    }
    case Kind::kBool:
      if (!parse_bool(value)) {
        config_error(key + " expects true or false, got '" + std::string(value) + "'");
      }
      break;
    case Kind::kTriState:
      if (value != "auto" && !parse_bool(value)) {
        config_error(key + " expects auto, true or false, got '" + std::string(value) + "'");
      }
      break;
    case Kind::kAnswererStub:
      if (!value.empty() && value != "oracle" && value != "constant" && value != "scripted") {
        config_error(key + " expects oracle, constant or scripted, got '" + std::string(value) +
                     "'");
      }
      break;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Strips a trailing comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && quoted) {
      ++i;
    } else if (line[i] == '"') {
      quoted = !quoted;
    } else if (line[i] == '#' && !quoted) {
      return line.substr(0, i);
    }
  }
  return line;
}

std::string unquote(std::string_view v, const std::string& where) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
    std::string out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
      if (v[i] == '\\' && i + 2 < v.size()) {
        const char n = v[++i];
        switch (n) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          default: out += n;
        }
      } else {
        out += v[i];
      }
    }
    return out;
  }
  if (!v.empty() && (v.front() == '"' || v.back() == '"')) {
    config_error(where + "unbalanced quotes");
  }
  return std::string(v);
}

}  // namespace

std::optional<bool> parse_bool(std::string_view s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  return std::nullopt;
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> kKeys = [] {
    std::vector<ConfigKey> out;
    for (const auto& s : specs()) out.push_back(s.key);
    return out;
  }();
  return kKeys;
}

const std::vector<std::pair<std::string_view, std::string_view>>& config_env_vars() {
  static const std::vector<std::pair<std::string_view, std::string_view>> kVars = {
      {"HF_EDITOR_URL", "editor.url"},
      {"HF_JUDGE_URL", "judge.url"},
      {"HF_ANSWERER_URL", "answerer.url"},
      {"HF_TOKEN", "auth.token"},
  };
  return kVars;
}

Config::Config() {
  for (const auto& s : specs()) {
    values_[std::string(s.key.name)] = std::string(s.key.default_value);
    origins_[std::string(s.key.name)] = "default";
  }
}

void Config::set(std::string_view key, std::string_view value) {
  const KeySpec* spec = find_spec(key);
  if (spec == nullptr) config_error("unknown configuration key '" + std::string(key) + "'");
  check_value(*spec, value);
  values_[std::string(key)] = std::string(value);
  origins_[std::string(key)] = current_origin_;
}

const std::string& Config::get(std::string_view key) const {
  auto it = values_.find(key);
  if (it == values_.end()) config_error("unknown configuration key '" + std::string(key) + "'");
  return it->second;
}

const std::string& Config::origin(std::string_view key) const {
  auto it = origins_.find(key);
  if (it == origins_.end()) config_error("unknown configuration key '" + std::string(key) + "'");
  return it->second;
}

void Config::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  load_text(ss.str(), path);
}

void Config::load_text(std::string_view text, const std::string& origin_name) {
  const std::string saved = current_origin_;
  current_origin_ = "file";
  std::string section;
  int number = 0;
  std::size_t pos = 0;
  try {
    while (pos <= text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = trim(strip_comment(text.substr(pos, end - pos)));
      pos = end + 1;
      ++number;
      const std::string where = origin_name + ":" + std::to_string(number) + ": ";
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') config_error(where + "malformed section header");
        section = std::string(trim(line.substr(1, line.size() - 2)));
        if (section.empty()) config_error(where + "empty section name");
        continue;
      }
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos) config_error(where + "expected key = value");
      const std::string name(trim(line.substr(0, eq)));
      const std::string key = section.empty() ? name : section + "." + name;
      const std::string value = unquote(trim(line.substr(eq + 1)), where);
      try {
        set(key, value);
      } catch (const Error& e) {
        config_error(where + e.what());
      }
    }
  } catch (...) {
    current_origin_ = saved;
    throw;
  }
  current_origin_ = saved;
}

void Config::apply_env(const std::function<const char*(const char*)>& getenv_fn) {
  const std::string saved = current_origin_;
  current_origin_ = "env";
  try {
    for (const auto& [var, key] : config_env_vars()) {
      const char* v = getenv_fn(std::string(var).c_str());
      if (v != nullptr && *v != '\0') {
        try {
          set(key, v);
        } catch (const Error& e) {
          config_error(std::string(var) + ": " + e.what());
        }
      }
    }
  } catch (...) {
    current_origin_ = saved;
    throw;
  }
  current_origin_ = saved;
}

std::int64_t Config::get_int(std::string_view key) const {
  const std::string& v = get(key);
  std::int64_t out = 0;
  std::from_chars(v.data(), v.data() + v.size(), out);
  return out;
}

std::uint64_t Config::get_uint64(std::string_view key) const {
  const std::string& v = get(key);
  std::uint64_t out = 0;
  std::from_chars(v.data(), v.data() + v.size(), out);
  return out;
}

double Config::get_double(std::string_view key) const {
  return parse_number(get(key)).value_or(0.0);
}

bool Config::get_bool(std::string_view key) const { return parse_bool(get(key)).value_or(false); }

void Config::validate(bool needs_editor, bool needs_judge, bool needs_answerer) const {
  const bool stub = get_bool("run.stub");
  auto require = [&](const char* key, const char* env) {
    const std::string& url = get(key);
    if (url.empty()) {
      config_error(std::string(key) + " is required in live mode (flag, " + env +
                   " or config file)");
    }
    parse_endpoint_url(url);
  };
  if (needs_editor && !stub) require("editor.url", "HF_EDITOR_URL");
  if (needs_judge && !stub) require("judge.url", "HF_JUDGE_URL");
  if (needs_answerer && get("answerer.stub").empty()) require("answerer.url", "HF_ANSWERER_URL");
  const GeometryConfig g = geometry_overrides();
  if (g.intrusion_half_width > 0 && g.pad_width > 0 && g.pad_width <= g.intrusion_half_width) {
    config_error("geometry.pad_width must exceed geometry.intrusion_half_width");
  }
  if (get("answerer.stub") == "scripted" && get("answerer.script").empty()) {
    config_error("answerer.script is required for the scripted answerer");
  }
}

EndpointConfig Config::endpoint(std::string_view role) const {
  EndpointConfig e;
  e.url = get(std::string(role) + ".url");
  e.token = get("auth.token");
  e.timeout_ms = static_cast<int>(get_int("http.timeout_ms"));
  e.max_in_flight = static_cast<int>(get_int("http.max_in_flight"));
  return e;
}

GeometryConfig Config::geometry_overrides() const {
  GeometryConfig g;
  g.intrusion_half_width = static_cast<int>(get_int("geometry.intrusion_half_width"));
  g.pad_width = static_cast<int>(get_int("geometry.pad_width"));
  g.distance_band = get_double("geometry.distance_band");
  return g;
}

}  // namespace hb
