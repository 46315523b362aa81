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

#include <gtest/gtest.h>

#include <map>
#include <set>

#include "core/error.hpp"
#include "test_util.hpp"

namespace hb {
namespace {

using hb_test::TempDir;
using hb_test::write_text;

std::function<const char*(const char*)> fake_env(std::map<std::string, std::string> vars) {
  auto shared = std::make_shared<std::map<std::string, std::string>>(std::move(vars));
  return [shared](const char* name) -> const char* {
    auto it = shared->find(name);
    return it == shared->end() ? nullptr : it->second.c_str();
  };
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

TEST(Config, DefaultsForEveryKey) {
  Config c;
  std::set<std::string> names;
  for (const auto& k : config_keys()) {
    EXPECT_TRUE(names.insert(std::string(k.name)).second) << k.name;
    EXPECT_EQ(c.get(k.name), k.default_value);
    EXPECT_EQ(c.origin(k.name), "default");
    EXPECT_FALSE(k.help.empty()) << k.name;
  }
  EXPECT_EQ(c.get_int("run.max_trials"), 3);
  EXPECT_EQ(c.get_int("http.timeout_ms"), 120000);
  EXPECT_FALSE(c.get_bool("run.stub"));
  for (const auto& [var, key] : config_env_vars()) EXPECT_TRUE(names.count(std::string(key)));
}

TEST(Config, PrecedenceFlagsOverEnvOverFileOverDefaults) {
  TempDir dir;
  write_text(dir.path() / "c.toml",
             "# settings\n"
             "[editor]\n"
             "url = \"http://file-editor:1\"  # trailing comment\n"
             "[judge]\n"
             "url = \"http://file-judge:2\"\n"
             "[run]\n"
             "seed = 7\n"
             "max_trials = 5\n");
  Config c;
  c.load_file(dir.str("c.toml"));
  c.apply_env(fake_env({{"HF_EDITOR_URL", "http://env-editor:3"}, {"HF_TOKEN", "tok"}}));
  c.set_origin("flag");
  c.set("run.seed", "9");

  EXPECT_EQ(c.get("editor.url"), "http://env-editor:3");
  EXPECT_EQ(c.origin("editor.url"), "env");
  EXPECT_EQ(c.get("judge.url"), "http://file-judge:2");
  EXPECT_EQ(c.origin("judge.url"), "file");
  EXPECT_EQ(c.get_uint64("run.seed"), 9u);
  EXPECT_EQ(c.origin("run.seed"), "flag");
  EXPECT_EQ(c.get_int("run.max_trials"), 5);
  EXPECT_EQ(c.get("answerer.url"), "");
  EXPECT_EQ(c.origin("answerer.url"), "default");
  EXPECT_EQ(c.endpoint("editor").token, "tok");
}

TEST(Config, EmptyEnvValuesAreIgnored) {
  Config c;
  c.load_text("[judge]\nurl = \"http://a:1\"\n");
  c.apply_env(fake_env({{"HF_JUDGE_URL", ""}}));
  EXPECT_EQ(c.get("judge.url"), "http://a:1");
}

TEST(Config, RejectsBadInput) {
  Config c;
  EXPECT_EQ(code_of([&] { c.set("no.such", "1"); }), ErrorCode::kConfiguration);
  EXPECT_EQ(code_of([&] { c.set("run.max_trials", "0"); }), ErrorCode::kConfiguration);
  EXPECT_EQ(code_of([&] { c.set("run.max_trials", "three"); }), ErrorCode::kConfiguration);
  EXPECT_EQ(code_of([&] { c.set("run.seed", "-1"); }), ErrorCode::kConfiguration);
  EXPECT_EQ(code_of([&] { c.set("geometry.distance_band", "1.5"); }), ErrorCode::kConfiguration);
  EXPECT_EQ(code_of([&] { c.set("run.stub", "maybe"); }), ErrorCode::kConfiguration);
  EXPECT_EQ(code_of([&] { c.set("editor.url", "not a url"); }), ErrorCode::kConfiguration);
  EXPECT_EQ(code_of([&] { c.set("answerer.stub", "psychic"); }), ErrorCode::kConfiguration);
  EXPECT_EQ(code_of([&] { c.load_file("/nonexistent.toml"); }), ErrorCode::kIo);
  EXPECT_EQ(c.get_int("run.max_trials"), 3);
}

TEST(Config, FileErrorsCarryLineNumbers) {
  for (const char* text : {"[run\nseed=1\n", "[run]\nseed\n", "[run]\nseed = \"1\n",
                           "\n\n[run]\nmax_trials = 0\n"}) {
    Config c;
    try {
      c.load_text(text, "cfg.toml");
      FAIL() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kConfiguration);
      EXPECT_NE(std::string(e.what()).find("cfg.toml:"), std::string::npos) << e.what();
    }
  }
  Config c;
  try {
    c.load_text("\n\n[run]\nmax_trials = 0\n", "cfg.toml");
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("cfg.toml:4:"), std::string::npos) << e.what();
  }
}

TEST(Config, QuotedHashIsNotAComment) {
  Config c;
  c.load_text("[auth]\ntoken = \"abc#def\" # real comment\n");
  EXPECT_EQ(c.get("auth.token"), "abc#def");
}

TEST(Config, ValidateLiveAndStub) {
  Config c;
  EXPECT_EQ(code_of([&] { c.validate(true, true, false); }), ErrorCode::kConfiguration);
  EXPECT_EQ(code_of([&] { c.validate(false, false, false); }), ErrorCode::kOk);
  c.set("run.stub", "true");
  EXPECT_EQ(code_of([&] { c.validate(true, true, false); }), ErrorCode::kOk);
  EXPECT_EQ(code_of([&] { c.validate(false, false, true); }), ErrorCode::kConfiguration);
  c.set("answerer.stub", "oracle");
  EXPECT_EQ(code_of([&] { c.validate(false, false, true); }), ErrorCode::kOk);
  c.set("answerer.stub", "scripted");
  EXPECT_EQ(code_of([&] { c.validate(false, false, true); }), ErrorCode::kConfiguration);
  c.set("answerer.stub", "");
  c.set("geometry.pad_width", "10");
  c.set("geometry.intrusion_half_width", "10");
  EXPECT_EQ(code_of([&] { c.validate(false, false, false); }), ErrorCode::kConfiguration);
}

TEST(Config, EndpointAndGeometry) {
  Config c;
  c.set("judge.url", "https://judge.example/v2");
  c.set("http.timeout_ms", "5000");
  c.set("http.max_in_flight", "2");
  c.set("geometry.distance_band", "0.25");
  const EndpointConfig e = c.endpoint("judge");
  EXPECT_EQ(e.url, "https://judge.example/v2");
  EXPECT_EQ(e.timeout_ms, 5000);
  EXPECT_EQ(e.max_in_flight, 2);
  const GeometryConfig g = c.geometry_overrides();
  EXPECT_EQ(g.pad_width, 0);
  EXPECT_DOUBLE_EQ(g.distance_band, 0.25);
}

TEST(ParseBool, Spellings) {
  EXPECT_EQ(parse_bool("yes"), true);
  EXPECT_EQ(parse_bool("off"), false);
  EXPECT_EQ(parse_bool("True"), std::nullopt);
}

}  // namespace
}  // namespace hb
