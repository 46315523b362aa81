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

#include <gtest/gtest.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <netinet/in.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>

#include "test_util.hpp"

namespace {

namespace fs = std::filesystem;
using hb_test::read_text;
using hb_test::TempDir;
using hb_test::write_text;

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

// Runs the CLI with `args` (already shell-quoted) and an optional env prefix.
CliRun run_cli(const TempDir& dir, const std::string& args, const std::string& env = "") {
  const std::string out = dir.str("stdout.txt");
  const std::string err = dir.str("stderr.txt");
  const std::string cmd = (env.empty() ? "" : "env " + env + " ") + "'" + HB_CLI_PATH + "' " +
                          args + " >'" + out + "' 2>'" + err + "'";
  const int status = std::system(cmd.c_str());
  CliRun r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_text(out);
  r.err = read_text(err);
  return r;
}

std::string q(const std::string& s) { return "'" + s + "'"; }

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

TEST(Cli, HelpListsConfigKeys) {
  TempDir dir;
  const CliRun r = run_cli(dir, "--help");
  EXPECT_EQ(r.code, 0);
  for (const char* s : {"generate", "evaluate", "serve-annotation", "run.max_trials",
                        "editor.url", "HF_EDITOR_URL"}) {
    EXPECT_TRUE(contains(r.out, s)) << s;
  }
}

TEST(Cli, UnknownSubcommandOrFlagFails) {
  TempDir dir;
  EXPECT_NE(run_cli(dir, "frobnicate").code, 0);
  EXPECT_NE(run_cli(dir, "stats --bogus x").code, 0);
}

TEST(Cli, LiveGenerateWithoutUrlIsConfigurationError) {
  TempDir dir;
  const CliRun r = run_cli(dir, "generate --source " + q(hb_test::fixture_manifest()) + " --out " +
                                 q(dir.str("bench")));
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(contains(r.err, "error: configuration:")) << r.err;
  EXPECT_TRUE(contains(r.err, "HF_EDITOR_URL")) << r.err;
  const CliRun bad = run_cli(dir, "generate --source " + q(hb_test::fixture_manifest()) + " --out " +
                                   q(dir.str("bench")) + " --editor-url notaurl");
  EXPECT_EQ(bad.code, 1);
}

TEST(Cli, StaticOnlyCategoryInMotionIsSkippedWithNotice) {
  TempDir dir;
  const CliRun r = run_cli(dir, "generate --stub --source " + q(hb_test::fixture_manifest()) +
                                 " --out " + q(dir.str("bench")) +
                                 " --scenarios motion --categories cone");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.err, "cone")) << r.err;
  EXPECT_TRUE(contains(r.out, "attempted 0")) << r.out;
  EXPECT_TRUE(contains(r.out, "ineligible 1")) << r.out;
}

// Generates a small benchmark once and runs the downstream commands on it.
class CliPipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new TempDir("hb_cli");
    const CliRun r = run_cli(*dir_, "generate --stub --source " + q(hb_test::fixture_manifest()) +
                                     " --out " + q(dir_->str("bench")) +
                                     " --categories dog,cone --include-originals");
    gen_ = new CliRun(r);
  }
  static void TearDownTestSuite() {
    delete gen_;
    delete dir_;
  }
  static std::string manifest() { return dir_->str("bench/items.jsonl"); }

  static TempDir* dir_;
  static CliRun* gen_;
};

TempDir* CliPipeline::dir_ = nullptr;
CliRun* CliPipeline::gen_ = nullptr;

TEST_F(CliPipeline, GenerateSucceeds) {
  ASSERT_EQ(gen_->code, 0) << gen_->err;
  EXPECT_TRUE(contains(gen_->out, "success 34")) << gen_->out;
  EXPECT_TRUE(fs::exists(manifest()));
  // A rerun resumes every finished record.
  TempDir scratch;
  const CliRun again = run_cli(scratch, "generate --stub --source " + q(hb_test::fixture_manifest()) +
                                         " --out " + q(dir_->str("bench")) +
                                         " --categories dog,cone --include-originals");
  EXPECT_EQ(again.code, 0);
  EXPECT_TRUE(contains(again.out, "attempted 0, resumed 34")) << again.out;
}

TEST_F(CliPipeline, StatsPrintsTable) {
  TempDir scratch;
  const CliRun r = run_cli(scratch, "stats " + q(manifest()));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "Dog")) << r.out;
  EXPECT_TRUE(contains(r.out, "Total")) << r.out;
}

TEST_F(CliPipeline, StatsOnEmptyAndMalformedManifests) {
  TempDir scratch;
  write_text(scratch.path() / "empty.jsonl", "");
  const CliRun empty = run_cli(scratch, "stats " + q(scratch.str("empty.jsonl")));
  EXPECT_EQ(empty.code, 0) << empty.err;
  EXPECT_TRUE(contains(empty.out, "Total")) << empty.out;
  write_text(scratch.path() / "bad.jsonl", "{not json\n");
  const CliRun bad = run_cli(scratch, "stats " + q(scratch.str("bad.jsonl")));
  EXPECT_EQ(bad.code, 1);
  EXPECT_TRUE(contains(bad.err, "bad.jsonl:1:")) << bad.err;
  EXPECT_EQ(run_cli(scratch, "stats " + q(scratch.str("missing.jsonl"))).code, 1);
}

TEST_F(CliPipeline, EvaluateAndReport) {
  TempDir scratch;
  const CliRun ev = run_cli(scratch, "evaluate --manifest " + q(manifest()) + " --results " +
                                      q(scratch.str("oracle.jsonl")) +
                                      " --answerer oracle --model oracle");
  ASSERT_EQ(ev.code, 0) << ev.err;
  EXPECT_TRUE(contains(ev.out, "40 items, 40 correct (100.0%)")) << ev.out;
  const CliRun rep = run_cli(scratch, "report --manifest " + q(manifest()) + " --results " +
                                       q(scratch.str("oracle.jsonl")) + " --csv " +
                                       q(scratch.str("rows.csv")));
  ASSERT_EQ(rep.code, 0) << rep.err;
  EXPECT_TRUE(contains(rep.out, "Accuracy by scenario (%)")) << rep.out;
  EXPECT_TRUE(contains(read_text(scratch.path() / "rows.csv"), "scenario,oracle,Total,34,34,100.0"));
}

TEST_F(CliPipeline, EvaluateWithoutAnswererFails) {
  TempDir scratch;
  const CliRun r = run_cli(scratch, "evaluate --manifest " + q(manifest()) + " --results " +
                                     q(scratch.str("r.jsonl")));
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(contains(r.err, "HF_ANSWERER_URL")) << r.err;
}

TEST_F(CliPipeline, SheetsAndHumanScores) {
  TempDir scratch;
  const CliRun ex = run_cli(scratch, "export-sheets --manifest " + q(manifest()) + " --out " +
                                      q(scratch.str("sheets")) + " --sheets 1 --per-group 2");
  ASSERT_EQ(ex.code, 0) << ex.err;
  EXPECT_TRUE(contains(ex.out, "10 rows")) << ex.out;
  const CliRun too_many = run_cli(scratch, "export-sheets --manifest " + q(manifest()) + " --out " +
                                            q(scratch.str("big")));
  EXPECT_EQ(too_many.code, 1);
  EXPECT_TRUE(contains(too_many.err, "insufficient-items")) << too_many.err;

  // Answer every row with the key's letter.
  const std::string key = read_text(scratch.path() / "sheets/answer_key.csv");
  std::istringstream in(key);
  std::string line, header, answers = "row_id,answer\n";
  std::getline(in, header);
  ASSERT_EQ(header.rfind("row_id,", 0), 0u) << header;
  std::size_t gt_col = 0;
  {
    std::istringstream h(header);
    std::string col;
    for (std::size_t i = 0; std::getline(h, col, ','); ++i) {
      if (col == "gt") gt_col = i;
    }
  }
  ASSERT_GT(gt_col, 0u);
  while (std::getline(in, line)) {
    std::istringstream cells(line);
    std::string cell, row_id, gt;
    for (std::size_t i = 0; std::getline(cells, cell, ','); ++i) {
      if (i == 0) row_id = cell;
      if (i == gt_col) gt = cell;
    }
    const char letter = gt == "left" ? 'A' : gt == "center" ? 'B' : 'C';
    answers += row_id + "," + letter + "\n";
  }
  write_text(scratch.path() / "ann.csv", answers);
  const CliRun sh = run_cli(scratch, "score-human --key " + q(scratch.str("sheets/answer_key.csv")) +
                                      " --answers " + q(scratch.str("ann.csv")) +
                                      " --label Annotators --csv " + q(scratch.str("h.csv")));
  ASSERT_EQ(sh.code, 0) << sh.err;
  EXPECT_TRUE(contains(read_text(scratch.path() / "h.csv"), "scenario,Annotators,Total,8,8,100.0"));
}

TEST(Cli, ConfigShowsValuesAndOrigins) {
  TempDir dir;
  write_text(dir.path() / "c.toml", "[run]\nseed = 7\nmax_trials = 5\n[judge]\nurl = \"http://f:1\"\n");
  const CliRun r = run_cli(dir,
                        "config --config " + q(dir.str("c.toml")) + " --set run.max_trials=9",
                        "HF_JUDGE_URL=http://env:2");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "run.seed = 7 (file)")) << r.out;
  EXPECT_TRUE(contains(r.out, "run.max_trials = 9 (flag)")) << r.out;
  EXPECT_TRUE(contains(r.out, "judge.url = http://env:2 (env)")) << r.out;
  EXPECT_TRUE(contains(r.out, "run.workers = 1 (default)")) << r.out;
  EXPECT_EQ(run_cli(dir, "config --set run.max_trials=0").code, 1);
  EXPECT_EQ(run_cli(dir, "config --set nonsense").code, 1);
}

TEST(Cli, ShippedExampleConfigLoads) {
  TempDir dir;
  const CliRun r = run_cli(
      dir, "config --config " + q(std::string(HB_SOURCE_DIR) + "/docs/hazardbench.example.toml"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "editor.url = http://127.0.0.1:7001 (file)")) << r.out;
}

TEST(Cli, DetectVpOnFixture) {
  TempDir dir;
  const std::string image = std::string(HB_SOURCE_DIR) + "/fixtures/source/images/drive_002.png";
  const CliRun r = run_cli(dir, "detect-vp " + q(image) + " --dump " + q(dir.str("dump")));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "drive_002.png:")) << r.out;
  EXPECT_TRUE(fs::exists(dir.path() / "dump/drive_002.png.vp.txt"));
  EXPECT_EQ(run_cli(dir, "detect-vp " + q(dir.str("nope.png"))).code, 1);
}

TEST(Cli, ServeAnnotationReportsBusyPort) {
  // Hold a listening socket on an ephemeral port.
  const int sock = ::socket(AF_INET, SOCK_STREAM, 0);
  ASSERT_GE(sock, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  ASSERT_EQ(::bind(sock, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)), 0);
  ASSERT_EQ(::listen(sock, 1), 0);
  socklen_t len = sizeof(addr);
  ::getsockname(sock, reinterpret_cast<sockaddr*>(&addr), &len);
  const int port = ntohs(addr.sin_port);

  TempDir dir;
  write_text(dir.path() / "sheets/sheet_1.csv",
             "row_id,image,question,option_a,option_b,option_c\n"
             "s1-001,images/x.png,Which way?,go left,go straight,go right\n");
  const CliRun r = run_cli(dir, "serve-annotation --sheets " + q(dir.str("sheets")) + " --port " +
                                 std::to_string(port));
  ::close(sock);
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(contains(r.err, "error: io:")) << r.err;
}

}  // namespace
