// Copyright 2026 The kernfuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end runs of the kernfuzz binary.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "kernfuzz/layout.h"
#include "kernfuzz/pov.h"
#include "kernfuzz/text.h"
#include "kernfuzz/watchdog.h"
#include "test_util.h"

namespace kernfuzz {
namespace {

namespace fs = std::filesystem;
using test::RunCli;
using test::TempDir;

std::vector<fs::path> FilesWithExtension(const fs::path &dir,
                                         std::string_view ext) {
  std::vector<fs::path> out;
  if (!fs::exists(dir)) return out;
  for (const auto &e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ext) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> Lines(const std::string &text) {
  std::vector<std::string> out;
  for (auto l : Split(text, '\n')) {
    if (!l.empty()) out.emplace_back(l);
  }
  return out;
}

TEST(CliTest, KernelsFlagLimitsSessions) {
  TempDir dir("cli_k5");
  const std::string out = dir.path().string();
  ASSERT_EQ(RunCli({"fuzz", "--out", out, "--kernels", "5", "--seed", "3"}), 0);
  const auto rows = ParseResultsCsv(ReadFile(ArtifactLayout(out).results()));
  EXPECT_EQ(rows.size(), 5u);
}

TEST(CliTest, UsageErrorsExit2) {
  TempDir dir("cli_usage");
  const std::string out = dir.path().string();
  EXPECT_EQ(RunCli({"fuzz", "--out", out, "--kernels", "0"}), 2);
  EXPECT_EQ(RunCli({"fuzz", "--out", out, "--kernels", "-1"}), 2);
  EXPECT_EQ(RunCli({"fuzz", "--out", out}), 2);
  EXPECT_EQ(RunCli({"fuzz", "--out", out, "--kernels", "2", "--all"}), 2);
  EXPECT_EQ(RunCli({"fuzz", "--out", out, "--all", "--only", "nope"}), 2);
  EXPECT_EQ(RunCli({"fuzz", "--all"}), 2);
  EXPECT_EQ(RunCli({}), 2);
  EXPECT_EQ(RunCli({"frobnicate"}), 2);
  EXPECT_FALSE(fs::exists(ArtifactLayout(out).results()));
}

TEST(CliTest, LaterStagesNeedEarlierOnes) {
  TempDir dir("cli_order");
  const std::string out = dir.path().string();
  EXPECT_EQ(RunCli({"synthesize", "--out", out}), 3);
  EXPECT_EQ(RunCli({"replay", "--out", out}), 3);
  EXPECT_EQ(RunCli({"report", "--out", out}), 3);
}

TEST(CliTest, SafeOnlyCampaignSynthesizesNothing) {
  TempDir dir("cli_safe");
  const std::string out = dir.path().string();
  ASSERT_EQ(RunCli({"fuzz", "--out", out, "--all", "--only", "add"}), 0);
  EXPECT_EQ(RunCli({"synthesize", "--out", out}), 0);
  EXPECT_TRUE(FilesWithExtension(ArtifactLayout(out).povs_dir(), ".pov").empty());
  EXPECT_EQ(RunCli({"replay", "--out", out}), 0);
  EXPECT_EQ(RunCli({"report", "--out", out}), 0);
}

TEST(CliTest, PipelineOnSubset) {
  TempDir dir("cli_pipeline");
  const std::string out = dir.path().string();
  const ArtifactLayout layout(out);
  ASSERT_EQ(RunCli({"fuzz", "--out", out, "--all", "--only",
                    "mean_pool,delete_handle,add,gather_internal"}),
            0);
  const auto rows = ParseResultsCsv(ReadFile(layout.results()));
  ASSERT_EQ(rows.size(), 4u);
  for (const auto &row : rows) {
    if (row.kernel == "add") {
      EXPECT_EQ(row.status, SessionStatus::kCompleted);
    } else {
      EXPECT_EQ(row.status, SessionStatus::kCrashed) << row.kernel;
      EXPECT_GT(row.crash_count, 0);
    }
  }
  EXPECT_FALSE(FilesWithExtension(layout.reports_dir(), ".report").empty());

  ASSERT_EQ(RunCli({"synthesize", "--out", out}), 0);
  const auto povs = FilesWithExtension(layout.povs_dir(), ".pov");
  ASSERT_EQ(povs.size(), 2u);
  const std::string synth = ReadFile(layout.povs_dir() / "synthesis.log");
  EXPECT_NE(synth.find("NoBinding gather_internal:"), std::string::npos)
      << synth;

  ASSERT_EQ(RunCli({"replay", "--out", out}), 0);
  ASSERT_EQ(RunCli({"report", "--out", out}), 0);
  const std::string table =
      ReadFile(layout.summary_dir() / "category_table.csv");
  EXPECT_EQ(Lines(table).back().substr(0, 6), "total,");

  // Cumulative crash counts never decrease and end at the campaign total.
  const auto over_time =
      Lines(ReadFile(layout.summary_dir() / "crashes_over_time.csv"));
  ASSERT_GE(over_time.size(), 3u);
  EXPECT_EQ(over_time[0], "elapsed_ns,kernel,uin,class,cumulative_crashes");
  int64_t prev_elapsed = -1;
  int64_t prev_total = -1;
  for (size_t i = 1; i < over_time.size(); ++i) {
    const auto f = Split(over_time[i], ',');
    ASSERT_EQ(f.size(), 5u);
    const auto elapsed = ParseNumber<int64_t>(f[0], "elapsed");
    const auto total = ParseNumber<int64_t>(f[4], "total");
    EXPECT_GE(elapsed, prev_elapsed);
    EXPECT_GE(total, prev_total);
    prev_elapsed = elapsed;
    prev_total = total;
  }
  int64_t crashes = 0;
  for (const auto &row : rows) crashes += row.crash_count;
  EXPECT_EQ(prev_total, crashes);

  // Tampering with the expected class turns replay into a mismatch.
  PovManifest m = ParsePovManifest(ReadFile(povs[0]));
  m.expected = m.expected == FaultClass::kSegvLike ? FaultClass::kFpeLike
                                                   : FaultClass::kSegvLike;
  WriteFileAtomic(povs[0], RenderPovManifest(m));
  EXPECT_EQ(RunCli({"replay", "--out", out, "--force"}), 1);
  fs::path verdict = povs[0];
  verdict.replace_extension(".verdict");
  EXPECT_NE(ReadFile(verdict).find("match=false"), std::string::npos);
}

TEST(CliTest, StagesAreIdempotentWithoutForce) {
  TempDir dir("cli_idem");
  const std::string out = dir.path().string();
  const ArtifactLayout layout(out);
  ASSERT_EQ(RunCli({"fuzz", "--out", out, "--all", "--only", "normalize"}), 0);
  const std::string results = ReadFile(layout.results());
  const auto mtime = fs::last_write_time(layout.results());
  // Different arguments, but the stage is already complete.
  ASSERT_EQ(RunCli({"fuzz", "--out", out, "--all", "--only", "add"}), 0);
  EXPECT_EQ(ReadFile(layout.results()), results);
  EXPECT_EQ(fs::last_write_time(layout.results()), mtime);
  ASSERT_EQ(RunCli({"fuzz", "--out", out, "--all", "--only", "add", "--force"}),
            0);
  const auto rows = ParseResultsCsv(ReadFile(layout.results()));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].kernel, "add");
  EXPECT_FALSE(fs::exists(layout.crash_file("normalize")));
}

TEST(CliTest, ExecUinReproducesCrash) {
  TempDir dir("cli_exec");
  const std::string out = dir.path().string();
  const ArtifactLayout layout(out);
  ASSERT_EQ(RunCli({"fuzz", "--out", out, "--all", "--only", "gather"}), 0);
  const auto crashes = ReadCrashRecords(layout.crash_file("gather"));
  ASSERT_FALSE(crashes.empty());
  EXPECT_EQ(RunCli({"__exec-uin", "--kernel", "gather", "--uin",
                    std::to_string(crashes.front().uin.index), "--out", out}),
            139);
  EXPECT_EQ(RunCli({"__exec-uin", "--kernel", "gather", "--uin",
                    "99999999999", "--out", out}),
            3);
}

}  // namespace
}  // namespace kernfuzz
