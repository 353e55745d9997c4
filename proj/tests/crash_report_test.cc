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

#include "kernfuzz/crash_report.h"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>

#include "gtest/gtest.h"
#include "kernfuzz/errors.h"
#include "kernfuzz/text.h"
#include "test_util.h"

namespace kernfuzz {
namespace {

using test::TempDir;

TEST(ArgLineTest, TensorForms) {
  EXPECT_EQ(RenderArgLine(Value(Tensor::Filled(DType::kInt64, Shape({3}),
                                               int64_t{2}))),
            "Tensor<type: int64 shape: [3] values: 2 2 2>");
  EXPECT_EQ(RenderArgLine(Value(Tensor::FromInts(Shape({2}), {1, 2}))),
            "Tensor<type: int64 shape: [2] values: 1 2>");
  EXPECT_EQ(RenderArgLine(Value(Tensor::Filled(DType::kInt64, Shape({0}),
                                               int64_t{2}))),
            "Tensor<type: int64 shape: [0] values:>");
  EXPECT_EQ(RenderArgLine(Value(Tensor::Filled(DType::kFloat64, Shape({4, 5}),
                                               -1.5))),
            "Tensor<type: float64 shape: [4,5] values: -1.5 ...>");
}

TEST(ArgLineTest, ScalarAndListForms) {
  EXPECT_EQ(RenderArgLine(Value(int64_t{7})), "Scalar<type: int64 value: 7>");
  EXPECT_EQ(RenderArgLine(Value(true)), "Scalar<type: bool value: true>");
  EXPECT_EQ(RenderArgLine(Value(IntList{1, 2})), "List<type: int64 values: 1 2>");
  EXPECT_EQ(RenderArgLine(Value(IntList{})), "List<type: int64 values:>");
}

TEST(ArgLineTest, RoundTripsAwkwardValues) {
  const std::vector<Value> values = {
      Value(std::numeric_limits<int64_t>::min()),
      Value(1e-308),
      Value(-1e308),
      Value(0.1),
      Value(std::string("a \"quoted\" > string\\")),
      Value(std::string()),
      Value(false),
      Value(IntList{-(int64_t{1} << 62), 0}),
      Value(Tensor::Filled(DType::kStr, Shape({2}), std::string("x y"))),
      Value(Tensor::Filled(DType::kBool, Shape(), true)),
      Value(Tensor::FromDoubles(Shape({2}), {0.5, -2.0})),
      Value(Tensor::Filled(DType::kInt64, Shape(std::vector<int64_t>(15, 1)),
                           int64_t{3})),
  };
  for (const Value &v : values) {
    const std::string line = RenderArgLine(v);
    EXPECT_EQ(ParseArgLine(line), v) << line;
  }
  EXPECT_THROW(ParseArgLine("Blob<>"), ParseError);
  EXPECT_THROW(ParseArgLine("Scalar<type: int64 value: x>"), ParseError);
  EXPECT_THROW(ParseArgLine("Tensor<type: int64 shape: [2] values: 1>"),
               ParseError);
}

TEST(CrashReportTest, RenderedLayout) {
  CrashReport r;
  r.kernel = "mean_pool";
  r.uin = Uin{12};
  r.fault = FaultClass::kFpeLike;
  r.args = {Value(Tensor::FromInts(Shape({3}), {2, 4, 6})), Value(int64_t{0})};
  r.seed = 1;
  r.cfghash = "00ff";
  EXPECT_EQ(RenderCrashReport(r),
            "# mean_pool\n"
            "Tensor<type: int64 shape: [3] values: 2 4 6>\n"
            "Scalar<type: int64 value: 0>\n"
            "uin=12\n"
            "class=fpe\n"
            "seed=1\n"
            "cfghash=00ff\n"
            "version=1\n");
  EXPECT_EQ(ParseCrashReport(RenderCrashReport(r)), r);
}

TEST(CrashReportTest, UnknownVersionRejected) {
  CrashReport r;
  r.kernel = "normalize";
  r.args = {Value(Tensor::FromDoubles(Shape({1}), {0.0}))};
  std::string text = RenderCrashReport(r);
  const size_t pos = text.find("version=1");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 9, "version=2");
  EXPECT_THROW(ParseCrashReport(text), ParseError);
  EXPECT_THROW(ParseCrashReport("no header\n"), ParseError);
}

// For every kernel and a spread of UINs, the report holds exactly the
// combination's arguments, and render/parse/render is byte-identical.
TEST(CrashReportTest, FaithfulAndStableAcrossCorpus) {
  const Registry registry = RegisterCorpus();
  const MutationConfig m;
  for (const auto &sig : ExtractTargets(registry)) {
    const PoolSet ps = SessionPools(registry.Get(sig.name), m);
    const uint64_t count = CombinationCount(ps, m);
    const uint64_t step = std::max<uint64_t>(1, count / 97);
    for (uint64_t u = 0; u < count; u += step) {
      const CrashReport r =
          BuildCrashReport(registry, sig.name, Uin{u}, FaultClass::kSegvLike, m);
      EXPECT_EQ(r.args, NthCombination(ps, Uin{u}, m));
      EXPECT_EQ(r.cfghash, m.Fingerprint());
      const std::string text = RenderCrashReport(r);
      const CrashReport parsed = ParseCrashReport(text);
      EXPECT_EQ(RenderCrashReport(parsed), text) << sig.name << " " << u;
      EXPECT_EQ(parsed, r) << sig.name << " " << u;
    }
  }
}

TEST(CrashReportTest, OutOfRangeUinIsInconsistent) {
  const Registry registry = RegisterCorpus();
  const MutationConfig m;
  const PoolSet ps = SessionPools(registry.Get("add"), m);
  EXPECT_THROW(BuildCrashReport(registry, "add", Uin{CombinationCount(ps, m)},
                                FaultClass::kSegvLike, m),
               ConsistencyError);
}

TEST(CrashReportTest, WriteChecksFingerprint) {
  TempDir dir("reports");
  const Registry registry = RegisterCorpus();
  const MutationConfig m;
  EXPECT_THROW(WriteCrashReport(registry, "add", Uin{0}, FaultClass::kSegvLike,
                                m, "deadbeef", dir.path()),
               ConsistencyError);
  const auto path = WriteCrashReport(registry, "add", Uin{3},
                                     FaultClass::kSegvLike, m, m.Fingerprint(),
                                     dir.path());
  EXPECT_EQ(path, CrashReportPath(dir.path(), "add", Uin{3}));
  EXPECT_EQ(path.filename(), "add-3.report");
  EXPECT_EQ(ParseCrashReport(ReadFile(path)).uin, Uin{3});
}

}  // namespace
}  // namespace kernfuzz
