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

#include "kernfuzz/fault.h"

#include <stdlib.h>

#include <cstdint>
#include <limits>
#include <string>

#include "gtest/gtest.h"
#include "kernfuzz/process.h"
#include "kernfuzz/text.h"
#include "kernfuzz/watchdog.h"
#include "test_util.h"

namespace kernfuzz {
namespace {

using test::RunInChild;

TEST(RawBufferTest, InRangeWriteIsStored) {
  RawBuffer<int64_t> buf(10);
  buf.Write(3, 42);
  EXPECT_EQ(buf.Read(3), 42);
  EXPECT_EQ(buf.contents()[3], 42);
}

TEST(RawBufferTest, NegativeIndexTerminatesWithSegvCode) {
  EXPECT_EQ(RunInChild([] {
              RawBuffer<int64_t> buf(10);
              buf.Write(-4, 1);
            }),
            139);
}

TEST(RawBufferTest, OnePastEndTerminatesWithSegvCode) {
  EXPECT_EQ(RunInChild([] {
              RawBuffer<int64_t> buf(10);
              buf.Write(10, 1);
            }),
            139);
  EXPECT_EQ(RunInChild([] {
              RawBuffer<int64_t> buf(10);
              (void)buf.Read(10);
            }),
            139);
}

TEST(FaultAbortTest, TerminatesWithAbortCode) {
  EXPECT_EQ(RunInChild([] { FaultAbort("handle must be scalar"); }), 134);
  EXPECT_EQ(RunInChild([] { FaultAbort(""); }), 134);
}

TEST(FaultDivideTest, Quotients) {
  EXPECT_EQ(FaultDivide(6, 3), 2);
  EXPECT_EQ(FaultDivide(-9, 3), -3);
  EXPECT_EQ(FaultDivide(7, -2), -3);
  const int64_t min = std::numeric_limits<int64_t>::min();
  EXPECT_EQ(FaultDivide(min, -1), min);
}

TEST(FaultDivideTest, ZeroDenominatorTerminatesWithFpeCode) {
  EXPECT_EQ(RunInChild([] { (void)FaultDivide(1, 0); }), 136);
  EXPECT_EQ(RunInChild([] { (void)FaultDivide(0, 0); }), 136);
}

TEST(FaultClassTest, ExitCodeBijection) {
  for (FaultClass f :
       {FaultClass::kSegvLike, FaultClass::kFpeLike, FaultClass::kAbortLike}) {
    EXPECT_EQ(FaultClassFromExitCode(ExitCodeFor(f)), f);
    EXPECT_EQ(ParseFaultClass(FaultClassName(f)), f);
    EXPECT_EQ(RunInChild([f] { RaiseFault(f, "x"); }), ExitCodeFor(f));
  }
  EXPECT_EQ(ExitCodeFor(FaultClass::kSegvLike), 128 + 11);
  EXPECT_EQ(ExitCodeFor(FaultClass::kFpeLike), 128 + 8);
  EXPECT_EQ(ExitCodeFor(FaultClass::kAbortLike), 128 + 6);
  EXPECT_FALSE(FaultClassFromExitCode(0).has_value());
  EXPECT_FALSE(FaultClassFromExitCode(1).has_value());
  EXPECT_THROW(ParseFaultClass("bus"), ParseError);
}

TEST(FaultLogTest, RecordNamesClassKernelAndDetail) {
  test::TempDir dir("fault_log");
  const auto log = dir.path() / "faults";
  EXPECT_EQ(RunInChild([&] {
              ::setenv("FAULT_LOG", log.c_str(), 1);
              KernelScope scope("strided_write");
              RawBuffer<int64_t> buf(64);
              buf.Write(-4, 1);
            }),
            139);
  EXPECT_EQ(ReadFile(log), "FAULT segv strided_write write index=-4 length=64\n");
}

TEST(FaultLogTest, OutsideAnyScopeKernelIsDash) {
  test::TempDir dir("fault_log_dash");
  const auto log = dir.path() / "faults";
  EXPECT_EQ(RunInChild([&] {
              ::setenv("FAULT_LOG", log.c_str(), 1);
              FaultAbort("why");
            }),
            134);
  EXPECT_EQ(ReadFile(log), "FAULT abort - abort: why\n");
}

TEST(KernelScopeTest, Nests) {
  EXPECT_EQ(KernelScope::Current(), "-");
  {
    KernelScope outer("a");
    EXPECT_EQ(KernelScope::Current(), "a");
    {
      KernelScope inner("b");
      EXPECT_EQ(KernelScope::Current(), "b");
    }
    EXPECT_EQ(KernelScope::Current(), "a");
  }
  EXPECT_EQ(KernelScope::Current(), "-");
}

// A fault inside a supervised child shows up as an abnormal status in the
// parent, classified by its exit code.
TEST(FaultAbortTest, ParentOfSupervisedChildSeesAbortClass) {
  ChildSpec spec;
  spec.argv = {test::ChildHelperPath().string(), "exit", "134"};
  const ChildResult r = RunChild(spec);
  const ExitClass c = ClassifyExit(r.exit_code);
  EXPECT_EQ(c.kind, ExitKind::kFault);
  EXPECT_EQ(c.fault, FaultClass::kAbortLike);

  const pid_t pid = ::fork();
  if (pid == 0) FaultAbort("handle must be scalar");
  int status = 0;
  ::waitpid(pid, &status, 0);
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(ClassifyExit(WEXITSTATUS(status)).fault, FaultClass::kAbortLike);
}

}  // namespace
}  // namespace kernfuzz
