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

// Human-readable crash reports, stitched together after the fact from a
// crash record and the mutation pools.
//
//   # strided_write
//   Tensor<type: int64 shape: [2] values: 2 3>
//   Tensor<type: int64 shape: [2] values: -1 -1>
//   Scalar<type: int64 value: 7>
//   uin=17
//   class=segv
//   seed=1
//   cfghash=9f1c...
//   version=1
//
// Uniform tensors with more than kMaxListedValues elements render as
// `values: <v> ...`. Strings are quoted.
#ifndef KERNFUZZ_CRASH_REPORT_H_
#define KERNFUZZ_CRASH_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "kernfuzz/fault.h"
#include "kernfuzz/kernel_corpus.h"
#include "kernfuzz/mutation.h"
#include "kernfuzz/value.h"

namespace kernfuzz {

inline constexpr int kCrashReportVersion = 1;
inline constexpr int64_t kMaxListedValues = 16;

struct CrashReport {
  std::string kernel;
  Uin uin;
  FaultClass fault = FaultClass::kSegvLike;
  std::vector<Value> args;
  uint64_t seed = 0;
  std::string cfghash;

  friend bool operator==(const CrashReport &, const CrashReport &) = default;
};

// The pools a fuzzing session builds for `entry`: seeded with the first
// driver-test call, which is the one the wrapper hijacks.
PoolSet SessionPools(const KernelEntry &entry, const MutationConfig &mcfg);

// Rebuilds the arguments for `uin`. Throws ConsistencyError when `uin` is
// out of range.
CrashReport BuildCrashReport(const Registry &registry, std::string_view kernel,
                             Uin uin, FaultClass fault,
                             const MutationConfig &mcfg);

std::string RenderCrashReport(const CrashReport &report);
// Throws ParseError, including for unknown versions.
CrashReport ParseCrashReport(std::string_view text);

// One argument line, without the trailing newline.
std::string RenderArgLine(const Value &value);
Value ParseArgLine(std::string_view line);

// <reports_dir>/<kernel>-<uin>.report
std::filesystem::path CrashReportPath(const std::filesystem::path &reports_dir,
                                      std::string_view kernel, Uin uin);

// Builds, renders and writes the report. Throws ConsistencyError when
// `expected_cfghash` does not match `mcfg`.
std::filesystem::path WriteCrashReport(const Registry &registry,
                                       std::string_view kernel, Uin uin,
                                       FaultClass fault,
                                       const MutationConfig &mcfg,
                                       std::string_view expected_cfghash,
                                       const std::filesystem::path &reports_dir);

// Element text shared with the PoV literal grammar.
std::string RenderScalarText(const Scalar &value);
// Reads one element token of `dtype` from the front of `text`, skipping
// leading spaces. Throws ParseError.
Scalar ParseScalarText(std::string_view &text, DType dtype);

}  // namespace kernfuzz

#endif  // KERNFUZZ_CRASH_REPORT_H_
