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

// The stages behind the command line: fuzz, synthesize, replay, report, and
// the child-side entry points the watchdog and replayer spawn.
//
// Every stage writes only under its artifact directory and leaves a
// completed directory untouched unless `force` is set. Stages return a
// process exit code (see exit_codes.h) and throw Error for operational
// failures.
#ifndef KERNFUZZ_PIPELINE_H_
#define KERNFUZZ_PIPELINE_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "kernfuzz/errors.h"
#include "kernfuzz/mutation.h"

namespace kernfuzz {

// Bad flag combinations; maps to kExitUsage.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct FuzzOptions {
  std::filesystem::path out;
  uint64_t seed = 1;
  std::chrono::nanoseconds timeout = std::chrono::seconds(60);
  // Exactly one of `kernels` / `all`.
  std::optional<int64_t> kernels;
  bool all = false;
  // Restricts the targets to these names, before `kernels` applies.
  std::vector<std::string> only;
  int jobs = 1;
  uint64_t memory_cap_bytes = uint64_t{1} << 30;
  int max_reruns = 1000;
  std::optional<std::filesystem::path> mutation_config;
  bool normalize_timestamps = false;
  bool force = false;
  // Program implementing `__driver`.
  std::filesystem::path executable;
};

struct StageOptions {
  std::filesystem::path out;
  bool force = false;
  std::filesystem::path executable;
  std::chrono::nanoseconds replay_timeout = std::chrono::seconds(30);
};

// The selected targets in visitation order.
std::vector<std::string> SelectTargets(const FuzzOptions &options);

int RunFuzz(const FuzzOptions &options, std::ostream &log);
int RunSynthesize(const StageOptions &options, std::ostream &log);
int RunReplay(const StageOptions &options, std::ostream &log);
int RunReport(const StageOptions &options, std::ostream &log);

// `__driver`: runs one kernel's driver test under the fuzzing wrapper, with
// state under `out`.
int RunDriver(std::string_view kernel, const std::filesystem::path &out,
              std::optional<uint64_t> kill_after_log_uin);
// `__exec-uin`: rebuilds the session pools from `out`'s mutation config and
// calls the kernel once with combination `uin`, uninstrumented.
int ExecUin(std::string_view kernel, uint64_t uin,
            const std::filesystem::path &out);
// `__exec-pov`: calls the manifest's binding once.
int ExecPov(const std::filesystem::path &manifest);

// The cumulative crash curve written by the report stage:
//   elapsed_ns,kernel,uin,class,cumulative_crashes
std::string RenderCrashesOverTime(const std::filesystem::path &out);

}  // namespace kernfuzz

#endif  // KERNFUZZ_PIPELINE_H_
