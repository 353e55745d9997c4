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

// The fuzzing wrapper injected in front of a kernel.
//
// The first time a driver test reaches a kernel in a process, the wrapper
// hijacks the call: it builds mutation pools seeded with the original
// arguments and runs every combination through the real implementation,
// logging each combination's UIN *before* the call. A seeded bug kills the
// process, and the log left behind names the offending combination. The
// supervising watchdog restarts the test, and the wrapper resumes just past
// the logged UIN. When the loop completes, a completion marker is written and
// the original call proceeds as if nothing happened.
//
// On-disk formats:
//   <logs_dir>/<kernel>        kernel=<name>\nseed=<n>\ncfghash=<hex>\nuin=<n>\n
//   <done_dir>/<kernel>.done   empty
//   <timing_dir>/<kernel>.csv  uin,start_ns,end_ns,outcome
#ifndef KERNFUZZ_HARNESS_H_
#define KERNFUZZ_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "kernfuzz/kernel_corpus.h"
#include "kernfuzz/mutation.h"

namespace kernfuzz {

struct SessionState {
  std::filesystem::path logs_dir;
  std::filesystem::path done_dir;
  // Empty disables the timing sidecar.
  std::filesystem::path timing_dir;

  // Test hook: SIGKILL the process right after this UIN has been logged.
  std::optional<uint64_t> kill_after_log_uin;

  // Per-kernel counters for the current process.
  std::map<std::string, int, std::less<>> pool_builds;
  std::map<std::string, uint64_t, std::less<>> attempts;
  std::map<std::string, uint64_t, std::less<>> rejected;
  int resume_warnings = 0;
};

// Process-wide: true while a fuzz loop is running.
bool AlreadyFuzzing();

struct MutationLogRecord {
  std::string kernel;
  uint64_t seed = 0;
  std::string cfghash;
  Uin uin;

  friend bool operator==(const MutationLogRecord &,
                         const MutationLogRecord &) = default;
};

std::string RenderMutationLog(const MutationLogRecord &record);
// Throws ParseError on anything but the four expected lines.
MutationLogRecord ParseMutationLog(std::string_view text);
// Throws OperationalError when unreadable, ParseError when corrupt.
MutationLogRecord ReadMutationLog(const std::filesystem::path &path);

// The single-record log for one kernel, overwritten in place.
class MutationLog {
 public:
  // Throws OperationalError when the file cannot be opened.
  MutationLog(std::filesystem::path path, std::string kernel, uint64_t seed,
              std::string cfghash);
  ~MutationLog();
  MutationLog(const MutationLog &) = delete;
  MutationLog &operator=(const MutationLog &) = delete;

  const std::filesystem::path &path() const { return path_; }

  // The record is in the kernel's page cache when this returns, so it
  // survives any later termination of the process. A failed write ends the
  // process with kExitLogWriteFailure.
  void Write(Uin uin);

 private:
  std::filesystem::path path_;
  MutationLogRecord record_;
  int fd_ = -1;
  size_t last_size_ = 0;
};

void LogUin(MutationLog &log, Uin uin);

struct ResumePoint {
  Uin start;
  // Set when the log existed but could not be used; the session restarts
  // from 0.
  std::optional<std::string> warning;
};

// The logged UIN is the crasher; resumption starts right after it. A missing
// log starts at 0. A corrupt log, or one written for a different kernel,
// seed or config, restarts at 0 with a warning.
ResumePoint ResumeFrom(const std::filesystem::path &log_path,
                       std::string_view kernel, uint64_t seed,
                       std::string_view cfghash);

// Whether <done_dir>/<kernel>.done exists. Throws OperationalError when
// done_dir exists but cannot be inspected.
bool WasFuzzed(const SessionState &state, std::string_view kernel);
void MarkFuzzed(const SessionState &state, std::string_view kernel);

// The wrapper. Returns the result of invoking the kernel with
// `original_args`, after fuzzing when this is the first visit.
Value FuzzEntry(const KernelEntry &kernel, std::span<const Value> original_args,
                SessionState &state, const MutationConfig &cfg);

// Adapter for RunDriverTest.
KernelInvoker FuzzingInvoker(SessionState &state, const MutationConfig &cfg);

}  // namespace kernfuzz

#endif  // KERNFUZZ_HARNESS_H_
