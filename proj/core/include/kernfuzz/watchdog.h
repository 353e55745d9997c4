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

// Supervises fuzzing sessions. Each session is a child process running one
// kernel's driver test under the fuzzing wrapper; the watchdog classifies
// how the child ended, records crashes from the mutation log, and re-spawns
// the child until it exits gracefully or a limit binds.
//
// Crash record file format (one line per crash, append only):
//   uin=<decimal> class=<segv|fpe|abort> at_ns=<unix ns>
#ifndef KERNFUZZ_WATCHDOG_H_
#define KERNFUZZ_WATCHDOG_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kernfuzz/fault.h"
#include "kernfuzz/kernel_corpus.h"
#include "kernfuzz/mutation.h"

namespace kernfuzz {

enum class ExitKind { kGraceful, kFault, kOther };

struct ExitClass {
  ExitKind kind = ExitKind::kGraceful;
  FaultClass fault = FaultClass::kSegvLike;  // kFault only
  int code = 0;

  friend bool operator==(const ExitClass &, const ExitClass &) = default;
};

ExitClass ClassifyExit(int exit_code);

enum class SessionStatus {
  kCompleted,
  kCrashed,
  kTimedOut,
  kMemoryExceeded,
  // The child ended in a way that is neither graceful nor a fault.
  kFailed,
};

std::string_view SessionStatusName(SessionStatus s);  // Completed, ...
SessionStatus ParseSessionStatus(std::string_view name);

struct CrashRecord {
  Uin uin;
  FaultClass fault = FaultClass::kSegvLike;
  int64_t at_ns = 0;

  friend bool operator==(const CrashRecord &, const CrashRecord &) = default;
};

std::string RenderCrashRecord(const CrashRecord &record);
// Throws ParseError.
CrashRecord ParseCrashRecord(std::string_view line);
// Missing file reads as empty. Throws ParseError / OperationalError.
std::vector<CrashRecord> ReadCrashRecords(const std::filesystem::path &path);

struct SessionOutcome {
  std::string kernel;
  SessionStatus status = SessionStatus::kCompleted;
  std::vector<CrashRecord> crashes;
  int64_t started_unix_ns = 0;
  int64_t ended_unix_ns = 0;
  int rerun_count = 0;
  // Free text for Failed / limit outcomes.
  std::string detail;
};

struct CampaignConfig {
  std::chrono::nanoseconds timeout_per_kernel = std::chrono::seconds(60);
  uint64_t memory_cap_bytes = uint64_t{1} << 30;
  uint64_t kernel_order_seed = 1;
  int max_reruns = 1000;
  int jobs = 1;
  // Zero every wall-clock timestamp written to results and crash records.
  bool normalize_timestamps = false;
  // Program that implements the hidden `__driver` subcommand.
  std::filesystem::path executable;
  // Campaign artifact directory.
  std::filesystem::path out_dir;

  // Throws ValidationError.
  void Validate() const;
};

// Seeded Fisher-Yates permutation of `kernels` after sorting them by name.
std::vector<std::string> VisitationOrder(std::vector<std::string> kernels,
                                         uint64_t seed);

// `mcfg` must already be saved at the layout's mutation_config() path.
// Throws OperationalError when the child cannot be started.
SessionOutcome RunSession(std::string_view kernel, const Registry &registry,
                          const CampaignConfig &cfg,
                          const MutationConfig &mcfg);

// Runs a session for each of `kernels` (in the given order) and writes the
// results CSV. Outcomes come back in the same order.
std::vector<SessionOutcome> Orchestrate(const Registry &registry,
                                        const std::vector<std::string> &kernels,
                                        const CampaignConfig &cfg,
                                        const MutationConfig &mcfg);

// Header `kernel,status,started_unix_ns,ended_unix_ns,crash_count,rerun_count`.
std::string RenderResultsCsv(const std::vector<SessionOutcome> &outcomes);

struct ResultRow {
  std::string kernel;
  SessionStatus status = SessionStatus::kCompleted;
  int64_t started_unix_ns = 0;
  int64_t ended_unix_ns = 0;
  int64_t crash_count = 0;
  int64_t rerun_count = 0;
};

// Throws ParseError.
std::vector<ResultRow> ParseResultsCsv(std::string_view text);

}  // namespace kernfuzz

#endif  // KERNFUZZ_WATCHDOG_H_
