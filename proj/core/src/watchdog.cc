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

#include "kernfuzz/watchdog.h"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

#include "kernfuzz/errors.h"
#include "kernfuzz/exit_codes.h"
#include "kernfuzz/harness.h"
#include "kernfuzz/layout.h"
#include "kernfuzz/process.h"
#include "kernfuzz/text.h"

namespace kernfuzz {
namespace {

namespace fs = std::filesystem;

constexpr std::string_view kResultsHeader =
    "kernel,status,started_unix_ns,ended_unix_ns,crash_count,rerun_count";

int64_t NowUnixNs() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

uint64_t SplitMix64(uint64_t &state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

bool IsTarget(const Registry &registry, std::string_view kernel) {
  for (const auto &sig : ExtractTargets(registry)) {
    if (sig.name == kernel) return true;
  }
  return false;
}

}  // namespace

ExitClass ClassifyExit(int exit_code) {
  if (exit_code == 0) return {ExitKind::kGraceful, FaultClass::kSegvLike, 0};
  if (auto fault = FaultClassFromExitCode(exit_code)) {
    return {ExitKind::kFault, *fault, exit_code};
  }
  return {ExitKind::kOther, FaultClass::kSegvLike, exit_code};
}

std::string_view SessionStatusName(SessionStatus s) {
  switch (s) {
    case SessionStatus::kCompleted:
      return "Completed";
    case SessionStatus::kCrashed:
      return "Crashed";
    case SessionStatus::kTimedOut:
      return "TimedOut";
    case SessionStatus::kMemoryExceeded:
      return "MemoryExceeded";
    case SessionStatus::kFailed:
      return "Failed";
  }
  return "?";
}

SessionStatus ParseSessionStatus(std::string_view name) {
  for (auto s : {SessionStatus::kCompleted, SessionStatus::kCrashed,
                 SessionStatus::kTimedOut, SessionStatus::kMemoryExceeded,
                 SessionStatus::kFailed}) {
    if (SessionStatusName(s) == name) return s;
  }
  throw ParseError("unknown session status '" + std::string(name) + "'");
}

std::string RenderCrashRecord(const CrashRecord &record) {
  return "uin=" + FormatNumber(record.uin.index) +
         " class=" + std::string(FaultClassName(record.fault)) +
         " at_ns=" + FormatNumber(record.at_ns);
}

CrashRecord ParseCrashRecord(std::string_view line) {
  const auto fields = Split(Trim(line), ' ');
  if (fields.size() != 3) throw ParseError("crash record needs 3 fields");
  auto value = [&](size_t i, std::string_view key) {
    const std::string prefix = std::string(key) + "=";
    if (!StartsWith(fields[i], prefix)) {
      throw ParseError("crash record field " + std::to_string(i + 1) +
                       " is not '" + prefix + "'");
    }
    return fields[i].substr(prefix.size());
  };
  CrashRecord record;
  record.uin.index = ParseNumber<uint64_t>(value(0, "uin"), "uin");
  record.fault = ParseFaultClass(value(1, "class"));
  record.at_ns = ParseNumber<int64_t>(value(2, "at_ns"), "at_ns");
  return record;
}

std::vector<CrashRecord> ReadCrashRecords(const fs::path &path) {
  std::vector<CrashRecord> out;
  std::error_code ec;
  if (!fs::exists(path, ec)) return out;
  const std::string text = ReadFile(path);
  for (auto line : Split(text, '\n')) {
    if (Trim(line).empty()) continue;
    out.push_back(ParseCrashRecord(line));
  }
  return out;
}

void CampaignConfig::Validate() const {
  if (timeout_per_kernel.count() <= 0) {
    throw ValidationError("timeout must be positive");
  }
  if (max_reruns < 0) throw ValidationError("max_reruns must be >= 0");
  if (jobs < 1) throw ValidationError("jobs must be >= 1");
  if (executable.empty()) throw ValidationError("no driver executable");
  if (out_dir.empty()) throw ValidationError("no output directory");
}

std::vector<std::string> VisitationOrder(std::vector<std::string> kernels,
                                         uint64_t seed) {
  std::sort(kernels.begin(), kernels.end());
  uint64_t state = seed;
  for (size_t i = kernels.size(); i > 1; --i) {
    const size_t j = SplitMix64(state) % i;
    std::swap(kernels[i - 1], kernels[j]);
  }
  return kernels;
}

SessionOutcome RunSession(std::string_view kernel, const Registry &registry,
                          const CampaignConfig &cfg,
                          const MutationConfig &mcfg) {
  cfg.Validate();
  if (!IsTarget(registry, kernel)) {
    throw ValidationError("'" + std::string(kernel) + "' is not a fuzz target");
  }
  const ArtifactLayout layout(cfg.out_dir);
  layout.CreateDirectories();

  SessionOutcome outcome;
  outcome.kernel = std::string(kernel);
  outcome.started_unix_ns = NowUnixNs();
  const auto deadline = std::chrono::steady_clock::now() + cfg.timeout_per_kernel;
  const std::string cfghash = mcfg.Fingerprint();

  ChildSpec spec;
  spec.argv = {cfg.executable.string(), "__driver", "--kernel",
               outcome.kernel, "--out", cfg.out_dir.string()};
  if (std::getenv("FAULT_LOG") == nullptr) {
    spec.env.emplace_back("FAULT_LOG", layout.fault_log(kernel).string());
  }
  spec.memory_limit_bytes = cfg.memory_cap_bytes;
  spec.stderr_path = layout.session_stderr(kernel);

  auto finish = [&](SessionStatus status, std::string detail) {
    outcome.status = status;
    outcome.detail = std::move(detail);
    outcome.ended_unix_ns = NowUnixNs();
    if (cfg.normalize_timestamps) {
      outcome.started_unix_ns = 0;
      outcome.ended_unix_ns = 0;
    }
    return outcome;
  };

  while (true) {
    const auto remaining = deadline - std::chrono::steady_clock::now();
    if (remaining.count() <= 0) return finish(SessionStatus::kTimedOut, "");
    spec.timeout = std::chrono::duration_cast<std::chrono::nanoseconds>(remaining);
    const ChildResult child = RunChild(spec);
    if (child.timed_out) return finish(SessionStatus::kTimedOut, "");

    const ExitClass exit = ClassifyExit(child.exit_code);
    if (exit.kind == ExitKind::kGraceful) {
      return finish(outcome.crashes.empty() ? SessionStatus::kCompleted
                                            : SessionStatus::kCrashed,
                    "");
    }
    if (exit.kind == ExitKind::kOther) {
      if (child.exit_code == kExitMemoryExceeded) {
        return finish(SessionStatus::kMemoryExceeded, "");
      }
      return finish(SessionStatus::kFailed,
                    "driver exited with code " + std::to_string(child.exit_code));
    }

    MutationLogRecord log;
    try {
      log = ReadMutationLog(layout.log_file(kernel));
    } catch (const Error &e) {
      return finish(SessionStatus::kFailed,
                    std::string("fault without a usable mutation log: ") +
                        e.what());
    }
    if (log.kernel != kernel || log.seed != mcfg.rng_seed ||
        log.cfghash != cfghash) {
      return finish(SessionStatus::kFailed,
                    "mutation log belongs to a different session");
    }
    for (const auto &c : outcome.crashes) {
      if (c.uin == log.uin) {
        // Resumption always moves past a logged crasher, so a repeat means
        // the fault happened outside the fuzz loop.
        return finish(SessionStatus::kFailed,
                      "repeat fault at uin " + FormatNumber(log.uin.index));
      }
    }
    CrashRecord record{log.uin, exit.fault,
                       cfg.normalize_timestamps ? 0 : NowUnixNs()};
    AppendLine(layout.crash_file(kernel), RenderCrashRecord(record));
    outcome.crashes.push_back(record);
    if (outcome.rerun_count >= cfg.max_reruns) {
      return finish(SessionStatus::kCrashed, "max_reruns reached");
    }
    ++outcome.rerun_count;
  }
}

std::vector<SessionOutcome> Orchestrate(const Registry &registry,
                                        const std::vector<std::string> &kernels,
                                        const CampaignConfig &cfg,
                                        const MutationConfig &mcfg) {
  cfg.Validate();
  const ArtifactLayout layout(cfg.out_dir);
  layout.CreateDirectories();
  WriteFileAtomic(layout.mutation_config(), mcfg.Serialize());

  std::vector<SessionOutcome> outcomes(kernels.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= kernels.size()) return;
      try {
        outcomes[i] = RunSession(kernels[i], registry, cfg, mcfg);
      } catch (const std::exception &e) {
        SessionOutcome failed;
        failed.kernel = kernels[i];
        failed.status = SessionStatus::kFailed;
        failed.detail = e.what();
        outcomes[i] = std::move(failed);
      }
    }
  };
  const int jobs = std::min<int>(cfg.jobs, std::max<size_t>(kernels.size(), 1));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int j = 0; j < jobs; ++j) threads.emplace_back(worker);
    for (auto &t : threads) t.join();
  }
  WriteFileAtomic(layout.results(), RenderResultsCsv(outcomes));
  return outcomes;
}

std::string RenderResultsCsv(const std::vector<SessionOutcome> &outcomes) {
  std::string out(kResultsHeader);
  out += '\n';
  for (const auto &o : outcomes) {
    out += o.kernel;
    out += ',';
    out += SessionStatusName(o.status);
    out += ',' + FormatNumber(o.started_unix_ns);
    out += ',' + FormatNumber(o.ended_unix_ns);
    out += ',' + FormatNumber(static_cast<uint64_t>(o.crashes.size()));
    out += ',' + FormatNumber(static_cast<int64_t>(o.rerun_count));
    out += '\n';
  }
  return out;
}

std::vector<ResultRow> ParseResultsCsv(std::string_view text) {
  auto lines = Split(text, '\n');
  if (lines.empty() || Trim(lines[0]) != kResultsHeader) {
    throw ParseError("results csv header mismatch");
  }
  std::vector<ResultRow> rows;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    const auto f = Split(Trim(lines[i]), ',');
    if (f.size() != 6) throw ParseError("results csv row needs 6 fields");
    ResultRow row;
    row.kernel = std::string(f[0]);
    row.status = ParseSessionStatus(f[1]);
    row.started_unix_ns = ParseNumber<int64_t>(f[2], "started_unix_ns");
    row.ended_unix_ns = ParseNumber<int64_t>(f[3], "ended_unix_ns");
    row.crash_count = ParseNumber<int64_t>(f[4], "crash_count");
    row.rerun_count = ParseNumber<int64_t>(f[5], "rerun_count");
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace kernfuzz
