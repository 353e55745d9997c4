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

#include "kernfuzz/harness.h"

#include <fcntl.h>
#include <signal.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <iostream>
#include <utility>

#include "kernfuzz/errors.h"
#include "kernfuzz/exit_codes.h"
#include "kernfuzz/text.h"

namespace kernfuzz {
namespace {

namespace fs = std::filesystem;

std::atomic<bool> already_fuzzing{false};

class FuzzingFlag {
 public:
  FuzzingFlag() { already_fuzzing.store(true); }
  ~FuzzingFlag() { already_fuzzing.store(false); }
};

int64_t NowNs() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

// Append-only sink for per-attempt timings. Silently disabled when the
// directory is not configured.
class TimingSidecar {
 public:
  explicit TimingSidecar(const fs::path &path) {
    if (path.empty()) return;
    fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC,
                 0644);
    if (fd_ < 0) {
      throw OperationalError("cannot open " + path.string() + ": " +
                             std::strerror(errno));
    }
    if (::lseek(fd_, 0, SEEK_END) == 0) Emit("uin,start_ns,end_ns,outcome\n");
  }
  ~TimingSidecar() {
    if (fd_ >= 0) ::close(fd_);
  }
  TimingSidecar(const TimingSidecar &) = delete;
  TimingSidecar &operator=(const TimingSidecar &) = delete;

  void Append(Uin uin, int64_t start_ns, int64_t end_ns,
              std::string_view outcome) {
    if (fd_ < 0) return;
    std::string line = FormatNumber(uin.index);
    line += ',';
    line += FormatNumber(start_ns);
    line += ',';
    line += FormatNumber(end_ns);
    line += ',';
    line += outcome;
    line += '\n';
    Emit(line);
  }

 private:
  void Emit(std::string_view s) {
    // Timing is advisory; a short write is not worth killing the session.
    [[maybe_unused]] ssize_t n = ::write(fd_, s.data(), s.size());
  }

  int fd_ = -1;
};

fs::path DoneMarker(const SessionState &state, std::string_view kernel) {
  return state.done_dir / (std::string(kernel) + ".done");
}

}  // namespace

bool AlreadyFuzzing() { return already_fuzzing.load(); }

std::string RenderMutationLog(const MutationLogRecord &record) {
  std::string out;
  out += "kernel=" + record.kernel + "\n";
  out += "seed=" + FormatNumber(record.seed) + "\n";
  out += "cfghash=" + record.cfghash + "\n";
  out += "uin=" + FormatNumber(record.uin.index) + "\n";
  return out;
}

MutationLogRecord ParseMutationLog(std::string_view text) {
  if (text.empty() || text.back() != '\n') {
    throw ParseError("mutation log is truncated");
  }
  text.remove_suffix(1);
  const auto lines = Split(text, '\n');
  if (lines.size() != 4) throw ParseError("mutation log needs 4 lines");
  auto field = [&](size_t i, std::string_view key) {
    const std::string prefix = std::string(key) + "=";
    if (!StartsWith(lines[i], prefix)) {
      throw ParseError("mutation log line " + std::to_string(i + 1) +
                       " is not '" + prefix + "'");
    }
    return lines[i].substr(prefix.size());
  };
  MutationLogRecord record;
  record.kernel = std::string(field(0, "kernel"));
  if (record.kernel.empty()) throw ParseError("mutation log has no kernel");
  record.seed = ParseNumber<uint64_t>(field(1, "seed"), "seed");
  record.cfghash = std::string(field(2, "cfghash"));
  record.uin.index = ParseNumber<uint64_t>(field(3, "uin"), "uin");
  return record;
}

MutationLogRecord ReadMutationLog(const fs::path &path) {
  return ParseMutationLog(ReadFile(path));
}

MutationLog::MutationLog(fs::path path, std::string kernel, uint64_t seed,
                         std::string cfghash)
    : path_(std::move(path)) {
  record_.kernel = std::move(kernel);
  record_.seed = seed;
  record_.cfghash = std::move(cfghash);
  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw OperationalError("cannot open mutation log " + path_.string() +
                           ": " + std::strerror(errno));
  }
}

MutationLog::~MutationLog() {
  if (fd_ >= 0) ::close(fd_);
}

void MutationLog::Write(Uin uin) {
  record_.uin = uin;
  const std::string text = RenderMutationLog(record_);
  const ssize_t n = ::pwrite(fd_, text.data(), text.size(), 0);
  if (n != static_cast<ssize_t>(text.size())) {
    std::cerr << "kernfuzz: cannot write mutation log " << path_.string()
              << ": " << std::strerror(errno) << "\n";
    std::_Exit(kExitLogWriteFailure);
  }
  if (text.size() < last_size_ &&
      ::ftruncate(fd_, static_cast<off_t>(text.size())) != 0) {
    std::cerr << "kernfuzz: cannot truncate mutation log " << path_.string()
              << "\n";
    std::_Exit(kExitLogWriteFailure);
  }
  last_size_ = text.size();
}

void LogUin(MutationLog &log, Uin uin) { log.Write(uin); }

ResumePoint ResumeFrom(const fs::path &log_path, std::string_view kernel,
                       uint64_t seed, std::string_view cfghash) {
  std::error_code ec;
  if (!fs::exists(log_path, ec)) return {};
  MutationLogRecord record;
  try {
    record = ReadMutationLog(log_path);
  } catch (const Error &e) {
    return {Uin{0}, "unusable mutation log " + log_path.string() + " (" +
                        e.what() + "); restarting at 0"};
  }
  if (record.kernel != kernel || record.seed != seed ||
      record.cfghash != cfghash) {
    return {Uin{0}, "mutation log " + log_path.string() +
                        " belongs to a different session; restarting at 0"};
  }
  return {Uin{record.uin.index + 1}, std::nullopt};
}

bool WasFuzzed(const SessionState &state, std::string_view kernel) {
  std::error_code ec;
  const fs::file_status dir = fs::status(state.done_dir, ec);
  if (dir.type() == fs::file_type::not_found) return false;
  if (ec || dir.type() != fs::file_type::directory) {
    throw OperationalError("cannot inspect " + state.done_dir.string());
  }
  const fs::file_status marker = fs::status(DoneMarker(state, kernel), ec);
  if (marker.type() == fs::file_type::not_found) return false;
  if (ec) throw OperationalError("cannot inspect " + state.done_dir.string());
  return true;
}

void MarkFuzzed(const SessionState &state, std::string_view kernel) {
  std::error_code ec;
  fs::create_directories(state.done_dir, ec);
  if (ec) {
    throw OperationalError("cannot create " + state.done_dir.string() + ": " +
                           ec.message());
  }
  WriteFileAtomic(DoneMarker(state, kernel), "");
}

Value FuzzEntry(const KernelEntry &kernel, std::span<const Value> original_args,
                SessionState &state, const MutationConfig &cfg) {
  const std::string &name = kernel.signature.name;
  if (AlreadyFuzzing() || WasFuzzed(state, name)) {
    return InvokeKernel(kernel, original_args);
  }
  {
    FuzzingFlag flag;
    ++state.pool_builds[name];
    const PoolSet pools = BuildPools(kernel.signature, original_args, cfg);
    const uint64_t count = CombinationCount(pools, cfg);
    const std::string cfghash = cfg.Fingerprint();

    std::error_code ec;
    fs::create_directories(state.logs_dir, ec);
    if (!state.timing_dir.empty()) fs::create_directories(state.timing_dir, ec);
    const fs::path log_path = state.logs_dir / name;
    const ResumePoint resume =
        ResumeFrom(log_path, name, cfg.rng_seed, cfghash);
    if (resume.warning) {
      ++state.resume_warnings;
      std::cerr << "kernfuzz: warning: " << *resume.warning << "\n";
    }
    MutationLog log(log_path, name, cfg.rng_seed, cfghash);
    TimingSidecar timing(state.timing_dir.empty()
                             ? fs::path()
                             : state.timing_dir / (name + ".csv"));

    for (uint64_t i = resume.start.index; i < count; ++i) {
      const Uin uin{i};
      const ArgTuple args = NthCombination(pools, uin, cfg);
      LogUin(log, uin);
      if (state.kill_after_log_uin == i) ::raise(SIGKILL);
      ++state.attempts[name];
      const int64_t start_ns = NowNs();
      std::string_view outcome = "ok";
      try {
        InvokeKernel(kernel, args);
      } catch (const ValidationError &) {
        outcome = "rejected";
        ++state.rejected[name];
      } catch (const std::exception &) {
        outcome = "error";
        ++state.rejected[name];
      }
      timing.Append(uin, start_ns, NowNs(), outcome);
    }
    MarkFuzzed(state, name);
  }
  return InvokeKernel(kernel, original_args);
}

KernelInvoker FuzzingInvoker(SessionState &state, const MutationConfig &cfg) {
  return [&state, &cfg](const KernelEntry &entry,
                        std::span<const Value> args) {
    return FuzzEntry(entry, args, state, cfg);
  };
}

}  // namespace kernfuzz
