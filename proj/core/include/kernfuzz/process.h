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

// Runs a child process with a wall-clock limit and an address-space cap.
#ifndef KERNFUZZ_PROCESS_H_
#define KERNFUZZ_PROCESS_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace kernfuzz {

struct ChildSpec {
  // argv[0] is the executable path.
  std::vector<std::string> argv;
  // Added to (or replacing in) the parent's environment.
  std::vector<std::pair<std::string, std::string>> env;
  // Zero means no limit.
  std::chrono::nanoseconds timeout{0};
  // RLIMIT_AS for the child; zero means no limit.
  uint64_t memory_limit_bytes = 0;
  // Empty inherits the parent's stream.
  std::filesystem::path stdout_path;
  std::filesystem::path stderr_path;
};

struct ChildResult {
  // Exit status, or 128 + signal number when killed by a signal.
  int exit_code = 0;
  bool timed_out = false;
  std::chrono::nanoseconds wall_time{0};
};

// The child runs in its own process group; on timeout the whole group is
// sent SIGKILL. Throws OperationalError when the child cannot be started.
ChildResult RunChild(const ChildSpec &spec);

// Path of the running executable.
std::filesystem::path SelfExecutable();

}  // namespace kernfuzz

#endif  // KERNFUZZ_PROCESS_H_
