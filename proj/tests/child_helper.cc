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

// Misbehaving child process for runner and watchdog tests.
//
//   child_helper exit <code>
//   child_helper signal <signo>
//   child_helper sleep <ms>
//   child_helper alloc <mb>        touch <mb> MiB; exits 5 if allocation fails
//   child_helper grandchild <ms>   fork a sleeper, print its pid, sleep
//   child_helper env <name>        print $name
//   child_helper __driver ...      act per $HELPER_DRIVER (exit:<n> | sleep:<ms> | alloc)

#include <signal.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <thread>
#include <vector>

namespace {

void NoMemory() { std::_Exit(5); }

int Alloc(long mb) {
  std::set_new_handler(NoMemory);
  std::vector<std::vector<char>> blocks;
  for (long i = 0; i < mb; ++i) {
    blocks.emplace_back(1 << 20);
    std::memset(blocks.back().data(), 1, blocks.back().size());
  }
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  if (argc < 2) return 64;
  const std::string mode = argv[1];
  const long arg = argc > 2 ? std::atol(argv[2]) : 0;
  if (mode == "exit") return static_cast<int>(arg);
  if (mode == "signal") {
    ::signal(static_cast<int>(arg), SIG_DFL);
    ::raise(static_cast<int>(arg));
    return 0;
  }
  if (mode == "sleep") {
    std::this_thread::sleep_for(std::chrono::milliseconds(arg));
    return 0;
  }
  if (mode == "alloc") return Alloc(arg);
  if (mode == "grandchild") {
    const pid_t pid = ::fork();
    if (pid == 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(arg));
      std::_Exit(0);
    }
    std::printf("%d\n", static_cast<int>(pid));
    std::fflush(stdout);
    std::this_thread::sleep_for(std::chrono::milliseconds(arg));
    return 0;
  }
  if (mode == "env") {
    const char *v = argc > 2 ? std::getenv(argv[2]) : nullptr;
    std::printf("%s\n", v != nullptr ? v : "");
    return 0;
  }
  if (mode == "__driver") {
    const char *what = std::getenv("HELPER_DRIVER");
    const std::string w = what != nullptr ? what : "exit:0";
    if (w == "alloc") return Alloc(1 << 20);
    if (w.rfind("exit:", 0) == 0) return std::atoi(w.c_str() + 5);
    if (w.rfind("sleep:", 0) == 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(std::atol(w.c_str() + 6)));
      return 0;
    }
    return 64;
  }
  return 64;
}
