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

#include "kernfuzz/process.h"

#include <fcntl.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <map>
#include <thread>

#include "kernfuzz/errors.h"

extern char **environ;

namespace kernfuzz {
namespace {

// Only async-signal-safe calls between fork and exec.
[[noreturn]] void ExecChild(const ChildSpec &spec, char *const argv[],
                            char *const envp[], int err_fd) {
  ::setpgid(0, 0);
  if (spec.memory_limit_bytes > 0) {
    rlimit lim;
    lim.rlim_cur = spec.memory_limit_bytes;
    lim.rlim_max = spec.memory_limit_bytes;
    ::setrlimit(RLIMIT_AS, &lim);
  }
  auto redirect = [&](const std::filesystem::path &path, int target) {
    if (path.empty()) return;
    const int fd =
        ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (fd >= 0) ::dup2(fd, target);
  };
  redirect(spec.stdout_path, STDOUT_FILENO);
  redirect(spec.stderr_path, STDERR_FILENO);
  ::execve(argv[0], argv, envp);
  const int err = errno;
  [[maybe_unused]] ssize_t n = ::write(err_fd, &err, sizeof(err));
  ::_exit(127);
}

}  // namespace

ChildResult RunChild(const ChildSpec &spec) {
  if (spec.argv.empty()) throw OperationalError("empty child argv");

  std::vector<char *> argv;
  for (const auto &a : spec.argv) argv.push_back(const_cast<char *>(a.c_str()));
  argv.push_back(nullptr);

  std::map<std::string, std::string> env_map;
  for (char **e = environ; *e != nullptr; ++e) {
    const std::string entry(*e);
    const auto eq = entry.find('=');
    if (eq == std::string::npos) continue;
    env_map[entry.substr(0, eq)] = entry.substr(eq + 1);
  }
  for (const auto &[k, v] : spec.env) env_map[k] = v;
  std::vector<std::string> env_strings;
  for (const auto &[k, v] : env_map) env_strings.push_back(k + "=" + v);
  std::vector<char *> envp;
  for (auto &s : env_strings) envp.push_back(s.data());
  envp.push_back(nullptr);

  int pipe_fds[2];
  if (::pipe2(pipe_fds, O_CLOEXEC) != 0) {
    throw OperationalError(std::string("pipe: ") + std::strerror(errno));
  }

  const auto start = std::chrono::steady_clock::now();
  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(pipe_fds[0]);
    ::close(pipe_fds[1]);
    throw OperationalError(std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::close(pipe_fds[0]);
    ExecChild(spec, argv.data(), envp.data(), pipe_fds[1]);
  }
  // Both sides call setpgid so the group exists before any kill.
  ::setpgid(pid, pid);
  ::close(pipe_fds[1]);
  int exec_errno = 0;
  const ssize_t got = ::read(pipe_fds[0], &exec_errno, sizeof(exec_errno));
  ::close(pipe_fds[0]);
  if (got == sizeof(exec_errno)) {
    int status;
    ::waitpid(pid, &status, 0);
    throw OperationalError("cannot execute " + spec.argv[0] + ": " +
                           std::strerror(exec_errno));
  }

  ChildResult result;
  int status = 0;
  auto delay = std::chrono::microseconds(200);
  while (true) {
    const pid_t r = ::waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    if (r < 0 && errno != EINTR) {
      throw OperationalError(std::string("waitpid: ") + std::strerror(errno));
    }
    if (spec.timeout.count() > 0 &&
        std::chrono::steady_clock::now() - start >= spec.timeout) {
      ::kill(-pid, SIGKILL);
      ::kill(pid, SIGKILL);
      while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
      }
      result.timed_out = true;
      break;
    }
    std::this_thread::sleep_for(delay);
    if (delay < std::chrono::milliseconds(10)) delay *= 2;
  }
  // Reap anything the child left behind in its group.
  ::kill(-pid, SIGKILL);
  result.wall_time = std::chrono::steady_clock::now() - start;
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.exit_code = 128 + WTERMSIG(status);
  }
  return result;
}

std::filesystem::path SelfExecutable() {
  std::error_code ec;
  auto p = std::filesystem::read_symlink("/proc/self/exe", ec);
  if (ec) throw OperationalError("cannot resolve /proc/self/exe");
  return p;
}

}  // namespace kernfuzz
