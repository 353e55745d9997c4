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

#include <fcntl.h>
#include <unistd.h>

#include <cstdlib>
#include <limits>
#include <string>

#include "kernfuzz/errors.h"

namespace kernfuzz {
namespace {

thread_local std::string_view current_kernel = "-";

void AppendFaultRecord(FaultClass fault, std::string_view detail) {
  const char *path = std::getenv("FAULT_LOG");
  if (path == nullptr || *path == '\0') return;
  std::string line = "FAULT ";
  line += FaultClassName(fault);
  line += ' ';
  line += current_kernel;
  line += ' ';
  line += detail.empty() ? std::string_view("-") : detail;
  line += '\n';
  int fd = ::open(path, O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) return;
  // Single write so concurrent writers never interleave within a line.
  ssize_t ignored = ::write(fd, line.data(), line.size());
  (void)ignored;
  ::close(fd);
}

}  // namespace

std::optional<FaultClass> FaultClassFromExitCode(int exit_code) {
  switch (exit_code) {
    case kSegvExitCode:
      return FaultClass::kSegvLike;
    case kFpeExitCode:
      return FaultClass::kFpeLike;
    case kAbortExitCode:
      return FaultClass::kAbortLike;
    default:
      return std::nullopt;
  }
}

std::string_view FaultClassName(FaultClass fault) {
  switch (fault) {
    case FaultClass::kSegvLike:
      return "segv";
    case FaultClass::kFpeLike:
      return "fpe";
    case FaultClass::kAbortLike:
      return "abort";
  }
  return "?";
}

FaultClass ParseFaultClass(std::string_view name) {
  if (name == "segv") return FaultClass::kSegvLike;
  if (name == "fpe") return FaultClass::kFpeLike;
  if (name == "abort") return FaultClass::kAbortLike;
  throw ParseError("unknown fault class '" + std::string(name) + "'");
}

KernelScope::KernelScope(std::string_view kernel)
    : previous_(current_kernel) {
  current_kernel = kernel;
}

KernelScope::~KernelScope() { current_kernel = previous_; }

std::string_view KernelScope::Current() { return current_kernel; }

void RaiseFault(FaultClass fault, std::string_view detail) {
  AppendFaultRecord(fault, detail);
  std::_Exit(ExitCodeFor(fault));
}

void FaultAbort(std::string_view reason) {
  RaiseFault(FaultClass::kAbortLike,
             reason.empty() ? std::string("abort")
                            : "abort: " + std::string(reason));
}

int64_t FaultDivide(int64_t num, int64_t den) {
  if (den == 0) {
    RaiseFault(FaultClass::kFpeLike,
               "divide num=" + std::to_string(num) + " den=0");
  }
  if (num == std::numeric_limits<int64_t>::min() && den == -1) return num;
  return num / den;
}

}  // namespace kernfuzz
