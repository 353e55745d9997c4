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

// Fault-injection substrate.
//
// Corpus kernels are written against these primitives instead of raw memory.
// A bug that would corrupt memory or trap in native code ends the process
// with exit code 128 + signo of the corresponding signal, after appending a
// one-line record to the file named by $FAULT_LOG:
//
//   FAULT <segv|fpe|abort> <kernel> <detail>
//
// Nothing here ever returns a wrong value: a primitive either does what it
// says or terminates the process.
#ifndef KERNFUZZ_FAULT_H_
#define KERNFUZZ_FAULT_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kernfuzz {

enum class FaultClass { kSegvLike, kFpeLike, kAbortLike };

inline constexpr int kSegvExitCode = 139;   // 128 + SIGSEGV
inline constexpr int kFpeExitCode = 136;    // 128 + SIGFPE
inline constexpr int kAbortExitCode = 134;  // 128 + SIGABRT

constexpr int ExitCodeFor(FaultClass fault) {
  switch (fault) {
    case FaultClass::kSegvLike:
      return kSegvExitCode;
    case FaultClass::kFpeLike:
      return kFpeExitCode;
    case FaultClass::kAbortLike:
      return kAbortExitCode;
  }
  return 1;
}

std::optional<FaultClass> FaultClassFromExitCode(int exit_code);
std::string_view FaultClassName(FaultClass fault);  // segv / fpe / abort
// Throws ParseError.
FaultClass ParseFaultClass(std::string_view name);

// Names the kernel that fault records are attributed to, for the lifetime
// of the scope. Scopes nest; the innermost wins.
class KernelScope {
 public:
  explicit KernelScope(std::string_view kernel);
  ~KernelScope();
  KernelScope(const KernelScope &) = delete;
  KernelScope &operator=(const KernelScope &) = delete;

  // "-" outside any scope.
  static std::string_view Current();

 private:
  std::string_view previous_;
};

// Appends the fault record and terminates with the class's exit code.
[[noreturn]] void RaiseFault(FaultClass fault, std::string_view detail);

[[noreturn]] void FaultAbort(std::string_view reason);

// num / den, truncating toward zero; terminates with the FPE code when den is
// zero. INT64_MIN / -1 wraps to INT64_MIN.
int64_t FaultDivide(int64_t num, int64_t den);

// Fixed-length element storage standing in for unchecked native memory.
// Accepts any signed index at the call site; out-of-range access terminates
// with the SEGV code.
template <typename T>
class RawBuffer {
 public:
  explicit RawBuffer(size_t length, T init = T{}) : data_(length, init) {}

  int64_t length() const { return static_cast<int64_t>(data_.size()); }

  void Write(int64_t index, T value) {
    Check(index, "write");
    data_[static_cast<size_t>(index)] = std::move(value);
  }

  const T &Read(int64_t index) const {
    Check(index, "read");
    return data_[static_cast<size_t>(index)];
  }

  std::span<const T> contents() const { return data_; }

 private:
  void Check(int64_t index, std::string_view op) const {
    if (index < 0 || index >= length()) {
      RaiseFault(FaultClass::kSegvLike,
                 std::string(op) + " index=" + std::to_string(index) +
                     " length=" + std::to_string(length()));
    }
  }

  std::vector<T> data_;
};

}  // namespace kernfuzz

#endif  // KERNFUZZ_FAULT_H_
