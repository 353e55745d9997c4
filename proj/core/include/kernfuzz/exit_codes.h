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

#ifndef KERNFUZZ_EXIT_CODES_H_
#define KERNFUZZ_EXIT_CODES_H_

namespace kernfuzz {

// Process exit codes outside the fault classes (134/136/139).
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitOperational = 3;
// The mutation log could not be written; the session cannot attribute
// crashes and stops.
inline constexpr int kExitLogWriteFailure = 4;
// Allocation failed under the session memory cap.
inline constexpr int kExitMemoryExceeded = 5;

}  // namespace kernfuzz

#endif  // KERNFUZZ_EXIT_CODES_H_
