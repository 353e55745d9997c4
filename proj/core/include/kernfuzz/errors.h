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

#ifndef KERNFUZZ_ERRORS_H_
#define KERNFUZZ_ERRORS_H_

#include <stdexcept>
#include <string>

namespace kernfuzz {

// Base for every recoverable error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A kernel rejected its inputs. The fuzz loop counts and skips these; they
// are never crashes.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An index (UIN, digit, element) outside its domain.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Malformed text input: config files, logs, reports, manifests.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Filesystem or process-level failure.
class OperationalError : public Error {
 public:
  using Error::Error;
};

// A report and the engine disagree (e.g. a UIN that is not reconstructible
// under the recorded config fingerprint).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// The crashing kernel has no high-level binding.
class NoBindingError : public Error {
 public:
  using Error::Error;
};

// An argument form outside the canonical literal grammar.
class UnsupportedArgError : public Error {
 public:
  using Error::Error;
};

}  // namespace kernfuzz

#endif  // KERNFUZZ_ERRORS_H_
