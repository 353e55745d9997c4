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

// Small text and file helpers shared by the on-disk formats.
#ifndef KERNFUZZ_TEXT_H_
#define KERNFUZZ_TEXT_H_

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <vector>

#include "kernfuzz/errors.h"

namespace kernfuzz {

std::vector<std::string_view> Split(std::string_view text, char sep);
std::string_view Trim(std::string_view text);
bool StartsWith(std::string_view text, std::string_view prefix);

uint64_t Fnv1a64(std::string_view data);

// Shortest text that parses back to the same value.
std::string FormatNumber(int64_t v);
std::string FormatNumber(uint64_t v);
std::string FormatNumber(double v);
// FormatNumber, plus ".0" when the text would otherwise read as an integer.
std::string FormatFloatLiteral(double v);

// Whole-string numeric parse. Throws ParseError naming `what`.
template <typename T>
T ParseNumber(std::string_view text, std::string_view what) {
  T value{};
  const char *begin = text.data();
  const char *end = text.data() + text.size();
  if constexpr (std::is_floating_point_v<T>) {
    // from_chars rejects a leading '+'.
    if (!text.empty() && text.front() == '+') ++begin;
  }
  const auto res = std::from_chars(begin, end, value);
  if (text.empty() || res.ec != std::errc() || res.ptr != end) {
    throw ParseError("bad number '" + std::string(text) + "' for " +
                     std::string(what));
  }
  return value;
}

// Throws OperationalError.
std::string ReadFile(const std::filesystem::path &path);
// Writes via a temporary file and rename. Throws OperationalError.
void WriteFileAtomic(const std::filesystem::path &path,
                     std::string_view contents);
// Appends with a single write(2). Throws OperationalError.
void AppendLine(const std::filesystem::path &path, std::string_view line);

// "..." with backslash escapes for '"', '\\', '\n'.
std::string QuoteString(std::string_view s);
// Parses a quoted string at the start of `text`; advances `text` past it.
// Throws ParseError.
std::string UnquoteString(std::string_view &text);

}  // namespace kernfuzz

#endif  // KERNFUZZ_TEXT_H_
