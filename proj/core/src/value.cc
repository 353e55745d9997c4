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

#include "kernfuzz/value.h"

namespace kernfuzz {

std::string_view TypeTagName(TypeTag tag) {
  switch (tag) {
    case TypeTag::kTensor:
      return "Tensor";
    case TypeTag::kInt:
      return "int64_t";
    case TypeTag::kFloat:
      return "double";
    case TypeTag::kBool:
      return "bool";
    case TypeTag::kStr:
      return "string";
    case TypeTag::kIntList:
      return "IntList";
  }
  return "?";
}

bool ValueConforms(const Value &value, TypeTag tag) {
  switch (tag) {
    case TypeTag::kTensor:
      return std::holds_alternative<Tensor>(value);
    case TypeTag::kInt:
      return std::holds_alternative<int64_t>(value);
    case TypeTag::kFloat:
      return std::holds_alternative<double>(value);
    case TypeTag::kBool:
      return std::holds_alternative<bool>(value);
    case TypeTag::kStr:
      return std::holds_alternative<std::string>(value);
    case TypeTag::kIntList:
      return std::holds_alternative<IntList>(value);
  }
  return false;
}

}  // namespace kernfuzz
