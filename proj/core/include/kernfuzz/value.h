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

#ifndef KERNFUZZ_VALUE_H_
#define KERNFUZZ_VALUE_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kernfuzz/tensor.h"

namespace kernfuzz {

using IntList = std::vector<int64_t>;

// A kernel argument or result. std::monostate is the "no value" result of
// kernels that return nothing.
using Value =
    std::variant<std::monostate, Tensor, int64_t, double, bool, std::string,
                 IntList>;

// Static parameter types. Mutation pools are keyed by these.
enum class TypeTag { kTensor, kInt, kFloat, kBool, kStr, kIntList };

std::string_view TypeTagName(TypeTag tag);  // "Tensor", "int64_t", ...
bool ValueConforms(const Value &value, TypeTag tag);

}  // namespace kernfuzz

#endif  // KERNFUZZ_VALUE_H_
