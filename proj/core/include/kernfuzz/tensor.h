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

// Tensor data model shared by kernels, mutation pools and crash reports.
//
// A Tensor is either "filled" (one scalar replicated over the whole shape,
// which is how mutation pools build tensors and never materializes storage)
// or "explicit" (one stored value per element). Both forms compare equal
// when dtype, shape and every element agree.
#ifndef KERNFUZZ_TENSOR_H_
#define KERNFUZZ_TENSOR_H_

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kernfuzz/errors.h"

namespace kernfuzz {

enum class DType { kInt64, kFloat64, kBool, kStr };

// "int64", "float64", "bool", "str".
std::string_view DTypeName(DType dtype);
// Throws ParseError on unknown names.
DType ParseDType(std::string_view name);

// One element. Alternative order matches DType.
using Scalar = std::variant<int64_t, double, bool, std::string>;

DType DTypeOf(const Scalar &value);
bool ScalarConforms(const Scalar &value, DType dtype);
// Zero of the dtype ("" for strings).
Scalar ZeroScalar(DType dtype);
// Exact equality; doubles compare by value (no NaN ever reaches pools).
bool ScalarEquals(const Scalar &a, const Scalar &b);

class Shape {
 public:
  Shape() = default;
  Shape(std::initializer_list<int64_t> dims) : dims_(dims) {}
  explicit Shape(std::vector<int64_t> dims) : dims_(std::move(dims)) {}

  const std::vector<int64_t> &dims() const { return dims_; }
  size_t rank() const { return dims_.size(); }

  // Product of dims; 1 for rank 0. Throws ValidationError on negative dims
  // or when the product does not fit in int64.
  int64_t NumElements() const;

  std::string ToString() const;  // "[2,3]"

  friend bool operator==(const Shape &, const Shape &) = default;

 private:
  std::vector<int64_t> dims_;
};

class Tensor {
 public:
  // Rank-0 int64 zero; exists so Tensor can live in containers.
  Tensor();

  // Every element equals `fill`. Throws ValidationError when `fill` does not
  // conform to `dtype` or the shape is invalid.
  static Tensor Filled(DType dtype, Shape shape, Scalar fill);
  // One value per element. Str tensors only support the filled form.
  static Tensor FromValues(DType dtype, Shape shape, std::vector<Scalar> values);
  static Tensor FromInts(Shape shape, std::vector<int64_t> values);
  static Tensor FromDoubles(Shape shape, std::vector<double> values);

  DType dtype() const { return dtype_; }
  const Shape &shape() const { return shape_; }
  int64_t NumElements() const { return num_elements_; }
  bool is_filled() const { return filled_; }

  // Element `index` in row-major order. Precondition: 0 <= index < size.
  Scalar At(int64_t index) const;
  // Typed accessors; bools read as 0/1 through IntAt.
  int64_t IntAt(int64_t index) const;
  double FloatAt(int64_t index) const;

  // True when the tensor has at least one element and all are equal.
  bool IsUniform() const;
  // The replicated value for filled tensors, else element 0. Requires at
  // least one element unless the tensor is filled.
  const Scalar &FirstValue() const;
  // The fill value, or the dtype's zero for explicit tensors with no
  // elements.
  Scalar FillOrFirst() const;

  // Same elements, new shape; the element count must match.
  Tensor Reshaped(Shape shape) const;

  std::vector<Scalar> Materialize() const;

  friend bool operator==(const Tensor &a, const Tensor &b);

 private:
  DType dtype_ = DType::kInt64;
  Shape shape_;
  int64_t num_elements_ = 1;
  bool filled_ = true;
  Scalar fill_ = int64_t{0};
  std::vector<Scalar> values_;
};

}  // namespace kernfuzz

#endif  // KERNFUZZ_TENSOR_H_
