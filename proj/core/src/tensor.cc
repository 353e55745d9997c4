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

#include "kernfuzz/tensor.h"

#include <limits>
#include <string>
#include <utility>

namespace kernfuzz {

std::string_view DTypeName(DType dtype) {
  switch (dtype) {
    case DType::kInt64:
      return "int64";
    case DType::kFloat64:
      return "float64";
    case DType::kBool:
      return "bool";
    case DType::kStr:
      return "str";
  }
  return "?";
}

DType ParseDType(std::string_view name) {
  if (name == "int64") return DType::kInt64;
  if (name == "float64") return DType::kFloat64;
  if (name == "bool") return DType::kBool;
  if (name == "str") return DType::kStr;
  throw ParseError("unknown dtype '" + std::string(name) + "'");
}

DType DTypeOf(const Scalar &value) {
  return static_cast<DType>(value.index());
}

bool ScalarConforms(const Scalar &value, DType dtype) {
  return DTypeOf(value) == dtype;
}

Scalar ZeroScalar(DType dtype) {
  switch (dtype) {
    case DType::kInt64:
      return int64_t{0};
    case DType::kFloat64:
      return 0.0;
    case DType::kBool:
      return false;
    case DType::kStr:
      return std::string();
  }
  return int64_t{0};
}

bool ScalarEquals(const Scalar &a, const Scalar &b) { return a == b; }

int64_t Shape::NumElements() const {
  int64_t product = 1;
  bool zero = false;
  for (int64_t dim : dims_) {
    if (dim < 0) {
      throw ValidationError("negative dimension " + std::to_string(dim) +
                            " in shape " + ToString());
    }
    if (dim == 0) zero = true;
  }
  if (zero) return 0;
  for (int64_t dim : dims_) {
    if (product > std::numeric_limits<int64_t>::max() / dim) {
      throw ValidationError("element count of shape " + ToString() +
                            " overflows int64");
    }
    product *= dim;
  }
  return product;
}

std::string Shape::ToString() const {
  std::string out = "[";
  for (size_t i = 0; i < dims_.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(dims_[i]);
  }
  out += "]";
  return out;
}

Tensor::Tensor() = default;

Tensor Tensor::Filled(DType dtype, Shape shape, Scalar fill) {
  if (!ScalarConforms(fill, dtype)) {
    throw ValidationError("fill of type " +
                          std::string(DTypeName(DTypeOf(fill))) +
                          " does not match dtype " +
                          std::string(DTypeName(dtype)));
  }
  Tensor t;
  t.dtype_ = dtype;
  t.num_elements_ = shape.NumElements();
  t.shape_ = std::move(shape);
  t.filled_ = true;
  t.fill_ = std::move(fill);
  return t;
}

Tensor Tensor::FromValues(DType dtype, Shape shape,
                          std::vector<Scalar> values) {
  if (dtype == DType::kStr) {
    throw ValidationError("str tensors only support a single fill value");
  }
  const int64_t count = shape.NumElements();
  if (static_cast<int64_t>(values.size()) != count) {
    throw ValidationError("shape " + shape.ToString() + " needs " +
                          std::to_string(count) + " values, got " +
                          std::to_string(values.size()));
  }
  for (const Scalar &v : values) {
    if (!ScalarConforms(v, dtype)) {
      throw ValidationError("element does not conform to dtype " +
                            std::string(DTypeName(dtype)));
    }
  }
  Tensor t;
  t.dtype_ = dtype;
  t.shape_ = std::move(shape);
  t.num_elements_ = count;
  t.filled_ = false;
  t.fill_ = ZeroScalar(dtype);
  t.values_ = std::move(values);
  return t;
}

Tensor Tensor::FromInts(Shape shape, std::vector<int64_t> values) {
  std::vector<Scalar> scalars(values.begin(), values.end());
  return FromValues(DType::kInt64, std::move(shape), std::move(scalars));
}

Tensor Tensor::FromDoubles(Shape shape, std::vector<double> values) {
  std::vector<Scalar> scalars(values.begin(), values.end());
  return FromValues(DType::kFloat64, std::move(shape), std::move(scalars));
}

Scalar Tensor::At(int64_t index) const {
  if (index < 0 || index >= num_elements_) {
    throw RangeError("element " + std::to_string(index) + " outside [0," +
                     std::to_string(num_elements_) + ")");
  }
  return filled_ ? fill_ : values_[static_cast<size_t>(index)];
}

int64_t Tensor::IntAt(int64_t index) const {
  const Scalar v = At(index);
  if (const auto *i = std::get_if<int64_t>(&v)) return *i;
  if (const auto *b = std::get_if<bool>(&v)) return *b ? 1 : 0;
  throw ValidationError("expected an integer tensor, got " +
                        std::string(DTypeName(dtype_)));
}

double Tensor::FloatAt(int64_t index) const {
  const Scalar v = At(index);
  if (const auto *d = std::get_if<double>(&v)) return *d;
  if (const auto *i = std::get_if<int64_t>(&v)) return static_cast<double>(*i);
  if (const auto *b = std::get_if<bool>(&v)) return *b ? 1.0 : 0.0;
  throw ValidationError("expected a numeric tensor, got str");
}

bool Tensor::IsUniform() const {
  if (num_elements_ == 0) return false;
  if (filled_) return true;
  for (const Scalar &v : values_) {
    if (!(v == values_.front())) return false;
  }
  return true;
}

const Scalar &Tensor::FirstValue() const {
  if (filled_) return fill_;
  if (values_.empty()) throw RangeError("tensor has no elements");
  return values_.front();
}

Scalar Tensor::FillOrFirst() const {
  if (filled_) return fill_;
  if (values_.empty()) return ZeroScalar(dtype_);
  return values_.front();
}

Tensor Tensor::Reshaped(Shape shape) const {
  const int64_t count = shape.NumElements();
  if (count != num_elements_) {
    throw ValidationError("cannot reshape " + shape_.ToString() + " to " +
                          shape.ToString());
  }
  Tensor t = *this;
  t.shape_ = std::move(shape);
  return t;
}

std::vector<Scalar> Tensor::Materialize() const {
  if (!filled_) return values_;
  return std::vector<Scalar>(static_cast<size_t>(num_elements_), fill_);
}

bool operator==(const Tensor &a, const Tensor &b) {
  if (a.dtype_ != b.dtype_ || a.shape_ != b.shape_) return false;
  if (a.num_elements_ == 0) return true;
  if (a.filled_ && b.filled_) return a.fill_ == b.fill_;
  for (int64_t i = 0; i < a.num_elements_; ++i) {
    if (!(a.At(i) == b.At(i))) return false;
  }
  return true;
}

}  // namespace kernfuzz
