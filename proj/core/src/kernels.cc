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

#include "kernfuzz/kernels.h"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "kernfuzz/errors.h"
#include "kernfuzz/fault.h"

namespace kernfuzz::kernels {
namespace {

void RequireDType(const Tensor &t, DType dtype, std::string_view what) {
  if (t.dtype() != dtype) {
    throw ValidationError(std::string(what) + " must be " +
                          std::string(DTypeName(dtype)) + ", got " +
                          std::string(DTypeName(t.dtype())));
  }
}

void RequireNumeric(const Tensor &t, std::string_view what) {
  if (t.dtype() != DType::kInt64 && t.dtype() != DType::kFloat64) {
    throw ValidationError(std::string(what) + " must be numeric, got " +
                          std::string(DTypeName(t.dtype())));
  }
}

// Two's-complement arithmetic, as the native kernels would see it.
int64_t WrappingMul(int64_t a, int64_t b) {
  return static_cast<int64_t>(static_cast<uint64_t>(a) *
                              static_cast<uint64_t>(b));
}

int64_t WrappingAdd(int64_t a, int64_t b) {
  return static_cast<int64_t>(static_cast<uint64_t>(a) +
                              static_cast<uint64_t>(b));
}

Tensor GatherImpl(const Tensor &t, std::span<const int64_t> idx) {
  const Shape out_shape{static_cast<int64_t>(idx.size())};
  if (t.dtype() == DType::kStr) {
    // Str tensors are always filled, so only the bounds matter.
    RawBuffer<char> probe(static_cast<size_t>(t.NumElements()));
    for (int64_t i : idx) probe.Read(i);
    return Tensor::Filled(DType::kStr, out_shape, t.FillOrFirst());
  }
  RawBuffer<Scalar> buffer(static_cast<size_t>(t.NumElements()),
                           t.FillOrFirst());
  if (!t.is_filled()) {
    for (int64_t i = 0; i < t.NumElements(); ++i) buffer.Write(i, t.At(i));
  }
  std::vector<Scalar> out;
  out.reserve(idx.size());
  for (int64_t i : idx) out.push_back(buffer.Read(i));
  return Tensor::FromValues(t.dtype(), out_shape, std::move(out));
}

}  // namespace

Tensor StridedWrite(const Tensor &indices, const Tensor &strides,
                    int64_t payload) {
  RequireDType(indices, DType::kInt64, "indices");
  RequireDType(strides, DType::kInt64, "strides");
  if (indices.NumElements() != strides.NumElements()) {
    throw ValidationError("indices and strides differ in length: " +
                          std::to_string(indices.NumElements()) + " vs " +
                          std::to_string(strides.NumElements()));
  }
  int64_t loc = 0;
  for (int64_t i = 0; i < indices.NumElements(); ++i) {
    loc = WrappingAdd(loc, WrappingMul(indices.IntAt(i), strides.IntAt(i)));
  }
  // Upper bound only.
  if (loc >= kStridedWriteBufferLength) {
    throw ValidationError("location " + std::to_string(loc) +
                          " exceeds output size");
  }
  RawBuffer<int64_t> output(kStridedWriteBufferLength);
  output.Write(loc, payload);
  const auto contents = output.contents();
  return Tensor::FromInts(Shape{kStridedWriteBufferLength},
                          {contents.begin(), contents.end()});
}

Tensor InsertDim(const Tensor &sizes, int64_t batch_size, int64_t out_dim) {
  RequireDType(sizes, DType::kInt64, "sizes");
  const int64_t rank = sizes.NumElements();
  RawBuffer<int64_t> expanded(static_cast<size_t>(rank) + 1);
  for (int64_t i = 0; i < rank; ++i) expanded.Write(i, sizes.IntAt(i));
  for (int64_t i = rank; i > out_dim; --i) {
    expanded.Write(i, expanded.Read(i - 1));
  }
  expanded.Write(out_dim, batch_size);
  const auto contents = expanded.contents();
  return Tensor::FromInts(Shape{rank + 1}, {contents.begin(), contents.end()});
}

void DeleteHandle(const Tensor &handle) {
  // The scalar accessor aborts on anything but a single element.
  if (handle.NumElements() != 1) FaultAbort("handle must be scalar");
  const Scalar name = handle.At(0);
  (void)name;
}

Tensor MeanPool(const Tensor &t, int64_t window) {
  if (t.dtype() == DType::kStr) {
    throw ValidationError("mean_pool needs a numeric tensor");
  }
  const int64_t windows = FaultDivide(t.NumElements(), window);
  if (windows <= 0) {
    const DType out = t.dtype() == DType::kFloat64 ? DType::kFloat64
                                                   : DType::kInt64;
    return Tensor::FromValues(out, Shape{0}, {});
  }
  if (t.dtype() == DType::kFloat64) {
    std::vector<double> means;
    means.reserve(static_cast<size_t>(windows));
    for (int64_t w = 0; w < windows; ++w) {
      double sum = 0;
      for (int64_t k = 0; k < window; ++k) sum += t.FloatAt(w * window + k);
      means.push_back(sum / static_cast<double>(window));
    }
    return Tensor::FromDoubles(Shape{windows}, std::move(means));
  }
  std::vector<int64_t> means;
  means.reserve(static_cast<size_t>(windows));
  for (int64_t w = 0; w < windows; ++w) {
    int64_t sum = 0;
    for (int64_t k = 0; k < window; ++k) {
      sum = WrappingAdd(sum, t.IntAt(w * window + k));
    }
    means.push_back(FaultDivide(sum, window));
  }
  return Tensor::FromInts(Shape{windows}, std::move(means));
}

Tensor Gather(const Tensor &t, const IntList &idx) { return GatherImpl(t, idx); }

Tensor GatherInternal(const Tensor &t, const Tensor &idx) {
  RequireDType(idx, DType::kInt64, "idx");
  IntList flat;
  flat.reserve(static_cast<size_t>(idx.NumElements()));
  for (int64_t i = 0; i < idx.NumElements(); ++i) flat.push_back(idx.IntAt(i));
  return GatherImpl(t, flat);
}

Tensor Normalize(const Tensor &t) {
  RequireDType(t, DType::kFloat64, "normalize input");
  if (t.NumElements() == 0) return t;
  double max_abs = 0;
  for (int64_t i = 0; i < t.NumElements(); ++i) {
    max_abs = std::max(max_abs, std::fabs(t.FloatAt(i)));
    if (t.is_filled()) break;
  }
  // Integer-scaled divisor check: zero magnitude reaches the divide.
  FaultDivide(1, max_abs == 0.0 ? 0 : 1);
  if (t.is_filled()) {
    return Tensor::Filled(DType::kFloat64, t.shape(), t.FloatAt(0) / max_abs);
  }
  std::vector<double> out;
  out.reserve(static_cast<size_t>(t.NumElements()));
  for (int64_t i = 0; i < t.NumElements(); ++i) {
    out.push_back(t.FloatAt(i) / max_abs);
  }
  return Tensor::FromDoubles(t.shape(), std::move(out));
}

Tensor Add(const Tensor &a, const Tensor &b) {
  RequireNumeric(a, "lhs");
  if (a.dtype() != b.dtype()) throw ValidationError("add: dtype mismatch");
  if (a.shape() != b.shape()) {
    throw ValidationError("add: shape mismatch " + a.shape().ToString() +
                          " vs " + b.shape().ToString());
  }
  const bool is_int = a.dtype() == DType::kInt64;
  auto sum = [&](int64_t i) -> Scalar {
    if (is_int) return WrappingAdd(a.IntAt(i), b.IntAt(i));
    return a.FloatAt(i) + b.FloatAt(i);
  };
  if (a.is_filled() && b.is_filled()) {
    if (a.NumElements() == 0) return a;
    return Tensor::Filled(a.dtype(), a.shape(), sum(0));
  }
  std::vector<Scalar> out;
  out.reserve(static_cast<size_t>(a.NumElements()));
  for (int64_t i = 0; i < a.NumElements(); ++i) out.push_back(sum(i));
  return Tensor::FromValues(a.dtype(), a.shape(), std::move(out));
}

Tensor Concat(const Tensor &a, const Tensor &b, int64_t axis) {
  if (a.dtype() != b.dtype()) throw ValidationError("concat: dtype mismatch");
  const auto &da = a.shape().dims();
  const auto &db = b.shape().dims();
  if (da.empty() || da.size() != db.size()) {
    throw ValidationError("concat: ranks must match and be at least 1");
  }
  const auto rank = static_cast<int64_t>(da.size());
  if (axis < 0 || axis >= rank) {
    throw ValidationError("concat: axis " + std::to_string(axis) +
                          " out of range for rank " + std::to_string(rank));
  }
  for (int64_t d = 0; d < rank; ++d) {
    if (d != axis && da[d] != db[d]) {
      throw ValidationError("concat: dimension " + std::to_string(d) +
                            " differs");
    }
  }
  std::vector<int64_t> out_dims = da;
  if (da[axis] > std::numeric_limits<int64_t>::max() - db[axis]) {
    throw ValidationError("concat: axis size overflows");
  }
  out_dims[axis] = da[axis] + db[axis];
  Shape out_shape(out_dims);
  const int64_t total = out_shape.NumElements();

  const bool a_trivial = a.NumElements() == 0 || a.is_filled();
  const bool b_trivial = b.NumElements() == 0 || b.is_filled();
  if (a_trivial && b_trivial &&
      (a.NumElements() == 0 || b.NumElements() == 0 ||
       a.FillOrFirst() == b.FillOrFirst())) {
    const Scalar fill = a.NumElements() ? a.FillOrFirst() : b.FillOrFirst();
    return Tensor::Filled(a.dtype(), std::move(out_shape), fill);
  }
  if (a.dtype() == DType::kStr) {
    throw ValidationError("concat: str tensors with different fills");
  }
  int64_t outer = 1;
  for (int64_t d = 0; d < axis; ++d) outer *= da[d];
  int64_t inner = 1;
  for (int64_t d = axis + 1; d < rank; ++d) inner *= da[d];
  const int64_t chunk_a = da[axis] * inner;
  const int64_t chunk_b = db[axis] * inner;
  std::vector<Scalar> out;
  out.reserve(static_cast<size_t>(total));
  for (int64_t o = 0; o < outer; ++o) {
    for (int64_t k = 0; k < chunk_a; ++k) out.push_back(a.At(o * chunk_a + k));
    for (int64_t k = 0; k < chunk_b; ++k) out.push_back(b.At(o * chunk_b + k));
  }
  return Tensor::FromValues(a.dtype(), std::move(out_shape), std::move(out));
}

Tensor Reshape(const Tensor &t, const IntList &new_shape) {
  // Shape::NumElements rejects negative dims and overflowing products.
  return t.Reshaped(Shape(new_shape));
}

Tensor Scale(const Tensor &t, double factor) {
  RequireNumeric(t, "scale input");
  if (t.is_filled()) {
    if (t.NumElements() == 0) {
      return Tensor::Filled(DType::kFloat64, t.shape(), 0.0);
    }
    return Tensor::Filled(DType::kFloat64, t.shape(), t.FloatAt(0) * factor);
  }
  std::vector<double> out;
  out.reserve(static_cast<size_t>(t.NumElements()));
  for (int64_t i = 0; i < t.NumElements(); ++i) {
    out.push_back(t.FloatAt(i) * factor);
  }
  return Tensor::FromDoubles(t.shape(), std::move(out));
}

int64_t CounterUpdate(int64_t delta) {
  static std::atomic<int64_t> counter{0};
  return counter.fetch_add(delta) + delta;
}

void AddOut(const Tensor &a, const Tensor &b, Tensor &out) { out = Add(a, b); }

Tensor AddAlias(const Tensor &a, const Tensor &b) { return Add(a, b); }

}  // namespace kernfuzz::kernels
