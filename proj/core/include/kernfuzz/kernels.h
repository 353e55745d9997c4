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

// The kernel corpus: small tensor operations, some of which carry seeded
// memory-safety bugs. Buggy kernels validate some of their preconditions the
// way production kernels typically do, so benign inputs pass and only edge
// case inputs reach the fault substrate.
//
// Recoverable input problems throw ValidationError. Seeded bugs terminate
// the process through the substrate in fault.h.
#ifndef KERNFUZZ_KERNELS_H_
#define KERNFUZZ_KERNELS_H_

#include <cstdint>
#include <span>

#include "kernfuzz/tensor.h"
#include "kernfuzz/value.h"

namespace kernfuzz::kernels {

inline constexpr int64_t kStridedWriteBufferLength = 64;

// Writes `payload` at the inner product of `indices` and `strides` into a
// fresh zeroed buffer of kStridedWriteBufferLength elements and returns the
// buffer. Checks the upper bound of the location but not its sign.
Tensor StridedWrite(const Tensor &indices, const Tensor &strides,
                    int64_t payload);

// Inserts `batch_size` at position `out_dim` of the flattened `sizes`
// vector. `out_dim` is not range-checked.
Tensor InsertDim(const Tensor &sizes, int64_t batch_size, int64_t out_dim);

// Reads the handle through a scalar accessor without checking its shape;
// aborts unless the handle has exactly one element.
void DeleteHandle(const Tensor &handle);

// Mean over consecutive `window`-sized chunks of the flattened tensor;
// a trailing partial chunk is dropped. window == 0 reaches the divide.
Tensor MeanPool(const Tensor &t, int64_t window);

// t[idx[0]], t[idx[1]], ... with unchecked indices.
Tensor Gather(const Tensor &t, const IntList &idx);
// Same bug behind a tensor-typed index argument; deliberately has no
// binding.
Tensor GatherInternal(const Tensor &t, const Tensor &idx);

// Scales a float64 tensor by its largest magnitude; no guard for the all
// zero case.
Tensor Normalize(const Tensor &t);

// Safe kernels: every input problem is a ValidationError.
Tensor Add(const Tensor &a, const Tensor &b);
Tensor Concat(const Tensor &a, const Tensor &b, int64_t axis);
Tensor Reshape(const Tensor &t, const IntList &new_shape);
Tensor Scale(const Tensor &t, double factor);

// Excluded from fuzzing: touches process-wide state.
int64_t CounterUpdate(int64_t delta);
// Excluded: out-variant of Add writing into `out`.
void AddOut(const Tensor &a, const Tensor &b, Tensor &out);
// Excluded: a pure wrapper around Add.
Tensor AddAlias(const Tensor &a, const Tensor &b);

}  // namespace kernfuzz::kernels

#endif  // KERNFUZZ_KERNELS_H_
