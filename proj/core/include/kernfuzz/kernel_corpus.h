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

// Registry of statically-typed kernels, their driver seeds and the pruning
// rules that decide which of them are fuzz targets.
#ifndef KERNFUZZ_KERNEL_CORPUS_H_
#define KERNFUZZ_KERNEL_CORPUS_H_

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kernfuzz/value.h"

namespace kernfuzz {

struct Param {
  std::string name;
  TypeTag type;
};

struct KernelSignature {
  std::string name;
  std::vector<Param> params;
  std::optional<TypeTag> returns;

  size_t arity() const { return params.size(); }
  std::vector<TypeTag> types() const;
};

struct KernelFlags {
  bool shared_state = false;
  bool out_variant = false;
  bool wrapper_only = false;

  bool excluded() const { return shared_state || out_variant || wrapper_only; }
};

using ArgTuple = std::vector<Value>;

// Throws ValidationError for recoverable input problems. Seeded bugs end the
// process instead.
using KernelFn = std::function<Value(std::span<const Value>)>;

struct KernelEntry {
  KernelSignature signature;
  KernelFn impl;
  KernelFlags flags;
  std::vector<ArgTuple> driver_seeds;
  // High-level binding name ("ops.<kernel>"); empty for unbound kernels.
  std::optional<std::string> binding;
};

// Throws ValidationError if `args` does not match the signature's arity and
// parameter types.
void CheckArgs(const KernelSignature &sig, std::span<const Value> args);

// Calls the implementation with fault records attributed to the kernel.
Value InvokeKernel(const KernelEntry &entry, std::span<const Value> args);

class Registry {
 public:
  // Throws Error on a duplicate name.
  void Add(KernelEntry entry);
  // nullptr when absent.
  const KernelEntry *Find(std::string_view name) const;
  // Throws Error when absent.
  const KernelEntry &Get(std::string_view name) const;

  const std::map<std::string, KernelEntry, std::less<>> &entries() const {
    return entries_;
  }
  size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, KernelEntry, std::less<>> entries_;
};

// The bundled corpus: seeded-bug kernels, safe controls and three excluded
// kernels (shared state, out-variant, pure wrapper).
Registry RegisterCorpus();

std::set<TypeTag> AllTypeTags();

// Entries with no exclusion flag whose parameter types are all in
// `supported`, in name order.
std::vector<KernelSignature> ExtractTargets(
    const Registry &registry,
    const std::set<TypeTag> &supported = AllTypeTags());

// How a driver test reaches a kernel: directly, or through an injected
// fuzzing wrapper.
using KernelInvoker =
    std::function<Value(const KernelEntry &, std::span<const Value>)>;

// Invokes `kernel` once per driver seed, in order, through `invoker`
// (InvokeKernel when empty). Returns 0 when every seed completes; faults
// terminate the process. Throws Error for unknown kernels or kernels without
// seeds, before invoking anything.
int RunDriverTest(const Registry &registry, std::string_view kernel,
                  const KernelInvoker &invoker = {});

}  // namespace kernfuzz

#endif  // KERNFUZZ_KERNEL_CORPUS_H_
