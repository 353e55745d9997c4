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

#include "kernfuzz/kernel_corpus.h"

#include <string>
#include <utility>

#include "kernfuzz/errors.h"
#include "kernfuzz/fault.h"
#include "kernfuzz/kernels.h"

namespace kernfuzz {
namespace {

constexpr TypeTag kT = TypeTag::kTensor;

const Tensor &AsTensor(const Value &v) { return std::get<Tensor>(v); }
int64_t AsInt(const Value &v) { return std::get<int64_t>(v); }

Tensor Ints(Shape shape, std::vector<int64_t> values) {
  return Tensor::FromInts(std::move(shape), std::move(values));
}

KernelEntry MakeEntry(std::string name, std::vector<Param> params,
                      std::optional<TypeTag> returns, KernelFn impl,
                      std::vector<ArgTuple> seeds, bool bound = true) {
  KernelEntry e;
  e.signature = {name, std::move(params), returns};
  e.impl = std::move(impl);
  e.driver_seeds = std::move(seeds);
  if (bound) e.binding = "ops." + name;
  return e;
}

}  // namespace

std::vector<TypeTag> KernelSignature::types() const {
  std::vector<TypeTag> out;
  out.reserve(params.size());
  for (const Param &p : params) out.push_back(p.type);
  return out;
}

void CheckArgs(const KernelSignature &sig, std::span<const Value> args) {
  if (args.size() != sig.arity()) {
    throw ValidationError(sig.name + " takes " + std::to_string(sig.arity()) +
                          " arguments, got " + std::to_string(args.size()));
  }
  for (size_t i = 0; i < args.size(); ++i) {
    if (!ValueConforms(args[i], sig.params[i].type)) {
      throw ValidationError(sig.name + ": argument '" + sig.params[i].name +
                            "' must be " +
                            std::string(TypeTagName(sig.params[i].type)));
    }
  }
}

Value InvokeKernel(const KernelEntry &entry, std::span<const Value> args) {
  CheckArgs(entry.signature, args);
  KernelScope scope(entry.signature.name);
  return entry.impl(args);
}

void Registry::Add(KernelEntry entry) {
  std::string name = entry.signature.name;
  if (!entries_.emplace(name, std::move(entry)).second) {
    throw Error("duplicate kernel '" + name + "'");
  }
}

const KernelEntry *Registry::Find(std::string_view name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

const KernelEntry &Registry::Get(std::string_view name) const {
  const KernelEntry *e = Find(name);
  if (e == nullptr) throw Error("unknown kernel '" + std::string(name) + "'");
  return *e;
}

Registry RegisterCorpus() {
  namespace k = kernels;
  Registry r;

  // Seeded bugs.
  r.Add(MakeEntry(
      "strided_write",
      {{"indices", kT}, {"strides", kT}, {"payload", TypeTag::kInt}}, kT,
      [](std::span<const Value> a) -> Value {
        return k::StridedWrite(AsTensor(a[0]), AsTensor(a[1]), AsInt(a[2]));
      },
      {{Ints({2}, {2, 3}), Ints({2}, {4, 5}), int64_t{7}},
       {Ints({3}, {1, 2, 3}), Ints({3}, {3, 2, 1}), int64_t{9}}}));
  r.Add(MakeEntry(
      "insert_dim",
      {{"sizes", kT}, {"batch_size", TypeTag::kInt}, {"out_dim", TypeTag::kInt}},
      kT,
      [](std::span<const Value> a) -> Value {
        return k::InsertDim(AsTensor(a[0]), AsInt(a[1]), AsInt(a[2]));
      },
      {{Ints({2}, {2, 3}), int64_t{4}, int64_t{2}},
       {Ints({3}, {5, 6, 7}), int64_t{8}, int64_t{3}}}));
  r.Add(MakeEntry(
      "delete_handle", {{"handle", kT}}, std::nullopt,
      [](std::span<const Value> a) -> Value {
        k::DeleteHandle(AsTensor(a[0]));
        return std::monostate{};
      },
      {{Ints({1}, {42})}, {Tensor::Filled(DType::kInt64, {}, int64_t{17})}}));
  r.Add(MakeEntry(
      "mean_pool", {{"input", kT}, {"window", TypeTag::kInt}}, kT,
      [](std::span<const Value> a) -> Value {
        return k::MeanPool(AsTensor(a[0]), AsInt(a[1]));
      },
      {{Ints({3}, {2, 4, 6}), int64_t{3}},
       {Ints({2, 2}, {2, 3, 4, 5}), int64_t{2}}}));
  r.Add(MakeEntry(
      "gather", {{"input", kT}, {"idx", TypeTag::kIntList}}, kT,
      [](std::span<const Value> a) -> Value {
        return k::Gather(AsTensor(a[0]), std::get<IntList>(a[1]));
      },
      {{Ints({3}, {10, 20, 30}), IntList{2, 0}}}));
  r.Add(MakeEntry(
      "gather_internal", {{"input", kT}, {"idx", kT}}, kT,
      [](std::span<const Value> a) -> Value {
        return k::GatherInternal(AsTensor(a[0]), AsTensor(a[1]));
      },
      {{Ints({3}, {10, 20, 30}), Ints({2}, {2, 0})}}, /*bound=*/false));
  r.Add(MakeEntry(
      "normalize", {{"input", kT}}, kT,
      [](std::span<const Value> a) -> Value {
        return k::Normalize(AsTensor(a[0]));
      },
      {{Tensor::FromDoubles({2}, {2.0, -4.0})},
       {Tensor::FromDoubles({2, 2}, {0.5, 1.5, -2.5, 3.5})}}));

  // Safe controls.
  r.Add(MakeEntry(
      "add", {{"lhs", kT}, {"rhs", kT}}, kT,
      [](std::span<const Value> a) -> Value {
        return k::Add(AsTensor(a[0]), AsTensor(a[1]));
      },
      {{Ints({2, 3}, {1, 2, 3, 4, 5, 6}), Ints({2, 3}, {6, 5, 4, 3, 2, 7})},
       {Tensor::FromDoubles({2}, {0.5, 2.5}),
        Tensor::FromDoubles({2}, {1.5, 3.5})}}));
  r.Add(MakeEntry(
      "concat", {{"lhs", kT}, {"rhs", kT}, {"axis", TypeTag::kInt}}, kT,
      [](std::span<const Value> a) -> Value {
        return k::Concat(AsTensor(a[0]), AsTensor(a[1]), AsInt(a[2]));
      },
      {{Ints({1, 2, 2}, {1, 2, 3, 4}), Ints({1, 2, 3}, {5, 6, 7, 8, 9, 10}),
        int64_t{2}}}));
  r.Add(MakeEntry(
      "reshape", {{"input", kT}, {"shape", TypeTag::kIntList}}, kT,
      [](std::span<const Value> a) -> Value {
        return k::Reshape(AsTensor(a[0]), std::get<IntList>(a[1]));
      },
      {{Ints({2, 3}, {1, 2, 3, 4, 5, 6}), IntList{3, 2}}}));
  r.Add(MakeEntry(
      "scale", {{"input", kT}, {"factor", TypeTag::kFloat}}, kT,
      [](std::span<const Value> a) -> Value {
        return k::Scale(AsTensor(a[0]), std::get<double>(a[1]));
      },
      {{Tensor::FromDoubles({2}, {1.5, 2.5}), 2.5},
       {Ints({3}, {2, 4, 8}), 0.25}}));

  // Pruned by extraction.
  KernelEntry counter = MakeEntry(
      "counter_update", {{"delta", TypeTag::kInt}}, TypeTag::kInt,
      [](std::span<const Value> a) -> Value {
        return k::CounterUpdate(AsInt(a[0]));
      },
      {{int64_t{3}}}, /*bound=*/false);
  counter.flags.shared_state = true;
  r.Add(std::move(counter));

  KernelEntry add_out = MakeEntry(
      "add_out", {{"lhs", kT}, {"rhs", kT}, {"out", kT}}, std::nullopt,
      [](std::span<const Value> a) -> Value {
        Tensor out = AsTensor(a[2]);
        k::AddOut(AsTensor(a[0]), AsTensor(a[1]), out);
        return out;
      },
      {{Ints({2}, {1, 2}), Ints({2}, {3, 4}), Ints({2}, {0, 0})}},
      /*bound=*/false);
  add_out.flags.out_variant = true;
  r.Add(std::move(add_out));

  KernelEntry add_alias = MakeEntry(
      "add_alias", {{"lhs", kT}, {"rhs", kT}}, kT,
      [](std::span<const Value> a) -> Value {
        return k::AddAlias(AsTensor(a[0]), AsTensor(a[1]));
      },
      {{Ints({2}, {1, 2}), Ints({2}, {3, 4})}}, /*bound=*/false);
  add_alias.flags.wrapper_only = true;
  r.Add(std::move(add_alias));

  return r;
}

std::set<TypeTag> AllTypeTags() {
  return {TypeTag::kTensor, TypeTag::kInt,  TypeTag::kFloat,
          TypeTag::kBool,   TypeTag::kStr,  TypeTag::kIntList};
}

std::vector<KernelSignature> ExtractTargets(const Registry &registry,
                                            const std::set<TypeTag> &supported) {
  std::vector<KernelSignature> targets;
  for (const auto &[name, entry] : registry.entries()) {
    if (entry.flags.excluded()) continue;
    bool all_supported = true;
    for (const Param &p : entry.signature.params) {
      if (!supported.contains(p.type)) all_supported = false;
    }
    if (all_supported) targets.push_back(entry.signature);
  }
  return targets;
}

int RunDriverTest(const Registry &registry, std::string_view kernel,
                  const KernelInvoker &invoker) {
  const KernelEntry &entry = registry.Get(kernel);
  if (entry.driver_seeds.empty()) {
    throw Error("kernel '" + std::string(kernel) + "' has no driver seeds");
  }
  for (const ArgTuple &seed : entry.driver_seeds) {
    if (invoker) {
      invoker(entry, seed);
    } else {
      InvokeKernel(entry, seed);
    }
  }
  return 0;
}

}  // namespace kernfuzz
