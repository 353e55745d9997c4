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

// Type-aware mutation pools and the combination index.
//
// Every kernel parameter gets a pool of candidate values chosen by the
// parameter's static type and seeded with the original argument. The fuzz
// space is the Cartesian product of the pools. A combination is named by its
// UIN: a mixed-radix numeral over the pool sizes whose least significant
// digit selects from the first parameter's pool. Enumeration is plain
// counting from 0, so raising the combination cap never renames an existing
// UIN.
//
// Pools are pure functions of (MutationConfig, KernelSignature, original
// arguments): the only randomness is a counter-based generator keyed on the
// seed, kernel name, parameter index and sample index.
#ifndef KERNFUZZ_MUTATION_H_
#define KERNFUZZ_MUTATION_H_

#include <compare>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kernfuzz/kernel_corpus.h"
#include "kernfuzz/value.h"

namespace kernfuzz {

struct MutationConfig {
  uint64_t rng_seed = 1;
  int64_t max_tensor_rank = 15;
  int64_t max_string_len = 300;
  uint64_t max_combinations = uint64_t{1} << 20;
  std::vector<int64_t> int_extremes = DefaultIntExtremes();
  std::vector<double> float_extremes = DefaultFloatExtremes();
  int64_t dim_samples_per_arg = 4;

  static std::vector<int64_t> DefaultIntExtremes();
  static std::vector<double> DefaultFloatExtremes();

  // Throws ValidationError when an invariant does not hold.
  void Validate() const;

  // Stable hex fingerprint of every field except rng_seed.
  std::string Fingerprint() const;

  // key=value lines; '#' starts a comment; every key optional. Lists are
  // comma separated. Throws ParseError / ValidationError.
  static MutationConfig Parse(std::string_view text);
  static MutationConfig Load(const std::filesystem::path &path);
  // Inverse of Parse.
  std::string Serialize() const;

  friend bool operator==(const MutationConfig &,
                         const MutationConfig &) = default;
};

enum class MutationCategory {
  kRandomDims,
  kExtremeTensor,
  kOriginalPermutation,
  kZeroValue,
  kExtremeList,
  kEmptyShape,
  kExtremePrimitive,
  kEmptyList,
  kDeepTensor,
};

inline constexpr int kNumMutationCategories = 9;

std::string_view CategoryName(MutationCategory c);         // random_dims
std::string_view CategoryDescription(MutationCategory c);  // human readable
// Throws ParseError.
MutationCategory ParseCategory(std::string_view name);

struct Candidate {
  Value value;
  MutationCategory category;
};

struct MutationPool {
  TypeTag type;
  std::vector<Candidate> candidates;

  size_t size() const { return candidates.size(); }
};

struct Uin {
  uint64_t index = 0;

  friend auto operator<=>(const Uin &, const Uin &) = default;
};

struct PoolSet {
  KernelSignature kernel;
  std::vector<MutationPool> pools;
};

// Throws ValidationError when `original_args` does not conform to `sig` or
// the config is invalid.
PoolSet BuildPools(const KernelSignature &sig,
                   std::span<const Value> original_args,
                   const MutationConfig &cfg);

// The pool for one parameter.
MutationPool BuildPool(const KernelSignature &sig, size_t param_index,
                       const Value &original, const MutationConfig &cfg);

// min(product of pool sizes, cfg.max_combinations); 1 for arity 0.
uint64_t CombinationCount(const PoolSet &ps, const MutationConfig &cfg);

// Mixed-radix digits of `uin`, one per pool (first pool least significant).
// Throws RangeError when uin >= product of pool sizes.
std::vector<size_t> DecodeUin(const PoolSet &ps, Uin uin);
// Inverse of DecodeUin. Throws RangeError on an out-of-range digit.
Uin EncodeUin(const PoolSet &ps, std::span<const size_t> digits);

// The argument tuple named by `uin`. Throws RangeError unless
// uin < CombinationCount(ps, cfg).
ArgTuple NthCombination(const PoolSet &ps, Uin uin, const MutationConfig &cfg);

// Categories of the selected candidates in parameter order, without
// duplicates. Throws RangeError like NthCombination.
std::vector<MutationCategory> CategoryOf(const PoolSet &ps, Uin uin,
                                         const MutationConfig &cfg);

// Single attribution for cross-tabulation: the first category in
// `categories` other than OriginalPermutation, or OriginalPermutation when
// every argument is an original.
MutationCategory PrimaryCategory(std::span<const MutationCategory> categories);

// Counter-based generator used for random dimension sampling; exposed for
// tests.
uint64_t MixKey(uint64_t seed, std::string_view kernel, uint64_t param,
                uint64_t sample, uint64_t draw);

}  // namespace kernfuzz

#endif  // KERNFUZZ_MUTATION_H_
