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

#include "kernfuzz/mutation.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

#include "kernfuzz/errors.h"
#include "kernfuzz/text.h"

namespace kernfuzz {
namespace {

constexpr std::array<int64_t, 6> kDimSizes = {0, 1, 2, 3, 7, 64};
constexpr std::array<int64_t, 3> kRandomRanks = {1, 2, 3};

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class PoolBuilder {
 public:
  explicit PoolBuilder(TypeTag type) { pool_.type = type; }

  // Drops values already present; the earlier category wins.
  void Add(Value value, MutationCategory category) {
    for (const Candidate &c : pool_.candidates) {
      if (c.value == value) return;
    }
    pool_.candidates.push_back({std::move(value), category});
  }

  MutationPool Finish() && { return std::move(pool_); }

 private:
  MutationPool pool_;
};

std::vector<Scalar> TensorExtremes(DType dtype, const MutationConfig &cfg) {
  std::vector<Scalar> out;
  switch (dtype) {
    case DType::kInt64:
      for (int64_t v : cfg.int_extremes) out.emplace_back(v);
      break;
    case DType::kFloat64:
      for (double v : cfg.float_extremes) out.emplace_back(v);
      break;
    case DType::kBool:
      out = {false, true};
      break;
    case DType::kStr:
      out = {std::string(),
             std::string(static_cast<size_t>(cfg.max_string_len), 'A')};
      break;
  }
  return out;
}

MutationPool TensorPool(const KernelSignature &sig, size_t param,
                        const Tensor &original, const MutationConfig &cfg) {
  PoolBuilder b(TypeTag::kTensor);
  const DType dtype = original.dtype();
  const Scalar fill = original.FillOrFirst();

  for (int64_t s = 0; s < cfg.dim_samples_per_arg; ++s) {
    const auto sample = static_cast<uint64_t>(s);
    int64_t rank = kRandomRanks[MixKey(cfg.rng_seed, sig.name, param, sample,
                                       0) %
                                kRandomRanks.size()];
    rank = std::min(rank, cfg.max_tensor_rank);
    std::vector<int64_t> dims;
    for (int64_t d = 0; d < rank; ++d) {
      dims.push_back(kDimSizes[MixKey(cfg.rng_seed, sig.name, param, sample,
                                      static_cast<uint64_t>(d) + 1) %
                               kDimSizes.size()]);
    }
    b.Add(Tensor::Filled(dtype, Shape(std::move(dims)), fill),
          MutationCategory::kRandomDims);
  }
  for (Scalar &e : TensorExtremes(dtype, cfg)) {
    b.Add(Tensor::Filled(dtype, original.shape(), std::move(e)),
          MutationCategory::kExtremeTensor);
  }
  b.Add(Tensor::Filled(dtype, Shape{}, fill), MutationCategory::kEmptyShape);
  b.Add(Tensor::Filled(dtype,
                       Shape(std::vector<int64_t>(
                           static_cast<size_t>(cfg.max_tensor_rank), 1)),
                       fill),
        MutationCategory::kDeepTensor);
  b.Add(original, MutationCategory::kOriginalPermutation);
  return std::move(b).Finish();
}

MutationPool IntListPool(const IntList &original, const MutationConfig &cfg) {
  PoolBuilder b(TypeTag::kIntList);
  b.Add(IntList{}, MutationCategory::kEmptyList);
  const size_t len = std::max<size_t>(1, original.size());
  for (int64_t e : cfg.int_extremes) {
    b.Add(IntList(len, e), MutationCategory::kExtremeList);
  }
  b.Add(IntList(cfg.int_extremes), MutationCategory::kExtremeList);
  b.Add(original, MutationCategory::kOriginalPermutation);
  return std::move(b).Finish();
}

std::string ToHex(uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<size_t>(i)] = kDigits[v & 0xf];
    v >>= 4;
  }
  return out;
}

template <typename T>
std::string JoinNumbers(const std::vector<T> &values) {
  std::string out;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += FormatNumber(values[i]);
  }
  return out;
}

template <typename T>
std::vector<T> ParseNumberList(std::string_view key, std::string_view text) {
  std::vector<T> out;
  for (std::string_view item : Split(text, ',')) {
    item = Trim(item);
    if (item.empty()) continue;
    out.push_back(ParseNumber<T>(item, key));
  }
  return out;
}

}  // namespace

uint64_t MixKey(uint64_t seed, std::string_view kernel, uint64_t param,
                uint64_t sample, uint64_t draw) {
  uint64_t h = SplitMix64(seed);
  h = SplitMix64(h ^ Fnv1a64(kernel));
  h = SplitMix64(h ^ param);
  h = SplitMix64(h ^ sample);
  return SplitMix64(h ^ draw);
}

std::vector<int64_t> MutationConfig::DefaultIntExtremes() {
  return {0,
          1,
          -1,
          std::numeric_limits<int32_t>::max(),
          std::numeric_limits<int32_t>::min(),
          int64_t{1} << 62,
          -(int64_t{1} << 62)};
}

std::vector<double> MutationConfig::DefaultFloatExtremes() {
  return {0.0, 1.0, -1.0, 1e308, -1e308, 1e-308};
}

void MutationConfig::Validate() const {
  if (max_tensor_rank < 1) throw ValidationError("max_tensor_rank must be >= 1");
  if (max_combinations < 1) {
    throw ValidationError("max_combinations must be >= 1");
  }
  if (max_string_len < 0) throw ValidationError("max_string_len must be >= 0");
  if (dim_samples_per_arg < 0) {
    throw ValidationError("dim_samples_per_arg must be >= 0");
  }
  if (int_extremes.empty() ||
      std::find(int_extremes.begin(), int_extremes.end(), 0) ==
          int_extremes.end()) {
    throw ValidationError("int_extremes must be nonempty and contain 0");
  }
  if (float_extremes.empty() ||
      std::find(float_extremes.begin(), float_extremes.end(), 0.0) ==
          float_extremes.end()) {
    throw ValidationError("float_extremes must be nonempty and contain 0");
  }
}

std::string MutationConfig::Serialize() const {
  std::ostringstream out;
  out << "rng_seed=" << rng_seed << "\n"
      << "max_tensor_rank=" << max_tensor_rank << "\n"
      << "max_string_len=" << max_string_len << "\n"
      << "max_combinations=" << max_combinations << "\n"
      << "int_extremes=" << JoinNumbers(int_extremes) << "\n"
      << "float_extremes=" << JoinNumbers(float_extremes) << "\n"
      << "dim_samples_per_arg=" << dim_samples_per_arg << "\n";
  return out.str();
}

std::string MutationConfig::Fingerprint() const {
  MutationConfig copy = *this;
  copy.rng_seed = 0;
  return ToHex(Fnv1a64(copy.Serialize()));
}

MutationConfig MutationConfig::Parse(std::string_view text) {
  MutationConfig cfg;
  for (std::string_view line : Split(text, '\n')) {
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("config line without '=': " + std::string(line));
    }
    const std::string_view key = Trim(line.substr(0, eq));
    const std::string_view value = Trim(line.substr(eq + 1));
    if (key == "rng_seed") {
      cfg.rng_seed = ParseNumber<uint64_t>(value, key);
    } else if (key == "max_tensor_rank") {
      cfg.max_tensor_rank = ParseNumber<int64_t>(value, key);
    } else if (key == "max_string_len") {
      cfg.max_string_len = ParseNumber<int64_t>(value, key);
    } else if (key == "max_combinations") {
      cfg.max_combinations = ParseNumber<uint64_t>(value, key);
    } else if (key == "int_extremes") {
      cfg.int_extremes = ParseNumberList<int64_t>(key, value);
    } else if (key == "float_extremes") {
      cfg.float_extremes = ParseNumberList<double>(key, value);
    } else if (key == "dim_samples_per_arg") {
      cfg.dim_samples_per_arg = ParseNumber<int64_t>(value, key);
    } else {
      throw ParseError("unknown config key '" + std::string(key) + "'");
    }
  }
  cfg.Validate();
  return cfg;
}

MutationConfig MutationConfig::Load(const std::filesystem::path &path) {
  return Parse(ReadFile(path));
}

std::string_view CategoryName(MutationCategory c) {
  switch (c) {
    case MutationCategory::kRandomDims:
      return "random_dims";
    case MutationCategory::kExtremeTensor:
      return "extreme_tensor";
    case MutationCategory::kOriginalPermutation:
      return "original_permutation";
    case MutationCategory::kZeroValue:
      return "zero_value";
    case MutationCategory::kExtremeList:
      return "extreme_list";
    case MutationCategory::kEmptyShape:
      return "empty_shape";
    case MutationCategory::kExtremePrimitive:
      return "extreme_primitive";
    case MutationCategory::kEmptyList:
      return "empty_list";
    case MutationCategory::kDeepTensor:
      return "deep_tensor";
  }
  return "?";
}

std::string_view CategoryDescription(MutationCategory c) {
  switch (c) {
    case MutationCategory::kRandomDims:
      return "Tensor with random dimension sizes";
    case MutationCategory::kExtremeTensor:
      return "Tensors with extreme values";
    case MutationCategory::kOriginalPermutation:
      return "Permutations of original arguments";
    case MutationCategory::kZeroValue:
      return "Zero values";
    case MutationCategory::kExtremeList:
      return "Lists with extreme values";
    case MutationCategory::kEmptyShape:
      return "Tensors with empty shape";
    case MutationCategory::kExtremePrimitive:
      return "Extreme values in primitive types";
    case MutationCategory::kEmptyList:
      return "Empty lists";
    case MutationCategory::kDeepTensor:
      return "Deep tensors";
  }
  return "?";
}

MutationCategory ParseCategory(std::string_view name) {
  for (int i = 0; i < kNumMutationCategories; ++i) {
    const auto c = static_cast<MutationCategory>(i);
    if (CategoryName(c) == name) return c;
  }
  throw ParseError("unknown mutation category '" + std::string(name) + "'");
}

MutationPool BuildPool(const KernelSignature &sig, size_t param_index,
                       const Value &original, const MutationConfig &cfg) {
  const TypeTag type = sig.params.at(param_index).type;
  if (!ValueConforms(original, type)) {
    throw ValidationError("original argument " + std::to_string(param_index) +
                          " of " + sig.name + " is not a " +
                          std::string(TypeTagName(type)));
  }
  switch (type) {
    case TypeTag::kTensor:
      return TensorPool(sig, param_index, std::get<Tensor>(original), cfg);
    case TypeTag::kIntList:
      return IntListPool(std::get<IntList>(original), cfg);
    case TypeTag::kInt: {
      PoolBuilder b(type);
      b.Add(int64_t{0}, MutationCategory::kZeroValue);
      for (int64_t e : cfg.int_extremes) {
        b.Add(e, MutationCategory::kExtremePrimitive);
      }
      b.Add(original, MutationCategory::kOriginalPermutation);
      return std::move(b).Finish();
    }
    case TypeTag::kFloat: {
      PoolBuilder b(type);
      b.Add(0.0, MutationCategory::kZeroValue);
      for (double e : cfg.float_extremes) {
        b.Add(e, MutationCategory::kExtremePrimitive);
      }
      b.Add(original, MutationCategory::kOriginalPermutation);
      return std::move(b).Finish();
    }
    case TypeTag::kBool: {
      PoolBuilder b(type);
      b.Add(false, MutationCategory::kZeroValue);
      b.Add(true, MutationCategory::kExtremePrimitive);
      b.Add(original, MutationCategory::kOriginalPermutation);
      return std::move(b).Finish();
    }
    case TypeTag::kStr: {
      PoolBuilder b(type);
      b.Add(std::string(), MutationCategory::kExtremePrimitive);
      b.Add(std::string(static_cast<size_t>(cfg.max_string_len), 'A'),
            MutationCategory::kExtremePrimitive);
      b.Add(original, MutationCategory::kOriginalPermutation);
      return std::move(b).Finish();
    }
  }
  throw ValidationError("unsupported parameter type");
}

PoolSet BuildPools(const KernelSignature &sig,
                   std::span<const Value> original_args,
                   const MutationConfig &cfg) {
  cfg.Validate();
  CheckArgs(sig, original_args);
  PoolSet ps;
  ps.kernel = sig;
  ps.pools.reserve(sig.arity());
  for (size_t i = 0; i < sig.arity(); ++i) {
    ps.pools.push_back(BuildPool(sig, i, original_args[i], cfg));
  }
  return ps;
}

namespace {

// Product of pool sizes, saturating at uint64 max.
uint64_t SpaceSize(const PoolSet &ps) {
  uint64_t product = 1;
  for (const MutationPool &p : ps.pools) {
    const uint64_t n = p.size();
    if (n == 0) return 0;
    if (product > std::numeric_limits<uint64_t>::max() / n) {
      return std::numeric_limits<uint64_t>::max();
    }
    product *= n;
  }
  return product;
}

void CheckInRange(const PoolSet &ps, Uin uin, const MutationConfig &cfg) {
  const uint64_t count = CombinationCount(ps, cfg);
  if (uin.index >= count) {
    throw RangeError("uin " + std::to_string(uin.index) + " outside [0," +
                     std::to_string(count) + ") for " + ps.kernel.name);
  }
}

}  // namespace

uint64_t CombinationCount(const PoolSet &ps, const MutationConfig &cfg) {
  return std::min(SpaceSize(ps), cfg.max_combinations);
}

std::vector<size_t> DecodeUin(const PoolSet &ps, Uin uin) {
  const uint64_t space = SpaceSize(ps);
  if (uin.index >= space) {
    throw RangeError("uin " + std::to_string(uin.index) +
                     " exceeds the combination space of " + ps.kernel.name);
  }
  std::vector<size_t> digits;
  digits.reserve(ps.pools.size());
  uint64_t rest = uin.index;
  for (const MutationPool &p : ps.pools) {
    digits.push_back(static_cast<size_t>(rest % p.size()));
    rest /= p.size();
  }
  return digits;
}

Uin EncodeUin(const PoolSet &ps, std::span<const size_t> digits) {
  if (digits.size() != ps.pools.size()) {
    throw RangeError("expected " + std::to_string(ps.pools.size()) +
                     " digits, got " + std::to_string(digits.size()));
  }
  uint64_t index = 0;
  uint64_t radix = 1;
  for (size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] >= ps.pools[i].size()) {
      throw RangeError("digit " + std::to_string(digits[i]) +
                       " out of range for pool " + std::to_string(i));
    }
    index += digits[i] * radix;
    radix *= ps.pools[i].size();
  }
  return Uin{index};
}

ArgTuple NthCombination(const PoolSet &ps, Uin uin, const MutationConfig &cfg) {
  CheckInRange(ps, uin, cfg);
  const std::vector<size_t> digits = DecodeUin(ps, uin);
  ArgTuple args;
  args.reserve(digits.size());
  for (size_t i = 0; i < digits.size(); ++i) {
    args.push_back(ps.pools[i].candidates[digits[i]].value);
  }
  return args;
}

std::vector<MutationCategory> CategoryOf(const PoolSet &ps, Uin uin,
                                         const MutationConfig &cfg) {
  CheckInRange(ps, uin, cfg);
  const std::vector<size_t> digits = DecodeUin(ps, uin);
  std::vector<MutationCategory> out;
  for (size_t i = 0; i < digits.size(); ++i) {
    const MutationCategory c = ps.pools[i].candidates[digits[i]].category;
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  }
  return out;
}

MutationCategory PrimaryCategory(std::span<const MutationCategory> categories) {
  for (MutationCategory c : categories) {
    if (c != MutationCategory::kOriginalPermutation) return c;
  }
  return MutationCategory::kOriginalPermutation;
}

}  // namespace kernfuzz
