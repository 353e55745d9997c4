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

// Proof-of-vulnerability manifests: a crash report translated to a call on a
// kernel's high-level binding.
//
//   pov-version=1
//   binding=ops.strided_write
//   provenance=strided_write:17
//   expect=segv
//   arg.indices=tensor(int64, shape=[2], values=[2, 3])
//   arg.strides=tensor(int64, shape=[2], fill=-1)
//   arg.payload=7
//
// Literals: tensors as tensor(<dtype>, shape=[..], fill=<v>) when uniform
// and tensor(<dtype>, shape=[..], values=[..]) otherwise; int64 as bare
// integers, float64 always with a '.', exponent, inf or nan; bools as
// true/false; strings quoted; int lists as [a, b].
#ifndef KERNFUZZ_POV_H_
#define KERNFUZZ_POV_H_

#include <array>
#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kernfuzz/crash_report.h"
#include "kernfuzz/fault.h"
#include "kernfuzz/kernel_corpus.h"
#include "kernfuzz/mutation.h"

namespace kernfuzz {

// kernel name -> binding name, one `<kernel>\t<binding>` line per bound
// kernel.
class BindingMap {
 public:
  static BindingMap FromRegistry(const Registry &registry);
  // Throws ParseError, including on duplicate kernels.
  static BindingMap Parse(std::string_view text);
  static BindingMap Load(const std::filesystem::path &path);

  // Throws ValidationError on a duplicate kernel.
  void Add(std::string kernel, std::string binding);
  std::optional<std::string> Find(std::string_view kernel) const;
  const std::map<std::string, std::string, std::less<>> &entries() const {
    return entries_;
  }

  std::string Render() const;

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

void RecordBindingMap(const Registry &registry,
                      const std::filesystem::path &path);

inline constexpr int kPovVersion = 1;

struct PovArg {
  std::string name;
  std::string literal;

  friend bool operator==(const PovArg &, const PovArg &) = default;
};

struct PovManifest {
  std::string binding;
  std::string kernel;
  Uin uin;
  FaultClass expected = FaultClass::kSegvLike;
  std::vector<PovArg> args;

  friend bool operator==(const PovManifest &, const PovManifest &) = default;
};

std::string RenderPovManifest(const PovManifest &manifest);
// Throws ParseError, including for unknown versions.
PovManifest ParsePovManifest(std::string_view text);

// Throws UnsupportedArgError for values outside the literal grammar.
std::string RenderLiteral(const Value &value);
// Throws ParseError.
Value ParseLiteral(std::string_view text);

// Throws NoBindingError when `map` lacks the kernel, UnsupportedArgError for
// arguments the literal grammar cannot express, ConsistencyError when the
// report does not match the kernel's signature.
PovManifest SynthesizePov(const CrashReport &report, const BindingMap &map,
                          const Registry &registry);

// <povs_dir>/<kernel>-<uin>.pov
std::filesystem::path PovPath(const std::filesystem::path &povs_dir,
                              std::string_view kernel, Uin uin);

// Picks one report per (kernel, fault class): the one mutating the fewest
// arguments away from the original call, then the lowest UIN. Output is
// sorted by kernel, then fault class.
std::vector<CrashReport> SelectRepresentatives(
    const std::vector<CrashReport> &reports, const Registry &registry,
    const MutationConfig &mcfg);

// Finds the registry entry exposed as `binding`. Throws NoBindingError.
const KernelEntry &ResolveBinding(const Registry &registry,
                                  std::string_view binding);

// Parses the manifest's literals into an argument tuple that passes
// CheckArgs for the bound kernel. Throws NoBindingError, ParseError or
// ConsistencyError.
ArgTuple MaterializePovArgs(const PovManifest &manifest,
                            const Registry &registry);

enum class ReplayKind { kNoCrash, kFault, kError };

struct ReplayVerdict {
  ReplayKind kind = ReplayKind::kNoCrash;
  FaultClass fault = FaultClass::kSegvLike;  // kFault only
  int exit_code = 0;

  // segv / fpe / abort / nocrash / error
  std::string Name() const;
  bool Confirms(FaultClass expected) const {
    return kind == ReplayKind::kFault && fault == expected;
  }
};

// Runs `executable __exec-pov <manifest_path>` without instrumentation and
// classifies the exit. Throws OperationalError when the child cannot start.
ReplayVerdict ReplayPov(const std::filesystem::path &manifest_path,
                        const std::filesystem::path &executable,
                        std::chrono::nanoseconds timeout);

// observed=<name>\nexpected=<class>\nmatch=<true|false>\n
std::string RenderVerdict(const ReplayVerdict &verdict, FaultClass expected);

// The mutation category a PoV is attributed to.
MutationCategory PovCategory(const PovManifest &manifest,
                             const Registry &registry,
                             const MutationConfig &mcfg);

struct CategoryTable {
  // Indexed by fault class (segv, fpe, abort).
  std::map<MutationCategory, std::array<int64_t, 3>> rows;

  int64_t Total() const;
  friend bool operator==(const CategoryTable &, const CategoryTable &) = default;
};

struct ConfirmedPov {
  MutationCategory category;
  FaultClass fault;
};

CategoryTable CategorizePovs(const std::vector<ConfirmedPov> &povs);
// Header `category,segv,fpe,abort,total`; rows by total (descending) then
// category order; a final `total` row when non-empty.
std::string RenderCategoryCsv(const CategoryTable &table);
// Aligned text with the same rows, labelled by category description.
std::string RenderCategoryText(const CategoryTable &table);

}  // namespace kernfuzz

#endif  // KERNFUZZ_POV_H_
