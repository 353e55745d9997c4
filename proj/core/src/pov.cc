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

#include "kernfuzz/pov.h"

#include <algorithm>
#include <cstdio>
#include <tuple>

#include "kernfuzz/errors.h"
#include "kernfuzz/process.h"
#include "kernfuzz/text.h"
#include "kernfuzz/watchdog.h"

namespace kernfuzz {
namespace {

void SkipSpaces(std::string_view &text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
}

void Expect(std::string_view &text, std::string_view token) {
  SkipSpaces(text);
  if (!StartsWith(text, token)) {
    throw ParseError("expected '" + std::string(token) + "' at '" +
                     std::string(text.substr(0, 24)) + "'");
  }
  text.remove_prefix(token.size());
}

bool Consume(std::string_view &text, char c) {
  SkipSpaces(text);
  if (!text.empty() && text.front() == c) {
    text.remove_prefix(1);
    return true;
  }
  return false;
}

std::string_view TakeToken(std::string_view &text) {
  SkipSpaces(text);
  size_t n = 0;
  while (n < text.size() &&
         std::string_view(" ,])").find(text[n]) == std::string_view::npos) {
    ++n;
  }
  if (n == 0) throw ParseError("expected a literal");
  const std::string_view token = text.substr(0, n);
  text.remove_prefix(n);
  return token;
}

bool LooksFloat(std::string_view token) {
  return token.find_first_of(".eE") != std::string_view::npos ||
         token.find("inf") != std::string_view::npos ||
         token.find("nan") != std::string_view::npos;
}

std::string JoinScalars(const std::vector<Scalar> &values) {
  std::string out;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += RenderScalarText(values[i]);
  }
  return out;
}

Value ParseLiteralAt(std::string_view &text) {
  SkipSpaces(text);
  if (text.empty()) throw ParseError("empty literal");
  if (StartsWith(text, "tensor(")) {
    text.remove_prefix(7);
    const DType dtype = ParseDType(TakeToken(text));
    Expect(text, ",");
    Expect(text, "shape=[");
    std::vector<int64_t> dims;
    if (!Consume(text, ']')) {
      do {
        dims.push_back(ParseNumber<int64_t>(TakeToken(text), "dim"));
      } while (Consume(text, ','));
      Expect(text, "]");
    }
    Shape shape(std::move(dims));
    Expect(text, ",");
    SkipSpaces(text);
    Tensor t;
    if (StartsWith(text, "fill=")) {
      text.remove_prefix(5);
      t = Tensor::Filled(dtype, std::move(shape), ParseScalarText(text, dtype));
    } else {
      Expect(text, "values=[");
      std::vector<Scalar> values;
      if (!Consume(text, ']')) {
        do {
          values.push_back(ParseScalarText(text, dtype));
        } while (Consume(text, ','));
        Expect(text, "]");
      }
      if (values.empty()) {
        t = Tensor::Filled(dtype, std::move(shape), ZeroScalar(dtype));
        if (t.NumElements() != 0) {
          throw ParseError("tensor literal has no values for a non-empty shape");
        }
      } else {
        if (static_cast<int64_t>(values.size()) != shape.NumElements()) {
          throw ParseError("tensor literal value count does not match shape");
        }
        t = Tensor::FromValues(dtype, std::move(shape), std::move(values));
      }
    }
    Expect(text, ")");
    return t;
  }
  if (text.front() == '[') {
    text.remove_prefix(1);
    IntList list;
    if (!Consume(text, ']')) {
      do {
        list.push_back(ParseNumber<int64_t>(TakeToken(text), "list element"));
      } while (Consume(text, ','));
      Expect(text, "]");
    }
    return list;
  }
  if (text.front() == '"') return UnquoteString(text);
  const std::string_view token = TakeToken(text);
  if (token == "true") return true;
  if (token == "false") return false;
  if (LooksFloat(token)) return ParseNumber<double>(token, "float literal");
  return ParseNumber<int64_t>(token, "int literal");
}

int FaultIndex(FaultClass f) {
  switch (f) {
    case FaultClass::kSegvLike:
      return 0;
    case FaultClass::kFpeLike:
      return 1;
    case FaultClass::kAbortLike:
      return 2;
  }
  return 0;
}

int MutatedArgCount(const CrashReport &report, const Registry &registry,
                    const MutationConfig &mcfg) {
  const PoolSet pools = SessionPools(registry.Get(report.kernel), mcfg);
  int n = 0;
  for (auto c : CategoryOf(pools, report.uin, mcfg)) {
    if (c != MutationCategory::kOriginalPermutation) ++n;
  }
  return n;
}

std::vector<std::pair<MutationCategory, std::array<int64_t, 4>>> SortedRows(
    const CategoryTable &table) {
  std::vector<std::pair<MutationCategory, std::array<int64_t, 4>>> rows;
  for (const auto &[cat, counts] : table.rows) {
    const int64_t total = counts[0] + counts[1] + counts[2];
    if (total == 0) continue;
    rows.push_back({cat, {counts[0], counts[1], counts[2], total}});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto &a, const auto &b) {
    if (a.second[3] != b.second[3]) return a.second[3] > b.second[3];
    return static_cast<int>(a.first) < static_cast<int>(b.first);
  });
  return rows;
}

std::array<int64_t, 4> ColumnTotals(const CategoryTable &table) {
  std::array<int64_t, 4> totals{};
  for (const auto &[cat, counts] : table.rows) {
    for (int i = 0; i < 3; ++i) {
      totals[i] += counts[i];
      totals[3] += counts[i];
    }
  }
  return totals;
}

}  // namespace

BindingMap BindingMap::FromRegistry(const Registry &registry) {
  BindingMap map;
  for (const auto &[name, entry] : registry.entries()) {
    if (entry.binding) map.Add(name, *entry.binding);
  }
  return map;
}

BindingMap BindingMap::Parse(std::string_view text) {
  BindingMap map;
  for (auto line : Split(text, '\n')) {
    if (line.empty()) continue;
    const auto fields = Split(line, '\t');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw ParseError("bad binding map line '" + std::string(line) + "'");
    }
    if (map.entries_.count(fields[0]) != 0) {
      throw ParseError("duplicate kernel '" + std::string(fields[0]) +
                       "' in binding map");
    }
    map.entries_.emplace(std::string(fields[0]), std::string(fields[1]));
  }
  return map;
}

BindingMap BindingMap::Load(const std::filesystem::path &path) {
  return Parse(ReadFile(path));
}

void BindingMap::Add(std::string kernel, std::string binding) {
  if (entries_.count(kernel) != 0) {
    throw ValidationError("duplicate kernel '" + kernel + "' in binding map");
  }
  entries_.emplace(std::move(kernel), std::move(binding));
}

std::optional<std::string> BindingMap::Find(std::string_view kernel) const {
  auto it = entries_.find(kernel);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string BindingMap::Render() const {
  std::string out;
  for (const auto &[kernel, binding] : entries_) {
    out += kernel + "\t" + binding + "\n";
  }
  return out;
}

void RecordBindingMap(const Registry &registry,
                      const std::filesystem::path &path) {
  WriteFileAtomic(path, BindingMap::FromRegistry(registry).Render());
}

std::string RenderLiteral(const Value &value) {
  return std::visit(
      [](const auto &v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          throw UnsupportedArgError("empty value has no literal form");
        } else if constexpr (std::is_same_v<T, Tensor>) {
          std::string out = "tensor(" + std::string(DTypeName(v.dtype())) +
                            ", shape=" + v.shape().ToString() + ", ";
          if (v.IsUniform()) {
            out += "fill=" + RenderScalarText(v.FirstValue());
          } else {
            out += "values=[" + JoinScalars(v.Materialize()) + "]";
          }
          return out + ")";
        } else if constexpr (std::is_same_v<T, IntList>) {
          std::string out = "[";
          for (size_t i = 0; i < v.size(); ++i) {
            if (i > 0) out += ", ";
            out += FormatNumber(v[i]);
          }
          return out + "]";
        } else {
          return RenderScalarText(Scalar(v));
        }
      },
      value);
}

Value ParseLiteral(std::string_view text) {
  std::string_view rest = text;
  Value v = ParseLiteralAt(rest);
  if (!Trim(rest).empty()) {
    throw ParseError("trailing text in literal '" + std::string(text) + "'");
  }
  return v;
}

std::string RenderPovManifest(const PovManifest &manifest) {
  std::string out = "pov-version=" + std::to_string(kPovVersion) + "\n";
  out += "binding=" + manifest.binding + "\n";
  out += "provenance=" + manifest.kernel + ":" +
         FormatNumber(manifest.uin.index) + "\n";
  out += "expect=" + std::string(FaultClassName(manifest.expected)) + "\n";
  for (const auto &arg : manifest.args) {
    out += "arg." + arg.name + "=" + arg.literal + "\n";
  }
  return out;
}

PovManifest ParsePovManifest(std::string_view text) {
  auto lines = Split(text, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.size() < 4) throw ParseError("PoV manifest is too short");
  auto field = [&](size_t i, std::string_view key) {
    const std::string prefix = std::string(key) + "=";
    if (!StartsWith(lines[i], prefix)) {
      throw ParseError("PoV manifest expects '" + prefix + "'");
    }
    return lines[i].substr(prefix.size());
  };
  const int version = ParseNumber<int>(field(0, "pov-version"), "pov-version");
  if (version != kPovVersion) {
    throw ParseError("unsupported PoV manifest version " +
                     std::to_string(version));
  }
  PovManifest m;
  m.binding = std::string(field(1, "binding"));
  const std::string_view prov = field(2, "provenance");
  const auto colon = prov.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw ParseError("bad provenance '" + std::string(prov) + "'");
  }
  m.kernel = std::string(prov.substr(0, colon));
  m.uin.index = ParseNumber<uint64_t>(prov.substr(colon + 1), "provenance uin");
  m.expected = ParseFaultClass(field(3, "expect"));
  for (size_t i = 4; i < lines.size(); ++i) {
    if (!StartsWith(lines[i], "arg.")) {
      throw ParseError("PoV manifest expects 'arg.' lines");
    }
    const std::string_view rest = lines[i].substr(4);
    const auto eq = rest.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw ParseError("bad PoV argument line '" + std::string(lines[i]) + "'");
    }
    m.args.push_back({std::string(rest.substr(0, eq)),
                      std::string(rest.substr(eq + 1))});
  }
  return m;
}

PovManifest SynthesizePov(const CrashReport &report, const BindingMap &map,
                          const Registry &registry) {
  const auto binding = map.Find(report.kernel);
  if (!binding) {
    throw NoBindingError("kernel '" + report.kernel + "' has no binding");
  }
  const KernelSignature &sig = registry.Get(report.kernel).signature;
  if (report.args.size() != sig.arity()) {
    throw ConsistencyError("report for '" + report.kernel + "' has " +
                           std::to_string(report.args.size()) +
                           " arguments, kernel takes " +
                           std::to_string(sig.arity()));
  }
  PovManifest m;
  m.binding = *binding;
  m.kernel = report.kernel;
  m.uin = report.uin;
  m.expected = report.fault;
  for (size_t i = 0; i < sig.arity(); ++i) {
    m.args.push_back({sig.params[i].name, RenderLiteral(report.args[i])});
  }
  return m;
}

std::filesystem::path PovPath(const std::filesystem::path &povs_dir,
                              std::string_view kernel, Uin uin) {
  return povs_dir / (std::string(kernel) + "-" + FormatNumber(uin.index) + ".pov");
}

std::vector<CrashReport> SelectRepresentatives(
    const std::vector<CrashReport> &reports, const Registry &registry,
    const MutationConfig &mcfg) {
  std::map<std::pair<std::string, int>, std::pair<int, const CrashReport *>>
      best;
  for (const auto &r : reports) {
    const int mutated = MutatedArgCount(r, registry, mcfg);
    const auto key = std::make_pair(r.kernel, FaultIndex(r.fault));
    auto it = best.find(key);
    if (it == best.end() ||
        std::tie(mutated, r.uin) <
            std::tie(it->second.first, it->second.second->uin)) {
      best[key] = {mutated, &r};
    }
  }
  std::vector<CrashReport> out;
  for (const auto &[key, chosen] : best) out.push_back(*chosen.second);
  return out;
}

const KernelEntry &ResolveBinding(const Registry &registry,
                                  std::string_view binding) {
  for (const auto &[name, entry] : registry.entries()) {
    if (entry.binding && *entry.binding == binding) return entry;
  }
  throw NoBindingError("no kernel is exposed as '" + std::string(binding) + "'");
}

ArgTuple MaterializePovArgs(const PovManifest &manifest,
                            const Registry &registry) {
  const KernelEntry &entry = ResolveBinding(registry, manifest.binding);
  const KernelSignature &sig = entry.signature;
  if (manifest.args.size() != sig.arity()) {
    throw ConsistencyError("manifest passes " +
                           std::to_string(manifest.args.size()) +
                           " arguments to " + manifest.binding + ", which takes " +
                           std::to_string(sig.arity()));
  }
  ArgTuple args;
  for (size_t i = 0; i < sig.arity(); ++i) {
    if (manifest.args[i].name != sig.params[i].name) {
      throw ConsistencyError("manifest argument '" + manifest.args[i].name +
                             "' where '" + sig.params[i].name + "' expected");
    }
    Value v = ParseLiteral(manifest.args[i].literal);
    if (!ValueConforms(v, sig.params[i].type)) {
      throw ConsistencyError("argument '" + sig.params[i].name + "' is not a " +
                             std::string(TypeTagName(sig.params[i].type)));
    }
    args.push_back(std::move(v));
  }
  return args;
}

std::string ReplayVerdict::Name() const {
  switch (kind) {
    case ReplayKind::kNoCrash:
      return "nocrash";
    case ReplayKind::kFault:
      return std::string(FaultClassName(fault));
    case ReplayKind::kError:
      return "error";
  }
  return "error";
}

ReplayVerdict ReplayPov(const std::filesystem::path &manifest_path,
                        const std::filesystem::path &executable,
                        std::chrono::nanoseconds timeout) {
  ChildSpec spec;
  spec.argv = {executable.string(), "__exec-pov", manifest_path.string()};
  spec.timeout = timeout;
  // Replay output is not interesting; faults are read from the exit code.
  spec.stdout_path = "/dev/null";
  spec.stderr_path = "/dev/null";
  const ChildResult child = RunChild(spec);
  ReplayVerdict v;
  v.exit_code = child.exit_code;
  if (child.timed_out) {
    v.kind = ReplayKind::kError;
    return v;
  }
  const ExitClass exit = ClassifyExit(child.exit_code);
  switch (exit.kind) {
    case ExitKind::kGraceful:
      v.kind = ReplayKind::kNoCrash;
      break;
    case ExitKind::kFault:
      v.kind = ReplayKind::kFault;
      v.fault = exit.fault;
      break;
    case ExitKind::kOther:
      v.kind = ReplayKind::kError;
      break;
  }
  return v;
}

std::string RenderVerdict(const ReplayVerdict &verdict, FaultClass expected) {
  return "observed=" + verdict.Name() + "\nexpected=" +
         std::string(FaultClassName(expected)) + "\nmatch=" +
         (verdict.Confirms(expected) ? "true" : "false") + "\n";
}

MutationCategory PovCategory(const PovManifest &manifest,
                             const Registry &registry,
                             const MutationConfig &mcfg) {
  const PoolSet pools = SessionPools(registry.Get(manifest.kernel), mcfg);
  const auto cats = CategoryOf(pools, manifest.uin, mcfg);
  return PrimaryCategory(cats);
}

int64_t CategoryTable::Total() const { return ColumnTotals(*this)[3]; }

CategoryTable CategorizePovs(const std::vector<ConfirmedPov> &povs) {
  CategoryTable table;
  for (const auto &p : povs) ++table.rows[p.category][FaultIndex(p.fault)];
  return table;
}

std::string RenderCategoryCsv(const CategoryTable &table) {
  std::string out = "category,segv,fpe,abort,total\n";
  const auto rows = SortedRows(table);
  for (const auto &[cat, c] : rows) {
    out += std::string(CategoryName(cat));
    for (int64_t n : c) out += "," + FormatNumber(n);
    out += '\n';
  }
  if (!rows.empty()) {
    out += "total";
    for (int64_t n : ColumnTotals(table)) out += "," + FormatNumber(n);
    out += '\n';
  }
  return out;
}

std::string RenderCategoryText(const CategoryTable &table) {
  std::vector<std::array<std::string, 5>> lines;
  lines.push_back({"Mutation", "SEGV", "FPE", "ABORT", "Total"});
  const auto rows = SortedRows(table);
  for (const auto &[cat, c] : rows) {
    lines.push_back({std::string(CategoryDescription(cat)), FormatNumber(c[0]),
                     FormatNumber(c[1]), FormatNumber(c[2]),
                     FormatNumber(c[3])});
  }
  if (!rows.empty()) {
    const auto t = ColumnTotals(table);
    lines.push_back({"Total", FormatNumber(t[0]), FormatNumber(t[1]),
                     FormatNumber(t[2]), FormatNumber(t[3])});
  }
  std::array<size_t, 5> width{};
  for (const auto &l : lines) {
    for (size_t i = 0; i < 5; ++i) width[i] = std::max(width[i], l[i].size());
  }
  std::string out;
  for (const auto &l : lines) {
    std::string row = l[0] + std::string(width[0] - l[0].size(), ' ');
    for (size_t i = 1; i < 5; ++i) {
      row += "  " + std::string(width[i] - l[i].size(), ' ') + l[i];
    }
    out += row + "\n";
  }
  return out;
}

}  // namespace kernfuzz
