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

#include "kernfuzz/crash_report.h"

#include "kernfuzz/errors.h"
#include "kernfuzz/text.h"

namespace kernfuzz {
namespace {

void SkipSpaces(std::string_view &text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
}

void Expect(std::string_view &text, std::string_view token) {
  if (!StartsWith(text, token)) {
    throw ParseError("expected '" + std::string(token) + "' at '" +
                     std::string(text.substr(0, 24)) + "'");
  }
  text.remove_prefix(token.size());
}

std::string_view TakeToken(std::string_view &text) {
  SkipSpaces(text);
  size_t n = 0;
  while (n < text.size() && std::string_view(" ,]>)").find(text[n]) ==
                                std::string_view::npos) {
    ++n;
  }
  if (n == 0) throw ParseError("expected a value");
  const std::string_view token = text.substr(0, n);
  text.remove_prefix(n);
  return token;
}

std::string RenderShape(const Shape &shape) { return shape.ToString(); }

Shape ParseShape(std::string_view &text) {
  Expect(text, "[");
  std::vector<int64_t> dims;
  if (!text.empty() && text.front() == ']') {
    text.remove_prefix(1);
    return Shape(dims);
  }
  while (true) {
    dims.push_back(ParseNumber<int64_t>(TakeToken(text), "dim"));
    SkipSpaces(text);
    if (text.empty()) throw ParseError("unterminated shape");
    if (text.front() == ']') {
      text.remove_prefix(1);
      return Shape(dims);
    }
    Expect(text, ",");
  }
}

// Space-separated values up to (not including) the closing '>'.
std::string RenderValueList(const std::vector<Scalar> &values) {
  std::string out;
  for (const auto &v : values) {
    out += ' ';
    out += RenderScalarText(v);
  }
  return out;
}

std::string RenderTensorLine(const Tensor &t) {
  std::string out = "Tensor<type: ";
  out += DTypeName(t.dtype());
  out += " shape: " + RenderShape(t.shape()) + " values:";
  if (t.NumElements() > kMaxListedValues && t.IsUniform()) {
    out += ' ' + RenderScalarText(t.FirstValue()) + " ...";
  } else {
    out += RenderValueList(t.Materialize());
  }
  out += '>';
  return out;
}

Tensor ParseTensorBody(std::string_view &text) {
  Expect(text, "type: ");
  const DType dtype = ParseDType(TakeToken(text));
  SkipSpaces(text);
  Expect(text, "shape: ");
  Shape shape = ParseShape(text);
  SkipSpaces(text);
  Expect(text, "values:");
  std::vector<Scalar> values;
  bool ellipsis = false;
  while (true) {
    SkipSpaces(text);
    if (text.empty()) throw ParseError("unterminated tensor");
    if (text.front() == '>') {
      text.remove_prefix(1);
      break;
    }
    if (StartsWith(text, "...")) {
      text.remove_prefix(3);
      ellipsis = true;
      continue;
    }
    if (ellipsis) throw ParseError("values after '...'");
    values.push_back(ParseScalarText(text, dtype));
  }
  const int64_t n = shape.NumElements();
  if (ellipsis) {
    if (values.size() != 1) throw ParseError("'...' needs exactly one value");
    return Tensor::Filled(dtype, std::move(shape), values[0]);
  }
  if (static_cast<int64_t>(values.size()) != n) {
    throw ParseError("tensor has " + std::to_string(values.size()) +
                     " values for shape " + shape.ToString());
  }
  bool uniform = !values.empty();
  for (const auto &v : values) uniform = uniform && ScalarEquals(v, values[0]);
  if (uniform) return Tensor::Filled(dtype, std::move(shape), values[0]);
  if (values.empty()) return Tensor::Filled(dtype, std::move(shape), ZeroScalar(dtype));
  return Tensor::FromValues(dtype, std::move(shape), std::move(values));
}

}  // namespace

std::string RenderScalarText(const Scalar &value) {
  return std::visit(
      [](const auto &v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, int64_t>) {
          return FormatNumber(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return FormatFloatLiteral(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return QuoteString(v);
        }
      },
      value);
}

Scalar ParseScalarText(std::string_view &text, DType dtype) {
  SkipSpaces(text);
  switch (dtype) {
    case DType::kInt64:
      return ParseNumber<int64_t>(TakeToken(text), "int64 value");
    case DType::kFloat64:
      return ParseNumber<double>(TakeToken(text), "float64 value");
    case DType::kBool: {
      const std::string_view token = TakeToken(text);
      if (token == "true") return true;
      if (token == "false") return false;
      throw ParseError("bad bool '" + std::string(token) + "'");
    }
    case DType::kStr:
      return UnquoteString(text);
  }
  throw ParseError("bad dtype");
}

std::string RenderArgLine(const Value &value) {
  return std::visit(
      [](const auto &v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          throw ValidationError("cannot render an empty value");
        } else if constexpr (std::is_same_v<T, Tensor>) {
          return RenderTensorLine(v);
        } else if constexpr (std::is_same_v<T, IntList>) {
          std::string out = "List<type: int64 values:";
          for (int64_t x : v) out += ' ' + FormatNumber(x);
          return out + ">";
        } else {
          const Scalar s = v;
          return "Scalar<type: " + std::string(DTypeName(DTypeOf(s))) +
                 " value: " + RenderScalarText(s) + ">";
        }
      },
      value);
}

Value ParseArgLine(std::string_view line) {
  std::string_view text = line;
  Value out;
  if (StartsWith(text, "Tensor<")) {
    text.remove_prefix(7);
    out = ParseTensorBody(text);
  } else if (StartsWith(text, "Scalar<")) {
    text.remove_prefix(7);
    Expect(text, "type: ");
    const DType dtype = ParseDType(TakeToken(text));
    SkipSpaces(text);
    Expect(text, "value:");
    const Scalar s = ParseScalarText(text, dtype);
    SkipSpaces(text);
    Expect(text, ">");
    out = std::visit([](const auto &v) -> Value { return v; }, s);
  } else if (StartsWith(text, "List<")) {
    text.remove_prefix(5);
    Expect(text, "type: int64");
    SkipSpaces(text);
    Expect(text, "values:");
    IntList values;
    while (true) {
      SkipSpaces(text);
      if (text.empty()) throw ParseError("unterminated list");
      if (text.front() == '>') {
        text.remove_prefix(1);
        break;
      }
      values.push_back(ParseNumber<int64_t>(TakeToken(text), "list value"));
    }
    out = std::move(values);
  } else {
    throw ParseError("unknown argument line '" + std::string(line) + "'");
  }
  if (!Trim(text).empty()) {
    throw ParseError("trailing text in argument line '" + std::string(line) +
                     "'");
  }
  return out;
}

PoolSet SessionPools(const KernelEntry &entry, const MutationConfig &mcfg) {
  if (entry.driver_seeds.empty()) {
    throw ConsistencyError("kernel '" + entry.signature.name +
                           "' has no driver seeds");
  }
  return BuildPools(entry.signature, entry.driver_seeds.front(), mcfg);
}

CrashReport BuildCrashReport(const Registry &registry, std::string_view kernel,
                             Uin uin, FaultClass fault,
                             const MutationConfig &mcfg) {
  const KernelEntry &entry = registry.Get(kernel);
  const PoolSet pools = SessionPools(entry, mcfg);
  if (uin.index >= CombinationCount(pools, mcfg)) {
    throw ConsistencyError("uin " + FormatNumber(uin.index) +
                           " is out of range for " + std::string(kernel));
  }
  CrashReport report;
  report.kernel = std::string(kernel);
  report.uin = uin;
  report.fault = fault;
  report.args = NthCombination(pools, uin, mcfg);
  report.seed = mcfg.rng_seed;
  report.cfghash = mcfg.Fingerprint();
  return report;
}

std::string RenderCrashReport(const CrashReport &report) {
  std::string out = "# " + report.kernel + "\n";
  for (const auto &arg : report.args) out += RenderArgLine(arg) + "\n";
  out += "uin=" + FormatNumber(report.uin.index) + "\n";
  out += "class=" + std::string(FaultClassName(report.fault)) + "\n";
  out += "seed=" + FormatNumber(report.seed) + "\n";
  out += "cfghash=" + report.cfghash + "\n";
  out += "version=" + std::to_string(kCrashReportVersion) + "\n";
  return out;
}

CrashReport ParseCrashReport(std::string_view text) {
  auto lines = Split(text, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.size() < 6) throw ParseError("crash report is too short");
  if (!StartsWith(lines[0], "# ")) throw ParseError("crash report lacks '# '");
  CrashReport report;
  report.kernel = std::string(lines[0].substr(2));
  const size_t meta = lines.size() - 5;
  auto field = [&](size_t i, std::string_view key) {
    const std::string prefix = std::string(key) + "=";
    if (!StartsWith(lines[i], prefix)) {
      throw ParseError("crash report expects '" + prefix + "'");
    }
    return lines[i].substr(prefix.size());
  };
  const int version = ParseNumber<int>(field(meta + 4, "version"), "version");
  if (version != kCrashReportVersion) {
    throw ParseError("unsupported crash report version " +
                     std::to_string(version));
  }
  for (size_t i = 1; i < meta; ++i) report.args.push_back(ParseArgLine(lines[i]));
  report.uin.index = ParseNumber<uint64_t>(field(meta, "uin"), "uin");
  report.fault = ParseFaultClass(field(meta + 1, "class"));
  report.seed = ParseNumber<uint64_t>(field(meta + 2, "seed"), "seed");
  report.cfghash = std::string(field(meta + 3, "cfghash"));
  return report;
}

std::filesystem::path CrashReportPath(const std::filesystem::path &reports_dir,
                                      std::string_view kernel, Uin uin) {
  return reports_dir /
         (std::string(kernel) + "-" + FormatNumber(uin.index) + ".report");
}

std::filesystem::path WriteCrashReport(const Registry &registry,
                                       std::string_view kernel, Uin uin,
                                       FaultClass fault,
                                       const MutationConfig &mcfg,
                                       std::string_view expected_cfghash,
                                       const std::filesystem::path &reports_dir) {
  if (mcfg.Fingerprint() != expected_cfghash) {
    throw ConsistencyError("config fingerprint " + mcfg.Fingerprint() +
                           " does not match recorded " +
                           std::string(expected_cfghash));
  }
  const CrashReport report = BuildCrashReport(registry, kernel, uin, fault, mcfg);
  const auto path = CrashReportPath(reports_dir, kernel, uin);
  WriteFileAtomic(path, RenderCrashReport(report));
  return path;
}

}  // namespace kernfuzz
