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

#include "kernfuzz/pipeline.h"

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <new>
#include <set>
#include <tuple>

#include "kernfuzz/crash_report.h"
#include "kernfuzz/exit_codes.h"
#include "kernfuzz/harness.h"
#include "kernfuzz/kernel_corpus.h"
#include "kernfuzz/layout.h"
#include "kernfuzz/pov.h"
#include "kernfuzz/text.h"
#include "kernfuzz/watchdog.h"

namespace kernfuzz {
namespace {

namespace fs = std::filesystem;

// Files in `dir` with `extension`, sorted by name. Missing dir reads as
// empty.
std::vector<fs::path> ListFiles(const fs::path &dir, std::string_view extension) {
  std::vector<fs::path> out;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return out;
  for (const auto &e : fs::directory_iterator(dir, ec)) {
    if (e.path().extension() == extension) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

void RemoveAll(const fs::path &p) {
  std::error_code ec;
  fs::remove_all(p, ec);
  if (ec) throw OperationalError("cannot remove " + p.string() + ": " + ec.message());
}

fs::path VerdictPath(const fs::path &manifest) {
  fs::path p = manifest;
  p.replace_extension(".verdict");
  return p;
}

// Whether a verdict file records a confirmed fault.
bool VerdictConfirms(const fs::path &verdict) {
  const std::string text = ReadFile(verdict);
  for (auto line : Split(text, '\n')) {
    if (line == "match=true") return true;
  }
  return false;
}

std::string VerdictObserved(const fs::path &verdict) {
  const std::string text = ReadFile(verdict);
  for (auto line : Split(text, '\n')) {
    if (StartsWith(line, "observed=")) return std::string(line.substr(9));
  }
  return "error";
}

// end_ns of the last attempt in a timing sidecar, if any.
int64_t LastTimingEnd(const fs::path &path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) return 0;
  const std::string text = ReadFile(path);
  auto lines = Split(text, '\n');
  while (!lines.empty() && Trim(lines.back()).empty()) lines.pop_back();
  if (lines.size() < 2) return 0;
  const auto f = Split(lines.back(), ',');
  if (f.size() != 4) return 0;
  try {
    return ParseNumber<int64_t>(f[2], "end_ns");
  } catch (const ParseError &) {
    return 0;
  }
}

void NoMemory() {
  static constexpr char kMsg[] = "kernfuzz: allocation failed under the memory cap\n";
  [[maybe_unused]] ssize_t n = ::write(STDERR_FILENO, kMsg, sizeof(kMsg) - 1);
  std::_Exit(kExitMemoryExceeded);
}

}  // namespace

std::vector<std::string> SelectTargets(const FuzzOptions &options) {
  if (options.all == options.kernels.has_value()) {
    throw UsageError("exactly one of --kernels or --all is required");
  }
  if (options.kernels && *options.kernels <= 0) {
    throw UsageError("--kernels must be positive");
  }
  const Registry registry = RegisterCorpus();
  std::vector<std::string> names;
  for (const auto &sig : ExtractTargets(registry)) names.push_back(sig.name);
  if (!options.only.empty()) {
    std::vector<std::string> filtered;
    for (const auto &want : options.only) {
      if (std::find(names.begin(), names.end(), want) == names.end()) {
        throw UsageError("'" + want + "' is not a fuzz target");
      }
      if (std::find(filtered.begin(), filtered.end(), want) == filtered.end()) {
        filtered.push_back(want);
      }
    }
    names = std::move(filtered);
  }
  auto order = VisitationOrder(std::move(names), options.seed);
  if (options.kernels && static_cast<size_t>(*options.kernels) < order.size()) {
    order.resize(static_cast<size_t>(*options.kernels));
  }
  return order;
}

int RunFuzz(const FuzzOptions &options, std::ostream &log) {
  if (options.jobs < 1) throw UsageError("--jobs must be >= 1");
  if (options.timeout.count() <= 0) throw UsageError("--timeout must be positive");
  if (options.max_reruns < 0) throw UsageError("--max-reruns must be >= 0");
  const std::vector<std::string> targets = SelectTargets(options);

  const ArtifactLayout layout(options.out);
  std::error_code ec;
  if (fs::exists(layout.results(), ec) && !options.force) {
    log << "fuzz stage already complete in " << options.out.string()
        << " (use --force to redo)\n";
    return kExitOk;
  }
  if (options.force) {
    for (const auto &p :
         {layout.logs_dir(), layout.crashes_dir(), layout.reports_dir(),
          layout.timing_dir(), layout.povs_dir(), layout.summary_dir(),
          layout.results(), layout.mutation_config(), layout.binding_map()}) {
      RemoveAll(p);
    }
  }
  layout.CreateDirectories();

  MutationConfig mcfg;
  if (options.mutation_config) mcfg = MutationConfig::Load(*options.mutation_config);
  mcfg.rng_seed = options.seed;
  mcfg.Validate();

  const Registry registry = RegisterCorpus();
  RecordBindingMap(registry, layout.binding_map());

  CampaignConfig cfg;
  cfg.timeout_per_kernel = options.timeout;
  cfg.memory_cap_bytes = options.memory_cap_bytes;
  cfg.kernel_order_seed = options.seed;
  cfg.max_reruns = options.max_reruns;
  cfg.jobs = options.jobs;
  cfg.normalize_timestamps = options.normalize_timestamps;
  cfg.executable = options.executable;
  cfg.out_dir = options.out;

  const auto outcomes = Orchestrate(registry, targets, cfg, mcfg);
  for (const auto &o : outcomes) {
    if (!o.crashes.empty()) {
      const std::string cfghash =
          ReadMutationLog(layout.log_file(o.kernel)).cfghash;
      for (const auto &c : o.crashes) {
        WriteCrashReport(registry, o.kernel, c.uin, c.fault, mcfg, cfghash,
                         layout.reports_dir());
      }
    }
    log << o.kernel << ": " << SessionStatusName(o.status) << ", "
        << o.crashes.size() << " crash(es), " << o.rerun_count << " rerun(s)";
    if (!o.detail.empty()) log << " (" << o.detail << ")";
    log << "\n";
  }
  return kExitOk;
}

int RunSynthesize(const StageOptions &options, std::ostream &log) {
  const ArtifactLayout layout(options.out);
  std::error_code ec;
  if (!fs::exists(layout.results(), ec) ||
      !fs::is_directory(layout.reports_dir(), ec)) {
    throw OperationalError("no fuzz results or reports in " +
                           options.out.string());
  }
  const fs::path synth_log = layout.povs_dir() / "synthesis.log";
  if (fs::exists(synth_log, ec) && !options.force) {
    log << "synthesis already complete in " << options.out.string()
        << " (use --force to redo)\n";
    return kExitOk;
  }
  RemoveAll(layout.povs_dir());
  fs::create_directories(layout.povs_dir(), ec);
  if (ec) throw OperationalError("cannot create " + layout.povs_dir().string());

  const Registry registry = RegisterCorpus();
  const MutationConfig mcfg = MutationConfig::Load(layout.mutation_config());
  const BindingMap map = BindingMap::Load(layout.binding_map());

  const auto start = std::chrono::steady_clock::now();
  std::vector<CrashReport> reports;
  for (const auto &path : ListFiles(layout.reports_dir(), ".report")) {
    reports.push_back(ParseCrashReport(ReadFile(path)));
  }
  std::string synth_text;
  int written = 0;
  int failed = 0;
  for (const auto &report : SelectRepresentatives(reports, registry, mcfg)) {
    const std::string id = report.kernel + ":" + FormatNumber(report.uin.index);
    try {
      const PovManifest m = SynthesizePov(report, map, registry);
      const fs::path path = PovPath(layout.povs_dir(), report.kernel, report.uin);
      WriteFileAtomic(path, RenderPovManifest(m));
      synth_text += "ok " + id + " " + path.filename().string() + "\n";
      ++written;
    } catch (const NoBindingError &e) {
      synth_text += "NoBinding " + id + " " + e.what() + "\n";
      ++failed;
    } catch (const UnsupportedArgError &e) {
      synth_text += "UnsupportedArg " + id + " " + e.what() + "\n";
      ++failed;
    }
  }
  WriteFileAtomic(synth_log, synth_text);
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  log << "synthesized " << written << " manifest(s), " << failed
      << " failure(s) from " << reports.size() << " report(s) in "
      << elapsed.count() << " ms\n";
  return kExitOk;
}

int RunReplay(const StageOptions &options, std::ostream &log) {
  const ArtifactLayout layout(options.out);
  std::error_code ec;
  if (!fs::is_directory(layout.povs_dir(), ec)) {
    throw OperationalError("no povs directory in " + options.out.string());
  }
  int mismatches = 0;
  for (const auto &path : ListFiles(layout.povs_dir(), ".pov")) {
    const fs::path verdict_path = VerdictPath(path);
    std::string expected = "?";
    try {
      expected = std::string(
          FaultClassName(ParsePovManifest(ReadFile(path)).expected));
    } catch (const Error &) {
    }
    if (options.force || !fs::exists(verdict_path, ec)) {
      ReplayVerdict v = ReplayPov(path, options.executable, options.replay_timeout);
      FaultClass expect_class = FaultClass::kSegvLike;
      bool parsed = expected != "?";
      if (parsed) expect_class = ParseFaultClass(expected);
      std::string text = RenderVerdict(v, expect_class);
      if (!parsed) {
        text = "observed=" + v.Name() + "\nexpected=?\nmatch=false\n";
      }
      WriteFileAtomic(verdict_path, text);
    }
    const bool ok = VerdictConfirms(verdict_path);
    if (!ok) ++mismatches;
    log << path.filename().string() << ": expected=" << expected
        << " observed=" << VerdictObserved(verdict_path)
        << (ok ? " confirmed" : " MISMATCH") << "\n";
  }
  return mismatches == 0 ? kExitOk : kExitVerificationFailure;
}

std::string RenderCrashesOverTime(const fs::path &out) {
  const ArtifactLayout layout(out);
  const auto rows = ParseResultsCsv(ReadFile(layout.results()));
  struct Event {
    int64_t at_ns;
    std::string kernel;
    CrashRecord record;
  };
  std::vector<Event> events;
  int64_t start = 0;
  int64_t end = 0;
  for (const auto &row : rows) {
    if (row.started_unix_ns > 0 && (start == 0 || row.started_unix_ns < start)) {
      start = row.started_unix_ns;
    }
    end = std::max({end, row.ended_unix_ns,
                    LastTimingEnd(layout.timing_dir() / (row.kernel + ".csv"))});
    for (const auto &c : ReadCrashRecords(layout.crash_file(row.kernel))) {
      events.push_back({c.at_ns, row.kernel, c});
    }
  }
  std::sort(events.begin(), events.end(), [](const Event &a, const Event &b) {
    return std::tie(a.at_ns, a.kernel, a.record.uin) <
           std::tie(b.at_ns, b.kernel, b.record.uin);
  });
  if (start == 0 && !events.empty()) start = events.front().at_ns;
  std::string text = "elapsed_ns,kernel,uin,class,cumulative_crashes\n0,-,-,-,0\n";
  int64_t count = 0;
  int64_t last = 0;
  for (const auto &e : events) {
    last = std::max(last, e.at_ns - start);
    text += FormatNumber(last) + "," + e.kernel + "," +
            FormatNumber(e.record.uin.index) + "," +
            std::string(FaultClassName(e.record.fault)) + "," +
            FormatNumber(++count) + "\n";
  }
  if (end - start > last && start > 0) {
    text += FormatNumber(end - start) + ",-,-,-," + FormatNumber(count) + "\n";
  }
  return text;
}

int RunReport(const StageOptions &options, std::ostream &log) {
  const ArtifactLayout layout(options.out);
  std::error_code ec;
  if (!fs::exists(layout.results(), ec)) {
    throw OperationalError("no fuzz results in " + options.out.string());
  }
  const fs::path over_time = layout.summary_dir() / "crashes_over_time.csv";
  const fs::path table_csv = layout.summary_dir() / "category_table.csv";
  const fs::path table_txt = layout.summary_dir() / "category_table.txt";
  if (fs::exists(table_txt, ec) && !options.force) {
    log << "report already complete in " << options.out.string()
        << " (use --force to redo)\n";
    return kExitOk;
  }
  fs::create_directories(layout.summary_dir(), ec);

  const Registry registry = RegisterCorpus();
  const MutationConfig mcfg = MutationConfig::Load(layout.mutation_config());
  std::vector<ConfirmedPov> confirmed;
  int unreplayed = 0;
  for (const auto &path : ListFiles(layout.povs_dir(), ".pov")) {
    const fs::path verdict = VerdictPath(path);
    if (!fs::exists(verdict, ec)) {
      ++unreplayed;
      continue;
    }
    if (!VerdictConfirms(verdict)) continue;
    const PovManifest m = ParsePovManifest(ReadFile(path));
    confirmed.push_back({PovCategory(m, registry, mcfg), m.expected});
  }
  const CategoryTable table = CategorizePovs(confirmed);
  WriteFileAtomic(over_time, RenderCrashesOverTime(options.out));
  WriteFileAtomic(table_csv, RenderCategoryCsv(table));
  WriteFileAtomic(table_txt, RenderCategoryText(table));
  if (unreplayed > 0) {
    log << "warning: " << unreplayed << " manifest(s) not replayed yet\n";
  }
  log << RenderCategoryText(table);
  return kExitOk;
}

int RunDriver(std::string_view kernel, const fs::path &out,
              std::optional<uint64_t> kill_after_log_uin) {
  std::set_new_handler(NoMemory);
  const ArtifactLayout layout(out);
  const Registry registry = RegisterCorpus();
  const MutationConfig mcfg = MutationConfig::Load(layout.mutation_config());
  SessionState state;
  state.logs_dir = layout.logs_dir();
  state.done_dir = layout.done_dir();
  state.timing_dir = layout.timing_dir();
  state.kill_after_log_uin = kill_after_log_uin;
  RunDriverTest(registry, kernel, FuzzingInvoker(state, mcfg));
  return kExitOk;
}

int ExecUin(std::string_view kernel, uint64_t uin, const fs::path &out) {
  const ArtifactLayout layout(out);
  const Registry registry = RegisterCorpus();
  const MutationConfig mcfg = MutationConfig::Load(layout.mutation_config());
  const KernelEntry &entry = registry.Get(kernel);
  const PoolSet pools = SessionPools(entry, mcfg);
  if (uin >= CombinationCount(pools, mcfg)) {
    throw ConsistencyError("uin " + FormatNumber(uin) + " is out of range");
  }
  const ArgTuple args = NthCombination(pools, Uin{uin}, mcfg);
  try {
    InvokeKernel(entry, args);
  } catch (const std::exception &e) {
    std::cerr << "kernfuzz: kernel rejected the arguments: " << e.what() << "\n";
  }
  return kExitOk;
}

int ExecPov(const fs::path &manifest) {
  const Registry registry = RegisterCorpus();
  const PovManifest m = ParsePovManifest(ReadFile(manifest));
  const KernelEntry &entry = ResolveBinding(registry, m.binding);
  const ArgTuple args = MaterializePovArgs(m, registry);
  try {
    InvokeKernel(entry, args);
  } catch (const std::exception &e) {
    // A rejected call surfaces as an ordinary error at the binding layer.
    std::cerr << "kernfuzz: " << m.binding << " raised: " << e.what() << "\n";
  }
  return kExitOk;
}

}  // namespace kernfuzz
