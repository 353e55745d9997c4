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

// Campaign-level acceptance checks against the seeded corpus. Prints one
// PASS/FAIL line per criterion; exits nonzero if any fails.
//
//   acceptance [--work DIR] [--only NAME]

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kernfuzz/crash_report.h"
#include "kernfuzz/errors.h"
#include "kernfuzz/fault.h"
#include "kernfuzz/harness.h"
#include "kernfuzz/kernel_corpus.h"
#include "kernfuzz/layout.h"
#include "kernfuzz/mutation.h"
#include "kernfuzz/pov.h"
#include "kernfuzz/process.h"
#include "kernfuzz/text.h"
#include "kernfuzz/watchdog.h"

namespace kernfuzz {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

const std::set<std::string> kBugNamed = {"strided_write", "insert_dim",
                                         "delete_handle", "mean_pool",
                                         "gather",        "normalize"};
const std::set<std::string> kSafe = {"add", "concat", "reshape", "scale"};
const std::vector<std::string> kExcluded = {"counter_update", "add_out",
                                            "add_alias"};
constexpr int kRecallSeeds = 5;
constexpr int kKillTrials = 120;

struct Check {
  bool ok = true;
  std::ostringstream why;

  void Fail(const std::string &msg) {
    if (!ok) why << "; ";
    ok = false;
    why << msg;
  }
};

fs::path g_work;

int Cli(const std::vector<std::string> &args,
        const fs::path &log = "/dev/null") {
  ChildSpec spec;
  spec.argv = {KERNFUZZ_CLI_PATH};
  spec.argv.insert(spec.argv.end(), args.begin(), args.end());
  spec.stdout_path = log;
  spec.stderr_path = log;
  spec.timeout = std::chrono::minutes(30);
  return RunChild(spec).exit_code;
}

fs::path RecallDir(int seed) { return g_work / ("recall_" + std::to_string(seed)); }

std::map<std::string, ResultRow> Results(const fs::path &out) {
  std::map<std::string, ResultRow> rows;
  for (const auto &r : ParseResultsCsv(ReadFile(ArtifactLayout(out).results()))) {
    rows[r.kernel] = r;
  }
  return rows;
}

std::vector<fs::path> Files(const fs::path &dir, std::string_view ext) {
  std::vector<fs::path> out;
  if (!fs::exists(dir)) return out;
  for (const auto &e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ext) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Recall: every buggy kernel crashes and every safe one completes cleanly,
// for seeds 1..5 with default settings.
void SeededBugRecall(Check &c) {
  const auto start = Clock::now();
  for (int seed = 1; seed <= kRecallSeeds; ++seed) {
    const fs::path out = RecallDir(seed);
    fs::remove_all(out);
    const int code =
        Cli({"fuzz", "--all", "--seed", std::to_string(seed), "--out", out.string()});
    if (code != 0) {
      c.Fail("seed " + std::to_string(seed) + ": fuzz exited " + std::to_string(code));
      continue;
    }
    const auto rows = Results(out);
    std::set<std::string> buggy = kBugNamed;
    buggy.insert("gather_internal");
    for (const auto &k : buggy) {
      auto it = rows.find(k);
      if (it == rows.end() || it->second.status != SessionStatus::kCrashed) {
        c.Fail("seed " + std::to_string(seed) + ": " + k + " not Crashed");
      }
    }
    for (const auto &k : kSafe) {
      auto it = rows.find(k);
      if (it == rows.end() || it->second.status != SessionStatus::kCompleted ||
          it->second.crash_count != 0) {
        c.Fail("seed " + std::to_string(seed) + ": " + k +
               " not Completed with zero crashes");
      }
    }
    if (rows.size() != buggy.size() + kSafe.size()) {
      c.Fail("seed " + std::to_string(seed) + ": " + std::to_string(rows.size()) +
             " outcomes");
    }
  }
  const auto elapsed = Clock::now() - start;
  if (elapsed > std::chrono::minutes(10) * kRecallSeeds) {
    c.Fail("campaigns exceeded 10 min each on average");
  }
  c.why << (c.ok ? "" : "; ")
        << "5 campaigns in "
        << std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count()
        << " ms";
}

// Fidelity: each recorded crash UIN, executed alone, gives the same class.
void UinFidelity(Check &c) {
  int64_t total = 0;
  int64_t mismatches = 0;
  for (int seed = 1; seed <= kRecallSeeds; ++seed) {
    const ArtifactLayout layout(RecallDir(seed));
    for (const fs::path &file : Files(layout.crashes_dir(), ".crashes")) {
      const std::string kernel = file.stem().string();
      for (const CrashRecord &rec : ReadCrashRecords(file)) {
        ++total;
        const int code = Cli({"__exec-uin", "--kernel", kernel, "--uin",
                              std::to_string(rec.uin.index), "--out",
                              layout.root().string()});
        if (code != ExitCodeFor(rec.fault)) {
          if (++mismatches <= 5) {
            c.Fail(kernel + " uin " + std::to_string(rec.uin.index) + " exited " +
                   std::to_string(code));
          }
        }
      }
    }
  }
  if (total == 0) c.Fail("no crash records to check");
  if (mismatches > 0) c.Fail(std::to_string(mismatches) + " mismatches");
  c.why << (c.ok ? "" : "; ") << total << " crashes re-executed";
}

// Durability: SIGKILL right after a UIN is logged, before the kernel runs,
// leaves a parseable log naming that UIN.
void CrashLogDurability(Check &c) {
  const Registry registry = RegisterCorpus();
  const MutationConfig mcfg;
  std::vector<std::string> targets;
  for (const auto &sig : ExtractTargets(registry)) targets.push_back(sig.name);
  std::mt19937_64 rng(20260101);
  int passed = 0;
  for (int trial = 0; trial < kKillTrials; ++trial) {
    const std::string kernel = targets[rng() % targets.size()];
    const PoolSet ps = SessionPools(registry.Get(kernel), mcfg);
    const uint64_t count = CombinationCount(ps, mcfg);
    const uint64_t target = rng() % count;
    const fs::path out = g_work / "kill" / std::to_string(trial);
    fs::remove_all(out);
    const ArtifactLayout layout(out);
    layout.CreateDirectories();
    WriteFileAtomic(layout.mutation_config(), mcfg.Serialize());
    // Start somewhere up to 50 combinations before the target.
    if (target > 0) {
      const uint64_t back = 1 + rng() % std::min<uint64_t>(50, target);
      WriteFileAtomic(layout.log_file(kernel),
                      RenderMutationLog({kernel, mcfg.rng_seed, mcfg.Fingerprint(),
                                         Uin{target - back}}));
    }
    int code = -1;
    for (int run = 0; run < 100; ++run) {
      code = Cli({"__driver", "--kernel", kernel, "--out", out.string(),
                  "--kill-after-uin", std::to_string(target)});
      if (ClassifyExit(code).kind != ExitKind::kFault) break;
    }
    std::string detail;
    if (code != 137) {
      detail = "exit " + std::to_string(code);
    } else {
      try {
        const MutationLogRecord rec = ReadMutationLog(layout.log_file(kernel));
        if (rec.uin.index != target || rec.kernel != kernel) {
          detail = "log names uin " + std::to_string(rec.uin.index);
        }
      } catch (const Error &e) {
        detail = e.what();
      }
    }
    if (detail.empty()) {
      ++passed;
    } else {
      c.Fail(kernel + " uin " + std::to_string(target) + ": " + detail);
    }
    fs::remove_all(out);
  }
  c.why << (c.ok ? "" : "; ") << passed << "/" << kKillTrials << " trials";
}

// Synthesis: manifests for exactly the bound crashers, NoBinding for the
// unbound one, under 3 s.
void PovSynthesis(Check &c) {
  const fs::path out = RecallDir(1);
  const auto start = Clock::now();
  const int code = Cli({"synthesize", "--out", out.string(), "--force"});
  const auto elapsed = Clock::now() - start;
  if (code != 0) c.Fail("synthesize exited " + std::to_string(code));
  std::set<std::string> kernels;
  for (const fs::path &p : Files(ArtifactLayout(out).povs_dir(), ".pov")) {
    kernels.insert(ParsePovManifest(ReadFile(p)).kernel);
  }
  if (kernels != kBugNamed) {
    std::string got;
    for (const auto &k : kernels) got += k + " ";
    c.Fail("manifests for: " + got);
  }
  const std::string log = ReadFile(ArtifactLayout(out).povs_dir() / "synthesis.log");
  if (log.find("NoBinding gather_internal:") == std::string::npos) {
    c.Fail("gather_internal did not yield NoBinding");
  }
  if (elapsed >= std::chrono::seconds(3)) c.Fail("synthesis took >= 3 s");
  c.why << (c.ok ? "" : "; ")
        << std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count()
        << " ms";
}

// Replay: every manifest confirms; the cross-tab has all three columns.
void ReplayConfirmation(Check &c) {
  const fs::path out = RecallDir(1);
  const ArtifactLayout layout(out);
  const int code = Cli({"replay", "--out", out.string(), "--force"});
  if (code != 0) c.Fail("replay exited " + std::to_string(code));
  const auto povs = Files(layout.povs_dir(), ".pov");
  int confirmed = 0;
  for (const fs::path &p : povs) {
    fs::path verdict = p;
    verdict.replace_extension(".verdict");
    if (fs::exists(verdict) &&
        ReadFile(verdict).find("match=true") != std::string::npos) {
      ++confirmed;
    } else {
      c.Fail(p.filename().string() + " not confirmed");
    }
  }
  if (povs.empty()) c.Fail("no manifests");
  if (Cli({"report", "--out", out.string(), "--force"}) != 0) {
    c.Fail("report failed");
  }
  const std::string csv = ReadFile(layout.summary_dir() / "category_table.csv");
  std::string total_row;
  for (auto line : Split(csv, '\n')) {
    if (StartsWith(line, "total,")) total_row = std::string(line);
  }
  const auto f = Split(total_row, ',');
  if (f.size() != 5) {
    c.Fail("no total row");
  } else {
    for (size_t i = 1; i <= 3; ++i) {
      if (ParseNumber<int64_t>(f[i], "count") == 0) {
        c.Fail("empty fault column " + std::to_string(i));
      }
    }
  }
  c.why << (c.ok ? "" : "; ") << confirmed << "/" << povs.size()
        << " confirmed, totals " << total_row;
}

// Determinism: identical campaigns give byte-identical artifacts.
void Determinism(Check &c) {
  std::vector<fs::path> outs;
  for (const char *name : {"det_a", "det_b"}) {
    const fs::path out = g_work / name;
    fs::remove_all(out);
    const std::string o = out.string();
    if (Cli({"fuzz", "--all", "--seed", "7", "--jobs", "1",
             "--normalize-timestamps", "--out", o}) != 0 ||
        Cli({"synthesize", "--out", o}) != 0 || Cli({"replay", "--out", o}) != 0 ||
        Cli({"report", "--out", o}) != 0) {
      c.Fail(std::string(name) + ": pipeline failed");
      return;
    }
    outs.push_back(out);
  }
  const ArtifactLayout a(outs[0]);
  const ArtifactLayout b(outs[1]);
  std::vector<std::pair<fs::path, fs::path>> pairs = {
      {a.results(), b.results()},
      {a.summary_dir() / "category_table.csv", b.summary_dir() / "category_table.csv"},
      {a.summary_dir() / "category_table.txt", b.summary_dir() / "category_table.txt"}};
  const auto ca = Files(a.crashes_dir(), ".crashes");
  const auto cb = Files(b.crashes_dir(), ".crashes");
  if (ca.size() != cb.size() || ca.empty()) c.Fail("crash file sets differ");
  for (size_t i = 0; i < std::min(ca.size(), cb.size()); ++i) {
    pairs.emplace_back(ca[i], cb[i]);
  }
  for (const auto &[x, y] : pairs) {
    if (x.filename() != y.filename() || ReadFile(x) != ReadFile(y)) {
      c.Fail(x.filename().string() + " differs");
    }
  }
  c.why << (c.ok ? "" : "; ") << pairs.size() << " files compared";
}

// Exclusion: no excluded kernel is named in any artifact of any run.
void ExclusionRules(Check &c) {
  int64_t files = 0;
  for (const auto &e : fs::recursive_directory_iterator(g_work)) {
    if (!e.is_regular_file()) continue;
    ++files;
    const std::string path = e.path().string();
    const std::string text = ReadFile(e.path());
    for (const auto &name : kExcluded) {
      if (path.find(name) != std::string::npos ||
          text.find(name) != std::string::npos) {
        c.Fail(name + " in " + path);
      }
    }
  }
  c.why << (c.ok ? "" : "; ") << files << " files scanned";
}

int RunTupleInChild(const KernelEntry &entry, const ArgTuple &args) {
  const pid_t pid = ::fork();
  if (pid == 0) {
    try {
      InvokeKernel(entry, args);
    } catch (const std::exception &) {
    }
    std::_Exit(0);
  }
  int status = 0;
  ::waitpid(pid, &status, 0);
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return 128 + WTERMSIG(status);
}

std::string TupleKey(const ArgTuple &args) {
  std::string key;
  for (const Value &v : args) key += RenderArgLine(v) + "\n";
  return key;
}

// Oracle equivalence: brute-force odometer enumeration over the reduced
// product finds the same crashing tuples as the campaign.
void OracleEquivalence(Check &c) {
  MutationConfig mcfg;
  mcfg.int_extremes.resize(3);
  mcfg.float_extremes.resize(3);
  mcfg.dim_samples_per_arg = 1;
  const fs::path out = g_work / "oracle";
  fs::remove_all(out);
  fs::create_directories(out);
  const fs::path cfg_path = out / "reduced.cfg";
  WriteFileAtomic(cfg_path, mcfg.Serialize());
  const fs::path campaign = out / "campaign";
  if (Cli({"fuzz", "--all", "--seed", "1", "--config", cfg_path.string(), "--out",
           campaign.string()}) != 0) {
    c.Fail("campaign failed");
    return;
  }
  const ArtifactLayout layout(campaign);
  const Registry registry = RegisterCorpus();
  int64_t tuples = 0;
  int64_t crashers = 0;
  for (const auto &sig : ExtractTargets(registry)) {
    const KernelEntry &entry = registry.Get(sig.name);
    const PoolSet ps = SessionPools(entry, mcfg);

    std::map<std::string, int> oracle;
    std::vector<size_t> digits(ps.pools.size(), 0);
    while (true) {
      ArgTuple args;
      for (size_t p = 0; p < digits.size(); ++p) {
        args.push_back(ps.pools[p].candidates[digits[p]].value);
      }
      ++tuples;
      const int code = RunTupleInChild(entry, args);
      if (code != 0) oracle[TupleKey(args)] = code;
      size_t p = 0;
      while (p < digits.size() && ++digits[p] == ps.pools[p].size()) {
        digits[p++] = 0;
      }
      if (p == digits.size()) break;
    }

    std::map<std::string, int> fuzzer;
    for (const CrashRecord &rec : ReadCrashRecords(layout.crash_file(sig.name))) {
      fuzzer[TupleKey(NthCombination(ps, rec.uin, mcfg))] = ExitCodeFor(rec.fault);
    }
    crashers += static_cast<int64_t>(oracle.size());
    if (oracle != fuzzer) {
      c.Fail(sig.name + ": oracle " + std::to_string(oracle.size()) +
             " crashers, fuzzer " + std::to_string(fuzzer.size()));
    }
  }
  c.why << (c.ok ? "" : "; ") << tuples << " tuples, " << crashers
        << " crashing";
}

}  // namespace
}  // namespace kernfuzz

int main(int argc, char **argv) {
  using namespace kernfuzz;
  std::string only;
  g_work = fs::temp_directory_path() / ("kernfuzz_acceptance_" +
                                        std::to_string(::getpid()));
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--work") {
      g_work = argv[i + 1];
    } else if (flag == "--only") {
      only = argv[i + 1];
    } else {
      std::cerr << "usage: acceptance [--work DIR] [--only NAME]\n";
      return 2;
    }
  }
  fs::remove_all(g_work);
  fs::create_directories(g_work);

  // Later checks read the recall campaigns, so the order matters.
  const std::vector<std::pair<std::string, std::function<void(Check &)>>> checks = {
      {"seeded_bug_recall", SeededBugRecall},
      {"uin_reconstruction_fidelity", UinFidelity},
      {"crash_log_durability", CrashLogDurability},
      {"pov_synthesis", PovSynthesis},
      {"replay_confirmation", ReplayConfirmation},
      {"determinism", Determinism},
      {"mutation_pool_oracle_equivalence", OracleEquivalence},
      {"exclusion_rules", ExclusionRules},
  };
  int failed = 0;
  for (const auto &[name, fn] : checks) {
    if (!only.empty() && name != only && name != "seeded_bug_recall") continue;
    Check c;
    try {
      fn(c);
    } catch (const std::exception &e) {
      c.Fail(std::string("exception: ") + e.what());
    }
    std::cout << (c.ok ? "PASS " : "FAIL ") << name << " (" << c.why.str() << ")"
              << std::endl;
    if (!c.ok) ++failed;
  }
  std::error_code ec;
  fs::remove_all(g_work, ec);
  return failed == 0 ? 0 : 1;
}
