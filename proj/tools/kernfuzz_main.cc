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

// kernfuzz: fuzz the kernel corpus, synthesize and replay PoVs, summarize.
//
//   kernfuzz fuzz --all --seed 1 --out run1
//   kernfuzz synthesize --out run1
//   kernfuzz replay --out run1
//   kernfuzz report --out run1

#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kernfuzz/errors.h"
#include "kernfuzz/exit_codes.h"
#include "kernfuzz/pipeline.h"
#include "kernfuzz/process.h"

namespace {

std::chrono::nanoseconds Seconds(double s) {
  return std::chrono::nanoseconds(static_cast<int64_t>(std::llround(s * 1e9)));
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Type-aware fuzzer for a corpus of tensor kernels"};
  app.require_subcommand(1);

  kernfuzz::FuzzOptions fuzz;
  double timeout_s = 60;
  int64_t kernels = 0;
  uint64_t memory_mb = 1024;
  std::string config_path;
  auto *fuzz_cmd = app.add_subcommand("fuzz", "Run a fuzzing campaign");
  fuzz_cmd->add_option("--out", fuzz.out, "Artifact directory")->required();
  fuzz_cmd->add_option("--seed", fuzz.seed, "Mutation and visitation seed")
      ->capture_default_str();
  fuzz_cmd->add_option("--timeout", timeout_s, "Seconds per kernel session")
      ->capture_default_str();
  auto *kernels_opt = fuzz_cmd->add_option(
      "--kernels", kernels, "Fuzz the first K targets in visitation order");
  auto *all_flag = fuzz_cmd->add_flag("--all", fuzz.all, "Fuzz every target");
  kernels_opt->excludes(all_flag);
  fuzz_cmd->add_option("--only", fuzz.only, "Restrict to these kernels")
      ->delimiter(',');
  fuzz_cmd->add_option("--jobs", fuzz.jobs, "Concurrent sessions")
      ->capture_default_str();
  fuzz_cmd->add_option("--memory-mb", memory_mb, "Address-space cap per session")
      ->capture_default_str();
  fuzz_cmd->add_option("--max-reruns", fuzz.max_reruns,
                       "Restart bound per session")
      ->capture_default_str();
  fuzz_cmd->add_option("--config", config_path, "Mutation config file")
      ->check(CLI::ExistingFile);
  fuzz_cmd->add_flag("--normalize-timestamps", fuzz.normalize_timestamps,
                     "Write zero for every wall-clock timestamp");
  fuzz_cmd->add_flag("--force", fuzz.force, "Redo a completed stage");

  kernfuzz::StageOptions stage;
  double replay_timeout_s = 30;
  auto add_stage = [&](const char *name, const char *help) {
    auto *cmd = app.add_subcommand(name, help);
    cmd->add_option("--out", stage.out, "Artifact directory")->required();
    cmd->add_flag("--force", stage.force, "Redo a completed stage");
    return cmd;
  };
  auto *synth_cmd = add_stage("synthesize", "Write PoV manifests from crash reports");
  auto *replay_cmd = add_stage("replay", "Replay PoV manifests and record verdicts");
  replay_cmd->add_option("--timeout", replay_timeout_s, "Seconds per replay")
      ->capture_default_str();
  auto *report_cmd = add_stage("report", "Write the crash curve and category table");

  std::string kernel;
  std::string out_dir;
  std::optional<uint64_t> kill_after;
  auto *driver_cmd = app.add_subcommand("__driver", "");
  driver_cmd->group("");
  driver_cmd->add_option("--kernel", kernel)->required();
  driver_cmd->add_option("--out", out_dir)->required();
  driver_cmd->add_option("--kill-after-uin", kill_after);

  uint64_t uin = 0;
  auto *exec_uin_cmd = app.add_subcommand("__exec-uin", "");
  exec_uin_cmd->group("");
  exec_uin_cmd->add_option("--kernel", kernel)->required();
  exec_uin_cmd->add_option("--uin", uin)->required();
  exec_uin_cmd->add_option("--out", out_dir)->required();

  std::string manifest;
  auto *exec_pov_cmd = app.add_subcommand("__exec-pov", "");
  exec_pov_cmd->group("");
  exec_pov_cmd->add_option("manifest", manifest)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kernfuzz::kExitUsage;
  }

  try {
    if (*fuzz_cmd) {
      if (kernels_opt->count() > 0) fuzz.kernels = kernels;
      if (!(timeout_s > 0)) throw kernfuzz::UsageError("--timeout must be positive");
      fuzz.timeout = Seconds(timeout_s);
      fuzz.memory_cap_bytes = memory_mb << 20;
      if (!config_path.empty()) fuzz.mutation_config = config_path;
      fuzz.executable = kernfuzz::SelfExecutable();
      return kernfuzz::RunFuzz(fuzz, std::cout);
    }
    stage.executable = kernfuzz::SelfExecutable();
    stage.replay_timeout = Seconds(replay_timeout_s);
    if (*synth_cmd) return kernfuzz::RunSynthesize(stage, std::cout);
    if (*replay_cmd) return kernfuzz::RunReplay(stage, std::cout);
    if (*report_cmd) return kernfuzz::RunReport(stage, std::cout);
    if (*driver_cmd) return kernfuzz::RunDriver(kernel, out_dir, kill_after);
    if (*exec_uin_cmd) return kernfuzz::ExecUin(kernel, uin, out_dir);
    if (*exec_pov_cmd) return kernfuzz::ExecPov(manifest);
  } catch (const kernfuzz::UsageError &e) {
    std::cerr << "kernfuzz: " << e.what() << "\n";
    return kernfuzz::kExitUsage;
  } catch (const std::exception &e) {
    std::cerr << "kernfuzz: " << e.what() << "\n";
    return kernfuzz::kExitOperational;
  }
  return kernfuzz::kExitUsage;
}
