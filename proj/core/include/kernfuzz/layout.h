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

// Paths inside a campaign artifact directory.
#ifndef KERNFUZZ_LAYOUT_H_
#define KERNFUZZ_LAYOUT_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>

namespace kernfuzz {

class ArtifactLayout {
 public:
  explicit ArtifactLayout(std::filesystem::path root) : root_(std::move(root)) {}

  const std::filesystem::path &root() const { return root_; }
  std::filesystem::path binding_map() const { return root_ / "binding_map.tsv"; }
  std::filesystem::path mutation_config() const { return root_ / "mutation.cfg"; }
  std::filesystem::path results() const { return root_ / "results.csv"; }
  std::filesystem::path logs_dir() const { return root_ / "logs"; }
  std::filesystem::path done_dir() const { return logs_dir() / "done"; }
  std::filesystem::path crashes_dir() const { return root_ / "crashes"; }
  std::filesystem::path reports_dir() const { return root_ / "reports"; }
  std::filesystem::path povs_dir() const { return root_ / "povs"; }
  std::filesystem::path timing_dir() const { return root_ / "timing"; }
  std::filesystem::path summary_dir() const { return root_ / "summary"; }

  std::filesystem::path log_file(std::string_view kernel) const {
    return logs_dir() / std::string(kernel);
  }
  std::filesystem::path fault_log(std::string_view kernel) const {
    return logs_dir() / (std::string(kernel) + ".faults");
  }
  std::filesystem::path session_stderr(std::string_view kernel) const {
    return logs_dir() / (std::string(kernel) + ".stderr");
  }
  std::filesystem::path crash_file(std::string_view kernel) const {
    return crashes_dir() / (std::string(kernel) + ".crashes");
  }

  // Creates every directory above. Throws OperationalError.
  void CreateDirectories() const;

 private:
  std::filesystem::path root_;
};

}  // namespace kernfuzz

#endif  // KERNFUZZ_LAYOUT_H_
