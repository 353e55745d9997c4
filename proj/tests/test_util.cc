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

#include "test_util.h"

#include "kernfuzz/process.h"

namespace kernfuzz::test {

int RunCli(const std::vector<std::string> &args,
           const std::filesystem::path &log) {
  ChildSpec spec;
  spec.argv.push_back(CliPath().string());
  spec.argv.insert(spec.argv.end(), args.begin(), args.end());
  spec.stdout_path = log;
  spec.stderr_path = log;
  spec.timeout = std::chrono::minutes(10);
  return RunChild(spec).exit_code;
}

}  // namespace kernfuzz::test
