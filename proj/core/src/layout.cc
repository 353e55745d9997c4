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

#include "kernfuzz/layout.h"

#include <system_error>

#include "kernfuzz/errors.h"

namespace kernfuzz {

void ArtifactLayout::CreateDirectories() const {
  for (const auto &dir : {root_, logs_dir(), done_dir(), crashes_dir(),
                          reports_dir(), povs_dir(), timing_dir(),
                          summary_dir()}) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
      throw OperationalError("cannot create " + dir.string() + ": " +
                             ec.message());
    }
  }
}

}  // namespace kernfuzz
