// Copyright 2026 The Subpiece Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstring>
#include <iostream>

#include "cli_util.h"
#include "subpiece/trainer.h"

int main(int argc, char** argv) {
  using namespace subpiece;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--help") == 0 || std::strcmp(argv[i], "-h") == 0) {
      std::cout << TrainerFlagsHelp();
      return cli::kExitOk;
    }
  }
  auto spec = ParseTrainerFlags(argc, argv);
  if (!spec.ok()) {
    std::cerr << "spm_train: " << spec.status().message() << "\n"
              << "Run spm_train --help for usage.\n";
    return cli::kExitUsage;
  }
  if (absl::Status status = Train(*spec); !status.ok()) {
    return cli::Fail("spm_train", status, cli::TrainingExitCode(status));
  }
  return cli::kExitOk;
}
