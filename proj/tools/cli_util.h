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

// Shared pieces of the spm_* command line tools.

#ifndef SUBPIECE_TOOLS_CLI_UTIL_H_
#define SUBPIECE_TOOLS_CLI_UTIL_H_

#include <iostream>
#include <string>

#include "absl/status/status.h"

namespace subpiece {
namespace cli {

// Process exit codes, documented in README.md.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitIo = 3,
  kExitModel = 4,
  kExitTraining = 5,
  kExitInput = 6,
};

inline bool IsIoError(const absl::Status& status) {
  return absl::IsNotFound(status) || absl::IsPermissionDenied(status);
}

// Exit code for a failure while loading a model file.
inline int ModelLoadExitCode(const absl::Status& status) {
  if (IsIoError(status)) return kExitIo;
  return kExitModel;
}

// Exit code for a failure of Train().
inline int TrainingExitCode(const absl::Status& status) {
  if (IsIoError(status)) return kExitIo;
  if (absl::IsInternal(status) || absl::IsUnknown(status)) return kExitInternal;
  return kExitTraining;
}

inline int Fail(const char* tool, const absl::Status& status, int code) {
  std::cerr << tool << ": " << status.ToString() << "\n";
  return code;
}

}  // namespace cli
}  // namespace subpiece

#endif  // SUBPIECE_TOOLS_CLI_UTIL_H_
