// Copyright 2026 The Distillens Authors.
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

#ifndef DISTILLENS_CLI_H_
#define DISTILLENS_CLI_H_

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>

namespace distillens::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsageError = 2;

// Runs one `distillens` invocation. `args` excludes the program name, e.g.
// {"metrics", "--src", "s", ...}. Usage text and diagnostics go to `err`;
// `out` only receives help output.
int Run(std::span<const std::string> args, std::ostream &out,
        std::ostream &err);

// Writes `path` through a temporary sibling file renamed into place, so
// readers never observe a partial file. Throws IoError.
void WriteFileAtomically(const std::filesystem::path &path,
                         const std::function<void(std::ostream &)> &write);

}  // namespace distillens::cli

#endif  // DISTILLENS_CLI_H_
