// Copyright 2026 The ForgeSpark Authors
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

#ifndef FORGESPARK_SESSION_APPLY_HPP_
#define FORGESPARK_SESSION_APPLY_HPP_

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace forgespark::session {

// A new `<directory>/<name>.ml`; directory is relative to the project root.
struct NewFile {
  std::string directory;
  std::string name;
};

// An existing project source, relative to the project root.
struct ExistingFile {
  std::string path;
};

using ApplyDestination = std::variant<NewFile, ExistingFile>;

class ApplyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ApplyResult {
  std::filesystem::path written;
  std::vector<std::string> added;              // declarations written, final names
  std::map<std::string, std::string> renamed;  // incoming name -> written name
};

bool is_identifier(const std::string& name);

// Writes `test_codes` (each a test plus the helpers it needs) into the
// destination: renamed on collision, identical helpers kept once. The whole
// project must typecheck afterwards; otherwise the destination is restored
// byte for byte and ApplyError is thrown.
ApplyResult apply_to_suite(const std::filesystem::path& project_root, const std::vector<std::string>& test_codes,
                           const ApplyDestination& destination);

}  // namespace forgespark::session

#endif  // FORGESPARK_SESSION_APPLY_HPP_
