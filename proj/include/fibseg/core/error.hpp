// Copyright 2026 The fibseg authors
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

#ifndef FIBSEG_CORE_ERROR_HPP
#define FIBSEG_CORE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace fibseg::core {

/// Bad user input: unknown flags, missing files, malformed configs or
/// manifests.  The CLI maps this to exit code 2.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

/// Failure while doing otherwise-valid work: I/O errors mid-run, shape
/// mismatches between stages, numeric preconditions violated by data.
/// The CLI maps this to exit code 1.
class RuntimeFailure : public std::runtime_error {
 public:
  explicit RuntimeFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fibseg::core

#endif  // FIBSEG_CORE_ERROR_HPP
