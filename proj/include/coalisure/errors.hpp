// Copyright 2026 The Coalisure Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COALISURE_ERRORS_HPP_
#define COALISURE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace coalisure {

// Precondition and schema violations are reported with std::invalid_argument
// (the CLI maps them to exit code 2). Everything below is a runtime failure.

class LpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyCoreError : public std::runtime_error {
 public:
  EmptyCoreError() : std::runtime_error("scenario core is empty") {}
  using std::runtime_error::runtime_error;
};

class NoRootError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace coalisure

#endif  // COALISURE_ERRORS_HPP_
