// Copyright 2026 The augimpact Authors.
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

#pragma once

#include <stdexcept>
#include <string>

namespace augimpact {

/// Base class for every failure raised by the library. The CLI maps any
/// Error to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed bytes: bad magic, wrong record length, unsupported layout.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that violates a precondition (shape mismatch, bad
/// parameter range, duplicate id).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A statistic is undefined for the input, e.g. a constant representation
/// has zero self-HSIC and CKA cannot be normalized.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

}  // namespace augimpact
