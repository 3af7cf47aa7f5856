//
// Copyright 2026 The curvmix Authors
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
//

#ifndef CURVMIX_ERRORS_H_
#define CURVMIX_ERRORS_H_

#include <stdexcept>
#include <string>

namespace curvmix {

// Base class for every error raised by the library. The CLI maps the
// concrete subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const { return 1; }
};

// Bad argument values or shapes (exit code 2).
class ArgumentError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 2; }
};

// A numerical procedure could not produce a valid result (exit code 3).
class NumericalError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 3; }
};

// A Cholesky factorization failed or hit a pivot below the safeguard.
class NotPositiveDefiniteError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Reading or writing a file failed (exit code 4).
class IoError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 4; }
};

// Throws ArgumentError with `message` unless `condition` holds.
void Require(bool condition, const std::string& message);

}  // namespace curvmix

#endif  // CURVMIX_ERRORS_H_
