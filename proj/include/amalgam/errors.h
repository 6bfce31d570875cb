// Copyright 2026 The Amalgam Authors.
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

#ifndef AMALGAM_ERRORS_H_
#define AMALGAM_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace amalgam {

// Base class for recoverable failures. Contract violations (bad arguments)
// are reported with std::invalid_argument / std::out_of_range instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// A table that parsed to zero rows. The batch skips it with a warning.
class EmptyTable : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

class BackendUnavailable : public Error {
 public:
  using Error::Error;
};

class RateLimited : public BackendUnavailable {
 public:
  using BackendUnavailable::BackendUnavailable;
};

class SnapshotFormatError : public Error {
 public:
  using Error::Error;
};

class MalformedRow : public Error {
 public:
  MalformedRow(const std::string &file, size_t line, const std::string &why)
      : Error(file + ":" + std::to_string(line) + ": " + why), line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_;
};

class DuplicatePrediction : public Error {
 public:
  using Error::Error;
};

}  // namespace amalgam

#endif  // AMALGAM_ERRORS_H_
