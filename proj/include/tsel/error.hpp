// Copyright 2026 The tsel Authors.
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

#ifndef TSEL_ERROR_HPP_
#define TSEL_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace tsel {

// Base of every error raised by the library. Messages carry file/line
// context where there is any.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Source and target sides of a parallel corpus disagree in line count.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

// Invalid UTF-8 in an input file.
class EncodingError : public Error {
 public:
  using Error::Error;
};

// Bad parameters or inconsistent inputs (duplicate corpus ids, n < 1, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Structured file (meta TSV, merge table) does not parse.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Token stream violates the subword marker conventions.
class MalformedInputError : public Error {
 public:
  using Error::Error;
};

}  // namespace tsel

#endif  // TSEL_ERROR_HPP_
