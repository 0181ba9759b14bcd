// Copyright 2026 The Relgraph Authors.
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

#ifndef RELGRAPH_ERRORS_H_
#define RELGRAPH_ERRORS_H_

#include <stdexcept>
#include <string>

namespace relgraph {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input. The message carries the location (line, byte offset,
// record ordinal or JSON path) where parsing stopped.
class ParseError : public Error {
 public:
  using Error::Error;
};

// An index (category, predicate, k, ...) outside its valid range.
class BoundsError : public Error {
 public:
  using Error::Error;
};

// A key that is not present in a table or store.
class LookupError : public Error {
 public:
  using Error::Error;
};

class OutOfVocabularyError : public LookupError {
 public:
  explicit OutOfVocabularyError(const std::string& word)
      : LookupError("out-of-vocabulary word: '" + word + "'"), word_(word) {}
  const std::string& word() const { return word_; }

 private:
  std::string word_;
};

// Vector or matrix dimensions that do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Invalid arguments that are not covered by a more specific error.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Training produced a non-finite loss or was given unusable data.
class TrainingError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace relgraph

#endif  // RELGRAPH_ERRORS_H_
