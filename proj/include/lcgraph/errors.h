// Copyright 2026 The lcgraph Authors
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

#ifndef LCGRAPH_ERRORS_H_
#define LCGRAPH_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lcgraph {

// Malformed or inconsistent input data (files, records, matrices).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A matrix does not fit into the requested graph capacity.
class TruncationError : public DataError {
 public:
  using DataError::DataError;
};

// A description clause could not be parsed. `offset`/`length` locate the
// offending span in the original text.
class ParseError : public DataError {
 public:
  ParseError(const std::string& message, std::size_t offset,
             std::size_t length)
      : DataError(message), offset_(offset), length_(length) {}

  std::size_t offset() const { return offset_; }
  std::size_t length() const { return length_; }

 private:
  std::size_t offset_;
  std::size_t length_;
};

// The same property was given twice with different values.
class ConflictError : public DataError {
 public:
  using DataError::DataError;
};

// Tensor shapes do not line up.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// NaN or infinity encountered during training.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lcgraph

#endif  // LCGRAPH_ERRORS_H_
