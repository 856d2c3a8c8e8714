// include/accentsim/error.h

// Copyright 2026  Accentsim Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ACCENTSIM_ERROR_H_
#define ACCENTSIM_ERROR_H_

#include <stdexcept>
#include <string>

namespace accentsim {

// Base of the project error taxonomy. Every malformed input or violated
// precondition maps to one of the subclasses below, never to a crash.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

// Underlying stream/file read or write failed.
class IoError : public Error {
 public:
  explicit IoError(const std::string &msg) : Error(msg) {}
};

// Unknown magic tag or unsupported artifact version.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string &msg) : Error(msg) {}
};

// Text input that does not tokenize as declared (non-integer token etc.).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string &msg) : Error(msg) {}
};

// Stream ended before the declared payload was complete.
class TruncationError : public Error {
 public:
  explicit TruncationError(const std::string &msg) : Error(msg) {}
};

// Well-formed input whose content violates a type invariant.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string &msg) : Error(msg) {}
};

// Not enough data to carry out the operation (fewer frames than clusters,
// fewer than two samples for a correlation, missing stress class...).
class InsufficientDataError : public Error {
 public:
  explicit InsufficientDataError(const std::string &msg) : Error(msg) {}
};

// Input is structurally fine but degenerate for the requested statistic
// (zero variance, empty voiced-pair set across all references).
class DegenerateInputError : public Error {
 public:
  explicit DegenerateInputError(const std::string &msg) : Error(msg) {}
};

// Two phoneme alignments do not share the same label sequence.
class LabelMismatchError : public Error {
 public:
  explicit LabelMismatchError(const std::string &msg) : Error(msg) {}
};

// Training loss became non-finite.
class TrainingDivergedError : public Error {
 public:
  explicit TrainingDivergedError(const std::string &msg) : Error(msg) {}
};

}  // namespace accentsim

#endif  // ACCENTSIM_ERROR_H_
