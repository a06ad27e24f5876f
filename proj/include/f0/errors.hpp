// Copyright 2026 The f0sketch Authors.
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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace f0 {

// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument is out of range; the message names the offending field.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// An operation was called on an object in a state that forbids it,
// e.g. processing a sketch that has already failed.
class UsageError : public Error {
 public:
  using Error::Error;
};

// More items were pushed than the configured stream bound allows.
class BoundExceededError : public Error {
 public:
  using Error::Error;
};

// Malformed stream input. `position` is the 1-based record or line number.
class InputFormatError : public Error {
 public:
  InputFormatError(const std::string& msg, std::uint64_t position)
      : Error(msg + " (record " + std::to_string(position) + ")"),
        position_(position) {}

  std::uint64_t position() const noexcept { return position_; }

 private:
  std::uint64_t position_;
};

// Snapshot bytes failed validation (checksum, version, ordering, framing).
class SnapshotError : public Error {
 public:
  using Error::Error;
};

// A scripted bit source ran out of bits. Always a test bug, never wrapped.
class ScriptUnderrunError : public Error {
 public:
  using Error::Error;
};

}  // namespace f0
