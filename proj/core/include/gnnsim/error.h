// Copyright 2026 The gnnsim Authors
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

#ifndef GNNSIM_ERROR_H_
#define GNNSIM_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gnnsim {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters, infeasible configurations, mismatched inputs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed text input. line() is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A value does not fit the representable id space.
class RangeError : public Error {
 public:
  using Error::Error;
};

// An index refers outside a container.
class IndexError : public Error {
 public:
  using Error::Error;
};

// Argument outside a function's mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// The statistical model cannot be built for the input (e.g. edgeless graph).
class ModelError : public Error {
 public:
  using Error::Error;
};

// A request exceeds a fixed buffer capacity.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// A captured replay graph no longer matches the arena or envelope it was
// captured against.
class ReplayInvalidationError : public Error {
 public:
  using Error::Error;
};

// Internal contract violated by the caller (e.g. under-provisioned replay).
class LogicError : public Error {
 public:
  using Error::Error;
};

}  // namespace gnnsim

#endif  // GNNSIM_ERROR_H_
