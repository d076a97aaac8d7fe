// Copyright 2026 The cobound Authors.
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

#ifndef COBOUND_ERROR_HPP
#define COBOUND_ERROR_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cobound {

/// A documented precondition of an operation was violated by the caller.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The request would exceed a hard resource guard (enumeration size, sum length).
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A user-supplied evaluator failed while walking an orbit.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(std::int64_t orbit_index, const std::string& what)
      : std::runtime_error("evaluator failed at orbit index " +
                           std::to_string(orbit_index) + ": " + what),
        orbit_index_(orbit_index) {}

  std::int64_t orbit_index() const noexcept { return orbit_index_; }

 private:
  std::int64_t orbit_index_;
};

/// Numerical procedure did not reach its requested accuracy.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw PreconditionError(message);
}

}  // namespace cobound

#endif  // COBOUND_ERROR_HPP
