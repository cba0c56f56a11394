// Copyright 2026 The prophet-sharp Authors
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

#ifndef PROPHET_ERRORS_HPP_
#define PROPHET_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace prophet {

// Precondition violations (bad sizes, probabilities out of range, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical solver stopped without reaching the requested accuracy.
// best_gap() is the smallest certificate gap seen before giving up.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double best_gap)
      : std::runtime_error(what), best_gap_(best_gap) {}

  double best_gap() const { return best_gap_; }

 private:
  double best_gap_;
};

// Reading or writing a file failed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace prophet

#endif  // PROPHET_ERRORS_HPP_
