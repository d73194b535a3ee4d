// Copyright 2026 The missbandit Authors.
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

#ifndef MISSBANDIT_ERRORS_H_
#define MISSBANDIT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace missbandit {

// Base of every error the library raises. The CLI maps all of them to exit
// code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument outside the mathematical domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid or inconsistent configuration (schema violations, bad presets).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A correlation target that no loading can reach.
class CalibrationError : public Error {
 public:
  CalibrationError(const std::string& what, double supremum)
      : Error(what), supremum_(supremum) {}
  double supremum() const { return supremum_; }

 private:
  double supremum_;
};

// An estimator evaluated on a state where it is not defined.
class UndefinedEstimatorError : public Error {
 public:
  using Error::Error;
};

// A caller broke a documented precondition (e.g. q-hat below its floor).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace missbandit

#endif  // MISSBANDIT_ERRORS_H_
