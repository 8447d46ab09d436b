// Copyright 2026 The Authors.
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

#include <stdexcept>
#include <string>

namespace quantsel {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A Gram matrix is rank deficient or its condition number exceeds the
// zero-forcing threshold.
class IllConditionedError : public Error {
 public:
  using Error::Error;
};

// A requested extremum does not exist (the objective is monotone).
class UnboundedError : public Error {
 public:
  using Error::Error;
};

// A combinatorial enumeration would exceed the configured budget.
class BudgetExceededError : public Error {
 public:
  using Error::Error;
};

// An iterative numerical routine failed to converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A configuration file or override is malformed or inconsistent.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace quantsel
