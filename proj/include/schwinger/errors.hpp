// Copyright 2026 The schwinger-open Authors
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

namespace schwinger {

/// Argument outside the mathematical domain of an operation (e.g. N = 0).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Physical or numerical parameter rejected by validation (T <= 0, dt <= 0, ...).
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// Operands live on different bases or have mismatched dimensions.
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

/// An internal invariant was violated (non-closed symmetry orbit, broken Gauss law).
class ConsistencyError : public std::logic_error {
 public:
  explicit ConsistencyError(const std::string& what) : std::logic_error(what) {}
};

/// A numerical diagnostic exceeded its bound during a run (trace drift, ...).
class NumericalCheckError : public std::runtime_error {
 public:
  explicit NumericalCheckError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace schwinger
