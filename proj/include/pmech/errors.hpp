// Copyright 2026 The pmech Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace pmech {

/// Input does not satisfy a documented invariant (bad pmf, bad assignment).
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Leakage budget outside [0, I(X;Y)).
class OutOfRangeError : public std::out_of_range {
 public:
  explicit OutOfRangeError(const std::string& what) : std::out_of_range(what) {}
};

/// A size cap was exceeded (vertex enumeration, oracle search, codebook keys).
class SizeError : public std::length_error {
 public:
  explicit SizeError(const std::string& what) : std::length_error(what) {}
};

/// Scenario generator cannot satisfy its hypothesis with the given sizes.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// Numerical solver failure (infeasible LP, witness residual too large).
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Mechanism was not induced from the joint it is audited against.
class ProvenanceError : public std::runtime_error {
 public:
  explicit ProvenanceError(const std::string& what) : std::runtime_error(what) {}
};

/// A dominance ordering or contract check failed.
class AssertionFailure : public std::runtime_error {
 public:
  explicit AssertionFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pmech
