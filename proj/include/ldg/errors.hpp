// Copyright 2026 The ldgraph Authors.
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

namespace ldg {

// Root of the library's exception hierarchy. The C API maps each subclass
// onto a status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Alphabet or index-set mismatch between arguments.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Argument outside the operation's domain (non-probability input, c <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Target cannot be realised (infeasible counts, degree caps, exhausted retries).
class InfeasibleError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Enumeration or memory budget exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Malformed input text (JSON, edge lists, configs).
class ParseError : public Error {
 public:
  using Error::Error;
};

// An optimizer failed to reach its stated tolerance.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace ldg
