// Copyright 2026 The cotlag Authors.
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

namespace cotlag {

/// Base class of every exception thrown by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument: weight 0, color clash, out-of-range block, cap exceeded.
class invalid_argument : public error {
 public:
  using error::error;
};

/// Operands whose (dim, blocks) layouts do not agree.
class shape_error : public invalid_argument {
 public:
  using invalid_argument::invalid_argument;
};

/// A fixed-point iteration failed to reach its tolerance.
class convergence_error : public error {
 public:
  using error::error;
};

/// An exact check the caller relied on did not hold (SGS, antisymmetry,
/// product precondition, solvability of a linear system).
class verification_error : public error {
 public:
  using error::error;
};

}  // namespace cotlag
