// Copyright 2026 The Sg2 Authors
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

#ifndef SG2_ERRORS_HPP
#define SG2_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sg2 {

/// Input violates a documented precondition or invariant. Maps to exit code 2.
class ValidationError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// File could not be read, written, or decoded. Maps to exit code 3.
class IoError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A numerical procedure failed (normalization by zero, fit divergence). Maps to exit code 4.
class NumericalError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace sg2

#endif  // SG2_ERRORS_HPP
