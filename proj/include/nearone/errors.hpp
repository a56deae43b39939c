// Copyright 2026 The nearone Authors
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

#ifndef NEARONE_ERRORS_HPP
#define NEARONE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nearone {

// Input outside the mathematical domain of an operation (ln of a
// non-positive number, sqrt of a negative ball, even multiplier, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A comparison could not be decided before the precision cap was hit.
class UndecidableError : public std::runtime_error {
public:
    UndecidableError(const std::string& what, long precision_bits)
        : std::runtime_error(what + " (undecidable at " + std::to_string(precision_bits) +
                             " bits)"),
          precision_bits_(precision_bits)
    {
    }

    long precision_bits() const noexcept { return precision_bits_; }

private:
    long precision_bits_;
};

class IndexError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Requested work exceeds a configured size cap.
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

class CheckpointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace nearone

#endif
