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

#ifndef NEARONE_HARMONIC_HPP
#define NEARONE_HARMONIC_HPP

// Sums sum_{l=n}^{m} 1/l: exact, certified (Euler-Maclaurin with an
// enveloping remainder), the least crossing index t(n) with its overshoot
// eps_n, and the second-order prediction of the overshoot.

#include <cstdint>

#include "nearone/exactnum.hpp"

namespace nearone {

inline constexpr std::uint64_t kDefaultExactTermCap = 10'000'000;

/// Exact sum_{l=n}^{m} 1/l by balanced pairwise combination.
/// Throws CapacityError when m - n exceeds `cap`.
Rat hdiff_exact(const BigInt& n, const BigInt& m, std::uint64_t cap = kDefaultExactTermCap);

/// Enclosure of sum_{l=n}^{m} 1/l of width <= target_width (n >= 2).
/// Leading terms too small for the asymptotic remainder are summed exactly.
Ball hdiff_ball(const BigInt& n, const BigInt& m, const Rat& target_width, const PrecisionPolicy& policy = {});

/// ln(m / (n-1)) + 1/(2m) - 1/(2(n-1)) - 1/(12m^2) + 1/(12(n-1)^2), i.e. the
/// truncated asymptotic expansion of H_m - H_{n-1} with the constant
/// cancelled. No remainder term is included.
Ball f_diff_asymptotic(const BigInt& n, const BigInt& m, long prec);

struct EpsilonRecord {
    BigInt n;
    BigInt t;
    Rat eps;    // sum_{k=n}^{t} 1/k - 1 >= 0
    Rat scaled; // n^2 eps
};

/// Least t with sum_{k=n}^{t} 1/k >= 1 (certified, exact fallback).
BigInt crossing_index(const BigInt& n);

/// crossing_index plus the exact overshoot.
EpsilonRecord t_of_n(const BigInt& n);

/// (24 e^{-x} y + e^{-2x} - 1) / (24 n^2).
Ball predict_epsilon(const BigInt& n, const Ball& y, const Ball& x, long prec);

/// y = n (m - e n + (1 + e)/2), the offset with m = e n - (1+e)/2 + y/n.
Ball y_of_pair(const BigInt& n, const BigInt& m, long prec);

} // namespace nearone

#endif
