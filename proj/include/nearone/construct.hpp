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

#ifndef NEARONE_CONSTRUCT_HPP
#define NEARONE_CONSTRUCT_HPP

// Near-one pairs (m, n) built from the convergents p/q = p_{3k+2}/q_{3k+2}
// of e: 2m + 1 = d p and 2n - 1 = d q for an odd multiplier d.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "nearone/exactnum.hpp"

namespace nearone {

struct CandidatePair {
    long k = 0;
    BigInt d;
    BigInt m;
    BigInt n;
    Ball y;              // n (m - e n + (1 + e)/2)
    Ball eps;            // sum_{l=n}^{m} 1/l - 1
    Ball quality;        // n^2 eps
    Ball scaled_quality; // n^2 |eps| (ln n)^(5/4)
    std::optional<Rat> eps_exact; // set when the sum was done exactly
    bool eps_positive = false;
    std::optional<bool> bound_ok; // eps > 0 and quality sqrt(k) <= 1001; k >= 2 only
};

/// d* = sqrt((2n-1)/n * sinh(1)/6 / r_{3k+2}), with n taken from the pair
/// built with the d chosen from the (2n-1)/n -> 2 approximation.
Ball d_star(long k, long prec = kDefaultPrecision, const PrecisionPolicy& policy = {});

/// sqrt(2 sinh(1)/6 / r_{3k+2}), the large-n limit of d*.
Ball d_star_limit(long k, long prec = kDefaultPrecision);

/// Closest odd integer to x, ties upward. Nullopt if the ball straddles a
/// rounding boundary.
std::optional<BigInt> closest_odd(const Ball& x);

/// Closest odd integer to d* + 2 (ties upward).
BigInt choose_d(long k, const PrecisionPolicy& policy = {});

/// m = (d p - 1)/2, n = (d q + 1)/2. Throws DomainError for even d.
std::pair<BigInt, BigInt> build_pair(long k, const BigInt& d);

/// Sums exactly while m stays below this.
inline constexpr long kExactCertifyLimit = 10'000'000;

/// Builds the pair and encloses eps, quality and y. Throws
/// UndecidableError when the sign of eps cannot be decided.
CandidatePair certify(long k, const BigInt& d, long prec = kDefaultPrecision, const PrecisionPolicy& policy = {});

/// gap = r d^2 n/(2n-1) - sinh(1)/6 with the bracket d* r / 2 and 7 d* r.
struct DChoiceBracket {
    Ball gap;
    Ball lower;
    Ball upper;
    std::optional<bool> holds; // lower <= gap <= upper, decided
};
DChoiceBracket d_choice_bracket(long k, long prec = kDefaultPrecision);

enum class WindowCenter { d_star, d_star_plus_2 };

struct JointSearchResult {
    std::vector<CandidatePair> pairs; // ascending |quality|, then k, then d
    std::size_t skipped = 0;          // undecidable entries
};

/// Certifies every odd d with |d - c| <= d_window for each even k in
/// [2, k_max], where c = d* (or d* + 2). Parallel over k.
JointSearchResult joint_search(long k_max, long d_window, long prec = kDefaultPrecision,
                               WindowCenter center = WindowCenter::d_star, unsigned threads = 0);

} // namespace nearone

#endif
