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

#ifndef NEARONE_CONTFRAC_HPP
#define NEARONE_CONTFRAC_HPP

// Continued fractions of e and e^(1/k): partial quotients, convergents, the
// every-third-convergent subsequence p_{3k+2}/q_{3k+2} with certified
// normalized remainders, and Legendre's sufficient test for convergents.
//
// Indexing: partial quotients and convergents are 1-based with a_1 = 2 for e,
// so p_1/q_1 = 2/1. Subsequence indices are 0-based: entry k is convergent
// 3k + 2 (entry 0 is 3/1).

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "nearone/exactnum.hpp"

namespace nearone {

struct Convergent {
    std::size_t index = 0;
    BigInt a;
    BigInt p;
    BigInt q;
};

/// Partial quotient a_i of e (i >= 1).
BigInt e_cf_coeff(std::size_t i);
/// Partial quotient a_i of e^(1/kdenom): periodic triples (1, kdenom-1 + 2 kdenom m, 1).
BigInt exp_recip_cf_coeff(long kdenom, std::size_t i);

using CoeffSource = std::function<BigInt(std::size_t)>;

/// First `count` convergents via p_i = a_i p_{i-1} + p_{i-2} (seeds p_0 = 1,
/// q_0 = 0, p_{-1} = 0, q_{-1} = 1).
std::vector<Convergent> convergents(const CoeffSource& coeff, std::size_t count);

/// Memoized convergents of e; element i - 1 holds convergent i. The returned
/// snapshot is immutable and may be longer than requested.
std::shared_ptr<const std::vector<Convergent>> e_convergents(std::size_t count);

/// Largest subsequence index the memoized table is meant for.
inline constexpr std::size_t kMaxSubseqIndex = 3000;

struct SubseqEntry {
    std::size_t k = 0;
    BigInt p;
    BigInt q;
    Ball r;       // |e - p/q| q^2
    int sign = 0; // sign of e - p/q, equals (-1)^(k+1)
};

/// Entry k with an r ball of width <= 2^(4 - prec). The bounds (p, q
/// odd, sign, 1/(2k+4) <= r <= 1/(2k+2)) are decided before returning;
/// throws UndecidableError when that needs more than policy.max_bits.
SubseqEntry subseq_entry(std::size_t k, long prec = kDefaultPrecision, const PrecisionPolicy& policy = {});

enum class LegendreVerdict { passes, fails, undecidable };

/// Decides |alpha - p/q| <= 1/(2 q^2).
LegendreVerdict legendre_test(const BigInt& p, const BigInt& q, const Ball& alpha);

/// True iff p/q (lowest terms) equals some convergent of e with index <= max_index.
bool is_convergent(const BigInt& p, const BigInt& q, std::size_t max_index = 3 * kMaxSubseqIndex + 2);

/// c_k = q_{3k+1} / q_{3k+2}, from the convergent table.
Rat ck_sequence(std::size_t k);
/// c_k from c_0 = 1 and c_{k+1} = 1/2 + 1 / (2 (4k + 5 + 2 c_k)).
Rat ck_by_recurrence(std::size_t k);

/// Enclosure of w_k = [2k+2; 1, 1, 2k+4, 1, 1, 2k+6, ...] from bracketing
/// truncations, width <= 2^-prec.
Ball tail_value(std::size_t k, long prec = kDefaultPrecision);

/// r_{3k+2}^{-1} = c_k + w_k, the route that avoids evaluating e.
Ball r_inverse_from_tail(std::size_t k, long prec = kDefaultPrecision);

} // namespace nearone

#endif
