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

#ifndef NEARONE_COUNTING_HPP
#define NEARONE_COUNTING_HPP

// Exponential sums S_m = sum_n e(m x_n), the Erdos-Turan discrepancy
// inequality, counts of n <= N with ||p n^2/q - r|| < delta, and the search
// for m/n^2 close to a real alpha.

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "nearone/exactnum.hpp"

namespace nearone {

using Point = std::variant<Rat, Ball>;

/// Points reduced modulo 1. Ball points may carry a generator so that
/// membership tests can be redone at higher precision.
class PointSet {
public:
    using Generator = std::function<Ball(std::size_t index, long prec)>;

    PointSet() = default;
    explicit PointSet(const std::vector<Rat>& points);
    explicit PointSet(const std::vector<Ball>& points);
    /// points[i] = gen(i, prec) for i < count.
    PointSet(std::size_t count, Generator gen, long prec = kDefaultPrecision);

    std::size_t size() const { return points_.size(); }
    const std::vector<Point>& points() const { return points_; }
    bool refinable() const { return static_cast<bool>(gen_); }
    /// Same set regenerated at `prec` (returns *this when not refinable).
    PointSet at_precision(long prec) const;
    /// x -> -x (mod 1).
    PointSet reflected() const;

private:
    std::vector<Point> points_;
    Generator gen_;
};

/// Rat r - floor(r).
Rat frac(const Rat& r);
/// Distance to the nearest integer.
Rat dist_to_int(const Rat& r);

/// |S_m| for one m >= 1, intersected with [0, N].
Ball exp_sum(const PointSet& ps, long m, long prec = kDefaultPrecision);
/// Up to this precision exp_sums runs in doubles with a rigorous radius
/// (enclosure width ~ L N 2^-50); above it every step is a Ball operation.
inline constexpr long kFastExpSumPrecision = 128;

/// |S_1|, ..., |S_L| via successive powers of e(x_n).
std::vector<Ball> exp_sums(const PointSet& ps, long L, long prec = kDefaultPrecision);

struct ETReport {
    std::size_t count = 0; // points with x in [a, b] (mod 1)
    Rat expected;          // N delta
    Rat lhs;               // |count - N delta|
    Ball rhs;              // N/(L+1) + E, compact E
    Ball e_compact;        // 2 (1/(L+1) + delta) sum |S_m|
    Ball e_sharp;          // 2 sum (1/(L+1) + min(delta, 1/(pi m))) |S_m|
    long L = 0;
    bool holds = false;    // lhs <= rhs, decided
};

/// Erdos-Turan check on [a, b] with 0 < b - a < 1. Escalates precision when
/// membership or the final comparison is undecided.
ETReport et_check(const PointSet& ps, const Rat& a, const Rat& b, long L, long prec = kDefaultPrecision,
                  const PrecisionPolicy& policy = {});

enum class CountMethod { table, direct };

struct CountReport {
    BigInt p;
    BigInt q;
    Rat r;
    Rat delta;
    long N = 0;
    long a = 0;
    long b = 1;
    long count = 0;  // strict ||.|| < delta
    long ties = 0;   // ||.|| == delta exactly, not counted
    Rat main_term;   // 2 N delta / b
    Rat eta;
    Ball error_term; // expression with all implied constants set to 1

    /// |count - main_term| <= multiplier * error_term, decided against the lower end.
    bool within(const Rat& multiplier) const;
};

/// Counts n <= N, n = a (mod b), with ||p n^2/q - r|| < delta. `table`
/// classifies each residue of n mod q once; `direct` evaluates every n in
/// exact rationals.
CountReport count_quadratic(const BigInt& p, const BigInt& q, const Rat& r, const Rat& delta, long N, long a, long b,
                            CountMethod method = CountMethod::table, const Rat& eta = Rat::reduce(1, 10));

/// (2N delta/b) N^-eta + N^(1+2 eta) delta^-eta (log q/N + 1/q + q delta log q/N^2)^(1/2).
Ball counting_error(const BigInt& q, const Rat& delta, long N, long b, const Rat& eta, long prec = kDefaultPrecision);

using AlphaSource = std::function<Ball(long prec)>;

struct Congruence {
    long a = 0;
    long b = 1;
};

struct MOverNSqResult {
    std::vector<std::pair<BigInt, BigInt>> pairs; // (m, n), increasing n
    std::size_t skipped = 0;                      // undecided at the cap
};

/// For each n <= n_max in the n class, m is the nearest integer to alpha n^2
/// in the m class; (m, n) is kept when |alpha - m/n^2| < n^-exponent.
MOverNSqResult search_m_over_nsq(const AlphaSource& alpha, const Rat& exponent, long n_max, Congruence n_congr = {},
                                 Congruence m_congr = {}, const PrecisionPolicy& policy = {});

/// Decides |alpha - m/n^2| < n^-exponent at one precision.
std::optional<bool> m_over_nsq_accepts(const Ball& alpha, const Rat& exponent, const BigInt& m, const BigInt& n,
                                       long prec);

/// |r_{3k+2} d^2 - sinh(1)/3| for k = (k' - 3)/2.
Ball kprime_gap(long kprime, long d, long prec = kDefaultPrecision);

} // namespace nearone

#endif
