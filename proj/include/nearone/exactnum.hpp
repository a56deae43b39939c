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

#ifndef NEARONE_EXACTNUM_HPP
#define NEARONE_EXACTNUM_HPP

// Exact rationals (GMP-backed) and outward-rounded interval arithmetic over
// dyadic endpoints, plus rigorous enclosures of the handful of
// transcendental values the rest of the library needs.

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "nearone/errors.hpp"

namespace nearone {

using BigInt = mpz_class;

/// Number of bits in |x|; 0 for x == 0.
std::size_t bit_length(const BigInt& x);

std::string to_string(const BigInt& x);

// ---------------------------------------------------------------------------
// Rat

/// Exact rational, always in lowest terms with a positive denominator.
class Rat {
public:
    Rat() = default;
    Rat(long v) : value_(v) {} // NOLINT(google-explicit-constructor)
    explicit Rat(const BigInt& v) : value_(v) {}
    template <class Expr>
    explicit Rat(const __gmp_expr<mpz_t, Expr>& v) : value_(BigInt(v)) {}
    explicit Rat(const mpq_class& v) : value_(v) { value_.canonicalize(); }

    /// Throws DomainError when den == 0.
    static Rat reduce(const BigInt& num, const BigInt& den);

    BigInt num() const { return value_.get_num(); }
    BigInt den() const { return value_.get_den(); }
    const mpq_class& raw() const { return value_; }

    int sign() const { return sgn(value_); }
    BigInt floor() const;
    BigInt ceil() const;
    double to_double() const { return value_.get_d(); }
    /// Always "num/den", also for integers.
    std::string to_string() const;

    Rat& operator+=(const Rat& o) { value_ += o.value_; return *this; }
    Rat& operator-=(const Rat& o) { value_ -= o.value_; return *this; }
    Rat& operator*=(const Rat& o) { value_ *= o.value_; return *this; }
    Rat& operator/=(const Rat& o);

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
    friend Rat operator-(const Rat& a) { return Rat(mpq_class(-a.value_)); }

    friend bool operator==(const Rat& a, const Rat& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rat& a, const Rat& b)
    {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

private:
    mpq_class value_{0};
};

Rat abs(const Rat& r);
Rat rat_reduce(const BigInt& num, const BigInt& den);

// ---------------------------------------------------------------------------
// Dyadic

enum class Rounding { down, up };

/// mantissa * 2^exponent, kept with an odd mantissa (or 0 * 2^0).
class Dyadic {
public:
    Dyadic() = default;
    Dyadic(long v) : Dyadic(BigInt(v), 0) {} // NOLINT(google-explicit-constructor)
    Dyadic(BigInt mantissa, long exponent);

    /// Rounds mantissa * 2^exponent to at most `prec` significant bits.
    static Dyadic rounded(BigInt mantissa, long exponent, long prec, Rounding dir);
    /// Nearest dyadic with `prec` significant bits in direction `dir`.
    static Dyadic from_rat(const Rat& r, long prec, Rounding dir);

    const BigInt& mantissa() const { return mantissa_; }
    long exponent() const { return exponent_; }
    int sign() const { return sgn(mantissa_); }
    bool is_zero() const { return mantissa_ == 0; }

    Rat to_rat() const;
    double to_double() const;
    BigInt floor() const;
    /// Scientific notation with `digits` significant digits, rounded in `dir`.
    std::string to_decimal(int digits, Rounding dir) const;

    Dyadic operator-() const { return Dyadic(-mantissa_, exponent_); }
    friend Dyadic exact_add(const Dyadic& a, const Dyadic& b);
    friend Dyadic exact_mul(const Dyadic& a, const Dyadic& b);
    friend Dyadic ldexp(const Dyadic& a, long shift) { return Dyadic(a.mantissa_, a.exponent_ + shift); }

    friend bool operator==(const Dyadic& a, const Dyadic& b)
    {
        return a.exponent_ == b.exponent_ && a.mantissa_ == b.mantissa_;
    }
    friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

private:
    void normalize();

    BigInt mantissa_{0};
    long exponent_ = 0;
};

// ---------------------------------------------------------------------------
// Ball

inline constexpr long kMinPrecision = 32;
inline constexpr long kDefaultPrecision = 128;

/// Closed interval [lo, hi] with dyadic endpoints. Every operation rounds
/// outward, so the true result for any members of the inputs is enclosed.
class Ball {
public:
    Ball() = default;
    Ball(long v) : lo_(v), hi_(v) {} // NOLINT(google-explicit-constructor)
    Ball(const BigInt& v, long prec);
    Ball(const Rat& r, long prec);
    Ball(Dyadic lo, Dyadic hi, long prec);

    static Ball point(Dyadic v, long prec = kDefaultPrecision) { return Ball(v, v, prec); }
    static Ball hull(const Ball& a, const Ball& b);

    const Dyadic& lo() const { return lo_; }
    const Dyadic& hi() const { return hi_; }
    long prec() const { return prec_; }
    Dyadic width() const { return exact_add(hi_, -lo_); }
    Dyadic mid() const { return ldexp(exact_add(lo_, hi_), -1); }
    Dyadic mag() const; // max(|lo|, |hi|)

    bool contains(const Rat& r) const;
    bool contains(const Ball& b) const { return lo_ <= b.lo_ && b.hi_ <= hi_; }
    bool overlaps(const Ball& b) const { return !(hi_ < b.lo_ || b.hi_ < lo_); }
    bool is_positive() const { return lo_.sign() > 0; }
    bool is_negative() const { return hi_.sign() < 0; }
    bool excludes_zero() const { return is_positive() || is_negative(); }

    Ball with_prec(long prec) const { return Ball(lo_, hi_, prec); }
    double to_double() const { return mid().to_double(); }
    /// "[lo, hi]" with `digits` significant digits, outward.
    std::string to_string(int digits = 20) const;

private:
    Dyadic lo_;
    Dyadic hi_;
    long prec_ = kDefaultPrecision;
};

enum class BallOp { add, sub, mul, div, sqrt };

Ball add(const Ball& a, const Ball& b, long prec);
Ball sub(const Ball& a, const Ball& b, long prec);
Ball mul(const Ball& a, const Ball& b, long prec);
/// Throws UndecidableError when b contains 0.
Ball div(const Ball& a, const Ball& b, long prec);
/// Throws DomainError when a.lo < 0.
Ball sqrt(const Ball& a, long prec);
Ball neg(const Ball& a);
Ball abs(const Ball& a);
/// Smallest enclosure of a.lo^2..a.hi^2 (tighter than mul(a, a)).
Ball square(const Ball& a, long prec);
/// Dispatcher over the five arithmetic operations; `b` ignored for sqrt.
Ball ball_op(BallOp op, const Ball& a, const std::optional<Ball>& b, long prec);

inline long common_prec(const Ball& a, const Ball& b) { return a.prec() > b.prec() ? a.prec() : b.prec(); }
inline Ball operator+(const Ball& a, const Ball& b) { return add(a, b, common_prec(a, b)); }
inline Ball operator-(const Ball& a, const Ball& b) { return sub(a, b, common_prec(a, b)); }
inline Ball operator*(const Ball& a, const Ball& b) { return mul(a, b, common_prec(a, b)); }
inline Ball operator/(const Ball& a, const Ball& b) { return div(a, b, common_prec(a, b)); }
inline Ball operator-(const Ball& a) { return neg(a); }

/// Decided comparisons: nullopt when the balls overlap.
std::optional<bool> less(const Ball& a, const Ball& b);
std::optional<bool> less(const Ball& a, const Rat& b);
std::optional<bool> greater(const Ball& a, const Rat& b);

// ---------------------------------------------------------------------------
// Elementary functions and constants

/// ln(r) for r > 0, width <= 2^(4 - prec).
Ball ln_ball(const Rat& r, long prec);
/// ln over a ball with positive lower endpoint (monotone endpoint evaluation).
Ball ln_ball(const Ball& x, long prec);
Ball exp_ball(const Rat& x, long prec);
Ball exp_ball(const Ball& x, long prec);
/// base^exponent for base > 0.
Ball pow_ball(const Ball& base, const Rat& exponent, long prec);

Ball const_e(long prec);
Ball const_sinh1(long prec);
Ball const_pi(long prec);

/// (cos 2 pi x, sin 2 pi x).
std::pair<Ball, Ball> cos_sin_2pi(const Ball& x, long prec);
std::pair<Ball, Ball> cos_sin_2pi(const Rat& x, long prec);

struct Constants {
    Ball e;
    Ball sinh1;
    Ball y_star; // sinh(1) / 12
    Ball target; // sinh(1) / 6
    Ball alpha;  // 3 / sinh(1)

    static Constants at(long prec);
};

// ---------------------------------------------------------------------------
// Precision escalation

struct PrecisionPolicy {
    long start_bits = kDefaultPrecision;
    long max_bits = 1L << 16;
};

/// Calls attempt(prec) for prec = start, 2*start, ... until it returns a
/// value; throws UndecidableError once max_bits has been tried.
template <class F>
auto escalate(const PrecisionPolicy& policy, std::string_view what, F&& attempt)
    -> typename decltype(attempt(0L))::value_type
{
    long prec = policy.start_bits < kMinPrecision ? kMinPrecision : policy.start_bits;
    for (;;) {
        if (auto r = attempt(prec)) {
            return std::move(*r);
        }
        if (prec >= policy.max_bits) {
            throw UndecidableError(std::string(what), prec);
        }
        prec = (2 * prec > policy.max_bits) ? policy.max_bits : 2 * prec;
    }
}

} // namespace nearone

#endif
