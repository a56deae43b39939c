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

#include "nearone/exactnum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace nearone {

std::size_t bit_length(const BigInt& x)
{
    return x == 0 ? 0 : mpz_sizeinbase(x.get_mpz_t(), 2);
}

std::string to_string(const BigInt& x)
{
    return x.get_str(10);
}

// ---------------------------------------------------------------------------
// Rat

Rat Rat::reduce(const BigInt& num, const BigInt& den)
{
    if (den == 0) {
        throw DomainError("rational with zero denominator");
    }
    mpq_class q(num, den);
    q.canonicalize();
    return Rat(q);
}

Rat rat_reduce(const BigInt& num, const BigInt& den)
{
    return Rat::reduce(num, den);
}

Rat& Rat::operator/=(const Rat& o)
{
    if (o.value_ == 0) {
        throw DomainError("rational division by zero");
    }
    value_ /= o.value_;
    return *this;
}

BigInt Rat::floor() const
{
    BigInt r;
    mpz_fdiv_q(r.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
    return r;
}

BigInt Rat::ceil() const
{
    BigInt r;
    mpz_cdiv_q(r.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
    return r;
}

std::string Rat::to_string() const
{
    return value_.get_num().get_str(10) + "/" + value_.get_den().get_str(10);
}

Rat abs(const Rat& r)
{
    return r.sign() < 0 ? -r : r;
}

// ---------------------------------------------------------------------------
// Dyadic

Dyadic::Dyadic(BigInt mantissa, long exponent) : mantissa_(std::move(mantissa)), exponent_(exponent)
{
    normalize();
}

void Dyadic::normalize()
{
    if (mantissa_ == 0) {
        exponent_ = 0;
        return;
    }
    const auto tz = static_cast<long>(mpz_scan1(mantissa_.get_mpz_t(), 0));
    if (tz > 0) {
        mpz_tdiv_q_2exp(mantissa_.get_mpz_t(), mantissa_.get_mpz_t(), static_cast<mp_bitcnt_t>(tz));
        exponent_ += tz;
    }
}

Dyadic Dyadic::rounded(BigInt mantissa, long exponent, long prec, Rounding dir)
{
    const auto bits = static_cast<long>(bit_length(mantissa));
    if (bits <= prec) {
        return Dyadic(std::move(mantissa), exponent);
    }
    const auto shift = static_cast<mp_bitcnt_t>(bits - prec);
    BigInt m;
    if (dir == Rounding::down) {
        mpz_fdiv_q_2exp(m.get_mpz_t(), mantissa.get_mpz_t(), shift);
    } else {
        mpz_cdiv_q_2exp(m.get_mpz_t(), mantissa.get_mpz_t(), shift);
    }
    return Dyadic(std::move(m), exponent + static_cast<long>(shift));
}

namespace {

Dyadic round_to(const Dyadic& d, long prec, Rounding dir)
{
    return Dyadic::rounded(d.mantissa(), d.exponent(), prec, dir);
}

// floor or ceil of n * 2^s / d for d > 0; s may be negative.
BigInt scaled_quotient(const BigInt& n, long s, const BigInt& d, Rounding dir)
{
    BigInt num = n;
    BigInt den = d;
    if (s >= 0) {
        mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(s));
    } else {
        mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(-s));
    }
    BigInt q;
    if (dir == Rounding::down) {
        mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    } else {
        mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    }
    return q;
}

} // namespace

Dyadic Dyadic::from_rat(const Rat& r, long prec, Rounding dir)
{
    if (r.sign() == 0) {
        return Dyadic();
    }
    const BigInt num = r.num();
    const BigInt den = r.den();
    const long s = prec + static_cast<long>(bit_length(den)) - static_cast<long>(bit_length(num)) + 1;
    return rounded(scaled_quotient(num, s, den, dir), -s, prec, dir);
}

Dyadic exact_add(const Dyadic& a, const Dyadic& b)
{
    if (a.is_zero()) {
        return b;
    }
    if (b.is_zero()) {
        return a;
    }
    const long e = std::min(a.exponent_, b.exponent_);
    BigInt x = a.mantissa_;
    BigInt y = b.mantissa_;
    mpz_mul_2exp(x.get_mpz_t(), x.get_mpz_t(), static_cast<mp_bitcnt_t>(a.exponent_ - e));
    mpz_mul_2exp(y.get_mpz_t(), y.get_mpz_t(), static_cast<mp_bitcnt_t>(b.exponent_ - e));
    return Dyadic(x + y, e);
}

Dyadic exact_mul(const Dyadic& a, const Dyadic& b)
{
    return Dyadic(a.mantissa_ * b.mantissa_, a.exponent_ + b.exponent_);
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b)
{
    const int sa = a.sign();
    const int sb = b.sign();
    if (sa != sb) {
        return sa < sb ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    if (sa == 0) {
        return std::strong_ordering::equal;
    }
    // Same sign: compare magnitudes by position of the leading bit first.
    const long ta = static_cast<long>(bit_length(a.mantissa_)) + a.exponent_;
    const long tb = static_cast<long>(bit_length(b.mantissa_)) + b.exponent_;
    if (ta != tb) {
        const bool a_bigger_mag = ta > tb;
        return (a_bigger_mag == (sa > 0)) ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    const int c = exact_add(a, -b).sign();
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

Rat Dyadic::to_rat() const
{
    if (exponent_ >= 0) {
        BigInt m = mantissa_;
        mpz_mul_2exp(m.get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(exponent_));
        return Rat(m);
    }
    BigInt den = 1;
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(-exponent_));
    return Rat::reduce(mantissa_, den);
}

double Dyadic::to_double() const
{
    long ex = 0;
    const double d = mpz_get_d_2exp(&ex, mantissa_.get_mpz_t());
    return std::ldexp(d, static_cast<int>(std::clamp(ex + exponent_, -100000L, 100000L)));
}

BigInt Dyadic::floor() const
{
    BigInt r = mantissa_;
    if (exponent_ >= 0) {
        mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), static_cast<mp_bitcnt_t>(exponent_));
    } else {
        mpz_fdiv_q_2exp(r.get_mpz_t(), r.get_mpz_t(), static_cast<mp_bitcnt_t>(-exponent_));
    }
    return r;
}

std::string Dyadic::to_decimal(int digits, Rounding dir) const
{
    if (digits < 1) {
        digits = 1;
    }
    if (is_zero()) {
        return "0";
    }
    const Rat v = to_rat();
    const Rat mag = abs(v);
    BigInt pow_lo;
    BigInt pow_hi;
    mpz_ui_pow_ui(pow_lo.get_mpz_t(), 10, static_cast<unsigned long>(digits - 1));
    pow_hi = pow_lo * 10;

    auto scale_by = [](const Rat& x, long p) {
        BigInt t;
        mpz_ui_pow_ui(t.get_mpz_t(), 10, static_cast<unsigned long>(p < 0 ? -p : p));
        return p >= 0 ? x * Rat(t) : x / Rat(t);
    };

    const long bits = static_cast<long>(bit_length(mantissa_)) - 1 + exponent_;
    long e10 = static_cast<long>(std::floor(static_cast<double>(bits) * 0.30102999566398120));
    Rat scaled = scale_by(mag, digits - 1 - e10);
    while (scaled >= Rat(pow_hi)) {
        ++e10;
        scaled = scale_by(mag, digits - 1 - e10);
    }
    while (scaled < Rat(pow_lo)) {
        --e10;
        scaled = scale_by(mag, digits - 1 - e10);
    }
    // Round the magnitude away from or toward zero depending on sign and dir.
    const bool toward_larger_mag = (dir == Rounding::up) == (v.sign() > 0);
    BigInt m = toward_larger_mag ? scaled.ceil() : scaled.floor();
    if (m == pow_hi) {
        m = pow_lo;
        ++e10;
    }
    std::string ds = m.get_str(10);
    std::string out = v.sign() < 0 ? "-" : "";
    out += ds.substr(0, 1);
    if (ds.size() > 1) {
        out += "." + ds.substr(1);
    }
    out += (e10 < 0 ? "e-" : "e+");
    const long ae = e10 < 0 ? -e10 : e10;
    if (ae < 10) {
        out += "0";
    }
    out += std::to_string(ae);
    return out;
}

// ---------------------------------------------------------------------------
// Ball

Ball::Ball(const BigInt& v, long prec) : lo_(v, 0), hi_(v, 0), prec_(prec) {}

Ball::Ball(const Rat& r, long prec)
    : lo_(Dyadic::from_rat(r, prec, Rounding::down)), hi_(Dyadic::from_rat(r, prec, Rounding::up)),
      prec_(prec)
{
}

Ball::Ball(Dyadic lo, Dyadic hi, long prec) : lo_(std::move(lo)), hi_(std::move(hi)), prec_(prec)
{
    if (hi_ < lo_) {
        throw std::invalid_argument("ball with lo > hi");
    }
}

Ball Ball::hull(const Ball& a, const Ball& b)
{
    return Ball(std::min(a.lo_, b.lo_), std::max(a.hi_, b.hi_), std::max(a.prec_, b.prec_));
}

Dyadic Ball::mag() const
{
    const Dyadic a = lo_.sign() < 0 ? -lo_ : lo_;
    const Dyadic b = hi_.sign() < 0 ? -hi_ : hi_;
    return std::max(a, b);
}

bool Ball::contains(const Rat& r) const
{
    return lo_.to_rat() <= r && r <= hi_.to_rat();
}

std::string Ball::to_string(int digits) const
{
    return "[" + lo_.to_decimal(digits, Rounding::down) + ", " + hi_.to_decimal(digits, Rounding::up) + "]";
}

Ball add(const Ball& a, const Ball& b, long prec)
{
    return Ball(round_to(exact_add(a.lo(), b.lo()), prec, Rounding::down),
                round_to(exact_add(a.hi(), b.hi()), prec, Rounding::up), prec);
}

Ball sub(const Ball& a, const Ball& b, long prec)
{
    return add(a, neg(b), prec);
}

Ball neg(const Ball& a)
{
    return Ball(-a.hi(), -a.lo(), a.prec());
}

Ball abs(const Ball& a)
{
    if (a.lo().sign() >= 0) {
        return a;
    }
    if (a.hi().sign() <= 0) {
        return neg(a);
    }
    return Ball(Dyadic(), a.mag(), a.prec());
}

Ball mul(const Ball& a, const Ball& b, long prec)
{
    if (a.lo().sign() >= 0 && b.lo().sign() >= 0) {
        return Ball(round_to(exact_mul(a.lo(), b.lo()), prec, Rounding::down),
                    round_to(exact_mul(a.hi(), b.hi()), prec, Rounding::up), prec);
    }
    const Dyadic p1 = exact_mul(a.lo(), b.lo());
    const Dyadic p2 = exact_mul(a.lo(), b.hi());
    const Dyadic p3 = exact_mul(a.hi(), b.lo());
    const Dyadic p4 = exact_mul(a.hi(), b.hi());
    const Dyadic lo = std::min({p1, p2, p3, p4});
    const Dyadic hi = std::max({p1, p2, p3, p4});
    return Ball(round_to(lo, prec, Rounding::down), round_to(hi, prec, Rounding::up), prec);
}

Ball square(const Ball& a, long prec)
{
    const Dyadic l2 = exact_mul(a.lo(), a.lo());
    const Dyadic h2 = exact_mul(a.hi(), a.hi());
    if (a.lo().sign() >= 0) {
        return Ball(round_to(l2, prec, Rounding::down), round_to(h2, prec, Rounding::up), prec);
    }
    if (a.hi().sign() <= 0) {
        return Ball(round_to(h2, prec, Rounding::down), round_to(l2, prec, Rounding::up), prec);
    }
    return Ball(Dyadic(), round_to(std::max(l2, h2), prec, Rounding::up), prec);
}

namespace {

Dyadic quotient(const Dyadic& x, const Dyadic& y, long prec, Rounding dir)
{
    if (x.is_zero()) {
        return Dyadic();
    }
    BigInt n = x.mantissa();
    BigInt d = y.mantissa();
    if (d < 0) {
        n = -n;
        d = -d;
    }
    long s = prec + static_cast<long>(bit_length(d)) - static_cast<long>(bit_length(n)) + 2;
    s = std::max(s, 0L);
    return Dyadic::rounded(scaled_quotient(n, s, d, dir), x.exponent() - y.exponent() - s, prec, dir);
}

Dyadic root(const Dyadic& x, long prec, Rounding dir)
{
    if (x.is_zero()) {
        return Dyadic();
    }
    long s = std::max(0L, 2 * prec + 2 - static_cast<long>(bit_length(x.mantissa())));
    if ((x.exponent() - s) % 2 != 0) {
        ++s;
    }
    BigInt m = x.mantissa();
    mpz_mul_2exp(m.get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(s));
    BigInt r;
    mpz_sqrt(r.get_mpz_t(), m.get_mpz_t());
    if (dir == Rounding::up && r * r != m) {
        r += 1;
    }
    return Dyadic::rounded(r, (x.exponent() - s) / 2, prec, dir);
}

} // namespace

Ball div(const Ball& a, const Ball& b, long prec)
{
    if (b.lo().sign() <= 0 && b.hi().sign() >= 0) {
        throw UndecidableError("division by a ball containing zero", prec);
    }
    if (a.lo().sign() >= 0 && b.lo().sign() > 0) {
        return Ball(quotient(a.lo(), b.hi(), prec, Rounding::down),
                    quotient(a.hi(), b.lo(), prec, Rounding::up), prec);
    }
    const Dyadic* as[2] = {&a.lo(), &a.hi()};
    const Dyadic* bs[2] = {&b.lo(), &b.hi()};
    std::optional<Dyadic> lo;
    std::optional<Dyadic> hi;
    for (const Dyadic* x : as) {
        for (const Dyadic* y : bs) {
            Dyadic d = quotient(*x, *y, prec, Rounding::down);
            Dyadic u = quotient(*x, *y, prec, Rounding::up);
            if (!lo || d < *lo) {
                lo = std::move(d);
            }
            if (!hi || *hi < u) {
                hi = std::move(u);
            }
        }
    }
    return Ball(std::move(*lo), std::move(*hi), prec);
}

Ball sqrt(const Ball& a, long prec)
{
    if (a.lo().sign() < 0) {
        throw DomainError("sqrt of a ball with negative lower endpoint");
    }
    return Ball(root(a.lo(), prec, Rounding::down), root(a.hi(), prec, Rounding::up), prec);
}

Ball ball_op(BallOp op, const Ball& a, const std::optional<Ball>& b, long prec)
{
    if (op != BallOp::sqrt && !b) {
        throw std::invalid_argument("binary ball operation without second operand");
    }
    switch (op) {
    case BallOp::add: return add(a, *b, prec);
    case BallOp::sub: return sub(a, *b, prec);
    case BallOp::mul: return mul(a, *b, prec);
    case BallOp::div: return div(a, *b, prec);
    case BallOp::sqrt: return sqrt(a, prec);
    }
    throw std::invalid_argument("unknown ball operation");
}

std::optional<bool> less(const Ball& a, const Ball& b)
{
    if (a.hi() < b.lo()) {
        return true;
    }
    if (a.lo() >= b.hi()) {
        return false;
    }
    return std::nullopt;
}

std::optional<bool> less(const Ball& a, const Rat& b)
{
    if (a.hi().to_rat() < b) {
        return true;
    }
    if (a.lo().to_rat() >= b) {
        return false;
    }
    return std::nullopt;
}

std::optional<bool> greater(const Ball& a, const Rat& b)
{
    if (a.lo().to_rat() > b) {
        return true;
    }
    if (a.hi().to_rat() <= b) {
        return false;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Series

namespace {

Ball symmetric(const Dyadic& radius, long prec)
{
    return Ball(-radius, radius, prec);
}

Dyadic pow2(long e)
{
    return Dyadic(BigInt(1), e);
}

// 2 * atanh(z) for |z| <= 1/3 via the odd power series; the tail after the
// last included power z^(2T+1) is bounded by 2 * |z|^(2T+3).
Ball two_atanh(const Rat& z, long w)
{
    const Ball zb(z, w);
    const Ball z2 = square(zb, w);
    Ball power = zb;
    Ball sum = zb;
    const Dyadic cutoff = pow2(-w - 4);
    for (long i = 1;; ++i) {
        power = mul(power, z2, w);
        if (power.mag() < cutoff) {
            sum = add(sum, symmetric(ldexp(power.mag(), 1), w), w);
            break;
        }
        sum = add(sum, div(power, Ball(2 * i + 1), w), w);
    }
    return Ball(round_to(ldexp(sum.lo(), 1), w, Rounding::down), round_to(ldexp(sum.hi(), 1), w, Rounding::up), w);
}

long factorial_terms_for(long bits)
{
    // Smallest K with log2((K + 1)!) >= bits + 4.
    double acc = 0;
    long k = 1;
    while (acc < static_cast<double>(bits) + 4.0) {
        ++k;
        acc += std::log2(static_cast<double>(k));
    }
    return k;
}

// sum_{k=a}^{b-1} 1 / (a (a+1) ... k) = T / Q with Q = a (a+1) ... (b-1).
void split_factorial(long a, long b, BigInt& t, BigInt& q)
{
    if (b - a == 1) {
        t = 1;
        q = a;
        return;
    }
    const long m = a + (b - a) / 2;
    BigInt t1, q1, t2, q2;
    split_factorial(a, m, t1, q1);
    split_factorial(m, b, t2, q2);
    t = t1 * q2 + t2;
    q = q1 * q2;
}

template <class F>
Ball cached(std::map<long, Ball>& cache, std::mutex& mu, long prec, F&& compute)
{
    {
        std::lock_guard<std::mutex> lock(mu);
        if (auto it = cache.find(prec); it != cache.end()) {
            return it->second;
        }
    }
    Ball b = compute();
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(prec, std::move(b)).first->second;
}

Ball ln2(long w)
{
    static std::map<long, Ball> cache;
    static std::mutex mu;
    return cached(cache, mu, w, [w] { return two_atanh(Rat::reduce(1, 3), w); });
}

Ball pow_uint(Ball base, unsigned long n, long w)
{
    Ball acc(1);
    while (n > 0) {
        if (n & 1UL) {
            acc = mul(acc, base, w);
        }
        n >>= 1;
        if (n > 0) {
            base = square(base, w);
        }
    }
    return acc;
}

} // namespace

Ball const_e(long prec)
{
    static std::map<long, Ball> cache;
    static std::mutex mu;
    return cached(cache, mu, prec, [prec] {
        const long w = prec + 8;
        const long k = factorial_terms_for(w);
        BigInt t;
        BigInt q;
        split_factorial(1, k + 1, t, q); // q = k!
        const Rat sum = Rat(1) + Rat::reduce(t, q);
        const Rat tail = Rat::reduce(2, q * (k + 1));
        return Ball(Dyadic::from_rat(sum, w, Rounding::down), Dyadic::from_rat(sum + tail, w, Rounding::up), prec);
    });
}

Ball const_sinh1(long prec)
{
    static std::map<long, Ball> cache;
    static std::mutex mu;
    return cached(cache, mu, prec, [prec] {
        const long w = prec + 8;
        const Ball e = const_e(w);
        const Ball d = sub(e, div(Ball(1), e, w), w);
        return Ball(ldexp(d.lo(), -1), ldexp(d.hi(), -1), prec);
    });
}

Ball const_pi(long prec)
{
    static std::map<long, Ball> cache;
    static std::mutex mu;
    return cached(cache, mu, prec, [prec] {
        const long w = prec + 12;
        // Machin: pi = 16 atan(1/5) - 4 atan(1/239); alternating series with
        // the first omitted term as the tail bound.
        auto atan_recip = [w](long x) {
            Ball sum(0);
            BigInt xpow = x;
            const BigInt x2 = BigInt(x) * x;
            const Dyadic cutoff = pow2(-w - 4);
            for (long i = 0;; ++i) {
                const Ball term(Rat::reduce(1, xpow * (2 * i + 1)), w);
                if (term.mag() < cutoff) {
                    return add(sum, symmetric(term.mag(), w), w);
                }
                sum = (i % 2 == 0) ? add(sum, term, w) : sub(sum, term, w);
                xpow *= x2;
            }
        };
        const Ball pi = sub(mul(Ball(16), atan_recip(5), w), mul(Ball(4), atan_recip(239), w), w);
        return pi.with_prec(prec);
    });
}

Ball ln_ball(const Rat& r, long prec)
{
    if (r.sign() <= 0) {
        throw DomainError("ln of a non-positive rational");
    }
    if (r == Rat(1)) {
        return Ball(0L).with_prec(prec);
    }
    long j = static_cast<long>(bit_length(r.num())) - static_cast<long>(bit_length(r.den()));
    auto scaled = [&r](long shift) {
        BigInt p = 1;
        mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(shift < 0 ? -shift : shift));
        return shift >= 0 ? r / Rat(p) : r * Rat(p);
    };
    Rat x = scaled(j);
    const Rat upper = Rat::reduce(4, 3);
    const Rat lower = Rat::reduce(2, 3);
    while (x > upper) {
        x /= Rat(2);
        ++j;
    }
    while (x < lower) {
        x *= Rat(2);
        --j;
    }
    const long w = prec + 16 + static_cast<long>(bit_length(BigInt(prec)));
    Ball result = two_atanh((x - Rat(1)) / (x + Rat(1)), w);
    if (j != 0) {
        const long wj = w + static_cast<long>(bit_length(BigInt(j < 0 ? -j : j)));
        result = add(result, mul(Ball(j), ln2(wj), wj), w);
    }
    return result.with_prec(prec);
}

Ball ln_ball(const Ball& x, long prec)
{
    if (x.hi().sign() <= 0) {
        throw DomainError("ln of a non-positive ball");
    }
    if (x.lo().sign() <= 0) {
        throw UndecidableError("ln of a ball containing zero", prec);
    }
    if (x.lo() == x.hi()) {
        return ln_ball(x.lo().to_rat(), prec);
    }
    const Ball a = ln_ball(x.lo().to_rat(), prec);
    const Ball b = ln_ball(x.hi().to_rat(), prec);
    return Ball(a.lo(), b.hi(), prec);
}

Ball exp_ball(const Rat& x, long prec)
{
    if (x.sign() == 0) {
        return Ball(1L).with_prec(prec);
    }
    const BigInt n = x.floor();
    if (!n.fits_slong_p()) {
        throw CapacityError("exp argument out of range");
    }
    const long ni = n.get_si();
    const unsigned long na = static_cast<unsigned long>(ni < 0 ? -ni : ni);
    const long w = prec + 16 + 2 * static_cast<long>(bit_length(BigInt(na))) +
                   static_cast<long>(bit_length(BigInt(prec)));
    const Rat f = x - Rat(n); // in [0, 1)

    // Taylor series of e^f; remainder after term t_K is at most 2 t_{K+1}.
    const Ball fb(f, w);
    Ball term(1);
    Ball sum(1);
    const Dyadic cutoff = pow2(-w - 4);
    for (long k = 1;; ++k) {
        term = div(mul(term, fb, w), Ball(k), w);
        if (term.mag() < cutoff) {
            sum = add(sum, Ball(Dyadic(), ldexp(term.mag(), 1), w), w);
            break;
        }
        sum = add(sum, term, w);
    }
    if (ni != 0) {
        const Ball en = pow_uint(const_e(w), na, w);
        sum = ni > 0 ? mul(sum, en, w) : div(sum, en, w);
    }
    return sum.with_prec(prec);
}

Ball exp_ball(const Ball& x, long prec)
{
    if (x.lo() == x.hi()) {
        return exp_ball(x.lo().to_rat(), prec);
    }
    const Ball a = exp_ball(x.lo().to_rat(), prec);
    const Ball b = exp_ball(x.hi().to_rat(), prec);
    return Ball(a.lo(), b.hi(), prec);
}

Ball pow_ball(const Ball& base, const Rat& exponent, long prec)
{
    if (exponent.sign() == 0) {
        return Ball(1L).with_prec(prec);
    }
    const long w = prec + 16;
    const Ball l = ln_ball(base, w);
    return exp_ball(mul(Ball(exponent, w), l, w), prec);
}

std::pair<Ball, Ball> cos_sin_2pi(const Ball& x, long prec)
{
    const long w = prec + 16;
    // Shift by an integer so the argument is near [-1/2, 1/2].
    const Dyadic m = x.mid();
    BigInt shift = exact_add(m, Dyadic(BigInt(1), -1)).floor(); // round(mid)
    const Dyadic sd(shift, 0);
    const Ball reduced(exact_add(x.lo(), -sd), exact_add(x.hi(), -sd), w);
    // Fixed point at W bits on the midpoint: halve the argument r times,
    // sum the Taylor series, double back. Errors are tracked in ulps; the
    // width of theta enters through |d cos|, |d sin| <= 1.
    const long r = 8;
    const long W = w + 16 + 3 * r;
    const Ball theta = mul(mul(Ball(2), const_pi(W), W), reduced, W);
    const Dyadic tm = theta.mid();
    BigInt xf;
    {
        const long sh = tm.exponent() - r + W;
        if (sh >= 0) {
            mpz_mul_2exp(xf.get_mpz_t(), tm.mantissa().get_mpz_t(), static_cast<mp_bitcnt_t>(sh));
        } else {
            mpz_fdiv_q_2exp(xf.get_mpz_t(), tm.mantissa().get_mpz_t(), static_cast<mp_bitcnt_t>(-sh));
        }
    }
    BigInt one;
    mpz_setbit(one.get_mpz_t(), static_cast<mp_bitcnt_t>(W));
    BigInt c = one;
    BigInt s = 0;
    BigInt term = one;
    BigInt err = 2; // rounding of x, Lipschitz
    for (long k = 1;; ++k) {
        term *= xf;
        mpz_tdiv_q_2exp(term.get_mpz_t(), term.get_mpz_t(), static_cast<mp_bitcnt_t>(W));
        term /= k;
        err += 4;
        if (term == 0) {
            err += 10; // geometric tail of terms below 4 ulps
            break;
        }
        switch (k % 4) {
        case 0: c += term; break;
        case 1: s += term; break;
        case 2: c -= term; break;
        default: s -= term; break;
        }
    }
    for (long i = 0; i < r; ++i) {
        BigInt c2 = c * c - s * s;
        BigInt s2 = 2 * c * s;
        mpz_fdiv_q_2exp(c2.get_mpz_t(), c2.get_mpz_t(), static_cast<mp_bitcnt_t>(W));
        mpz_fdiv_q_2exp(s2.get_mpz_t(), s2.get_mpz_t(), static_cast<mp_bitcnt_t>(W));
        c = c2;
        s = s2;
        err = 5 * err + 2;
    }
    const Dyadic half_width = ldexp(theta.width(), -1);
    auto enclose = [&](const BigInt& v) {
        const Dyadic lo = exact_add(Dyadic(BigInt(v - err), -W), -half_width);
        const Dyadic hi = exact_add(Dyadic(BigInt(v + err), -W), half_width);
        const Dyadic u(1);
        return Ball(round_to(std::max(lo, -u), prec, Rounding::down), round_to(std::min(hi, u), prec, Rounding::up),
                    prec);
    };
    return {enclose(c), enclose(s)};
}

std::pair<Ball, Ball> cos_sin_2pi(const Rat& x, long prec)
{
    const long w = prec + 16;
    const Rat reduced = x - Rat((x + Rat::reduce(1, 2)).floor());
    return cos_sin_2pi(Ball(reduced, w), prec);
}

Constants Constants::at(long prec)
{
    Constants c;
    const long w = prec + 8;
    c.e = const_e(prec);
    c.sinh1 = const_sinh1(prec);
    c.y_star = div(const_sinh1(w), Ball(12), w).with_prec(prec);
    c.target = div(const_sinh1(w), Ball(6), w).with_prec(prec);
    c.alpha = div(Ball(3), const_sinh1(w), w).with_prec(prec);
    return c;
}

} // namespace nearone
