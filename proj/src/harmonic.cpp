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

#include "nearone/harmonic.hpp"

#include <algorithm>

namespace nearone {

namespace {

// sum_{i=lo}^{hi-1} 1/(base + i), combined pairwise so both halves carry
// denominators of similar size.
mpq_class balanced_sum(const BigInt& base, std::uint64_t lo, std::uint64_t hi)
{
    if (hi - lo <= 16) {
        BigInt num = 0;
        BigInt den = 1;
        for (std::uint64_t i = lo; i < hi; ++i) {
            const BigInt l = base + BigInt(static_cast<unsigned long>(i));
            num = num * l + den;
            den *= l;
        }
        mpq_class q(num, den);
        q.canonicalize();
        return q;
    }
    const std::uint64_t mid = lo + (hi - lo) / 2;
    return balanced_sum(base, lo, mid) + balanced_sum(base, mid, hi);
}

BigInt nth_root_ceil(const BigInt& x, unsigned long k)
{
    BigInt r;
    const bool exact = mpz_root(r.get_mpz_t(), x.get_mpz_t(), k) != 0;
    return exact ? r : r + 1;
}

// Correction terms of the expansion, exact: 1/(2m) - 1/(2a) - 1/(12m^2) + 1/(12a^2).
Rat expansion_correction(const BigInt& a, const BigInt& m)
{
    return Rat::reduce(1, 2 * m) - Rat::reduce(1, 2 * a) - Rat::reduce(1, 12 * m * m) +
           Rat::reduce(1, 12 * a * a);
}

long bits_for_width(const Rat& width)
{
    // Smallest b with 2^-b <= width (approximately; only used as a start).
    return std::max(0L, static_cast<long>(bit_length(width.den())) - static_cast<long>(bit_length(width.num())) + 2);
}

} // namespace

Rat hdiff_exact(const BigInt& n, const BigInt& m, std::uint64_t cap)
{
    if (n < 1 || m < n) {
        throw DomainError("hdiff_exact needs 1 <= n <= m");
    }
    const BigInt count = m - n + 1;
    if (count > BigInt(static_cast<unsigned long>(cap))) {
        throw CapacityError("exact harmonic sum over " + count.get_str() + " terms exceeds the cap");
    }
    return Rat(balanced_sum(n, 0, count.get_ui()));
}

Ball f_diff_asymptotic(const BigInt& n, const BigInt& m, long prec)
{
    if (n < 2 || m < 1) {
        throw DomainError("f_diff_asymptotic needs n >= 2");
    }
    const BigInt a = n - 1;
    const long w = prec + 8;
    return add(ln_ball(Rat::reduce(m, a), w), Ball(expansion_correction(a, m), w), w).with_prec(prec);
}

Ball hdiff_ball(const BigInt& n, const BigInt& m, const Rat& target_width, const PrecisionPolicy& policy)
{
    if (n < 2 || m < n) {
        throw DomainError("hdiff_ball needs 2 <= n <= m");
    }
    if (target_width.sign() <= 0) {
        throw DomainError("hdiff_ball needs a positive target width");
    }
    // Remainder of H_N after the -1/(12N^2) term lies in (0, 1/(120 N^4)).
    // Start the asymptotic part at split with 1/(60 (split-1)^4) <= target/2.
    const Rat need = Rat(1) / (Rat(30) * target_width);
    const BigInt split = std::max(n, BigInt(nth_root_ceil(need.ceil(), 4) + 2));
    if (split > m) {
        const Rat exact = hdiff_exact(n, m);
        return Ball(exact, policy.start_bits + bits_for_width(target_width));
    }
    const Rat head = split > n ? hdiff_exact(n, split - 1) : Rat(0);
    const BigInt a = split - 1;
    const Rat a4 = Rat(a * a * a * a);
    const Rat m4 = Rat(m * m * m * m);
    const Rat rem_lo = -(Rat(1) / (Rat(120) * a4));
    const Rat rem_hi = Rat(1) / (Rat(120) * m4);
    const Rat fixed = head + expansion_correction(a, m);
    const Rat ratio = Rat::reduce(m, a);

    const PrecisionPolicy p{std::max(policy.start_bits, bits_for_width(target_width) + 8), policy.max_bits};
    return escalate(p, "harmonic sum enclosure", [&](long w) -> std::optional<Ball> {
        Ball s = add(ln_ball(ratio, w), Ball(fixed, w), w);
        s = Ball(exact_add(s.lo(), Dyadic::from_rat(rem_lo, w, Rounding::down)),
                 exact_add(s.hi(), Dyadic::from_rat(rem_hi, w, Rounding::up)), w);
        if (s.width().to_rat() <= target_width) {
            return s;
        }
        return std::nullopt;
    });
}

namespace {

// Decides sum_{k=n}^{t} 1/k >= 1, tightening the enclosure and finally
// falling back to exact arithmetic.
bool reaches_one(const BigInt& n, const BigInt& t)
{
    // Coarsest width that needs no exact head; usually decisive.
    const BigInt a = n - 2;
    const Ball coarse = hdiff_ball(n, t, Rat(1) / Rat(30 * a * a * a * a));
    if (auto below = less(coarse, Rat(1))) {
        return !*below;
    }
    for (long bits = 64; bits <= 1024; bits *= 4) {
        const Ball s = hdiff_ball(n, t, Dyadic(BigInt(1), -bits).to_rat());
        if (auto below = less(s, Rat(1))) {
            return !*below;
        }
    }
    return hdiff_exact(n, t) >= Rat(1);
}

} // namespace

BigInt crossing_index(const BigInt& n)
{
    if (n < 1) {
        throw DomainError("t(n) needs n >= 1");
    }
    if (n < 16) {
        Rat s(0);
        for (BigInt t = n;; ++t) {
            s += Rat::reduce(1, t);
            if (s >= Rat(1)) {
                return t;
            }
        }
    }
    // Jump to round(e n - (1 + e)/2), then walk.
    const long w = 64 + 2 * static_cast<long>(bit_length(n));
    const Ball e = const_e(w);
    const Ball guess = sub(mul(e, Ball(n, w), w), div(add(Ball(1), e, w), Ball(2), w), w);
    BigInt t = exact_add(guess.mid(), Dyadic(BigInt(1), -1)).floor();
    if (t < n) {
        t = n;
    }
    if (reaches_one(n, t)) {
        while (t > n && reaches_one(n, t - 1)) {
            --t;
        }
    } else {
        do {
            ++t;
        } while (!reaches_one(n, t));
    }
    return t;
}

EpsilonRecord t_of_n(const BigInt& n)
{
    EpsilonRecord rec;
    rec.n = n;
    rec.t = crossing_index(n);
    rec.eps = hdiff_exact(n, rec.t) - Rat(1);
    rec.scaled = Rat(n * n) * rec.eps;
    return rec;
}

Ball predict_epsilon(const BigInt& n, const Ball& y, const Ball& x, long prec)
{
    if (n < 2) {
        throw DomainError("predict_epsilon needs n >= 2");
    }
    const long w = prec + 16;
    // Admissible x: 0 < x < ln((3 + sqrt 13)/2), where sinh(x)/12 < 1/8.
    const Ball bound = ln_ball(div(add(Ball(3), sqrt(Ball(13), w), w), Ball(2), w), w);
    if (!x.is_positive() || !(x.hi() < bound.lo())) {
        throw DomainError("predict_epsilon needs 0 < x < ln((3 + sqrt(13))/2)");
    }
    const Ball emx = exp_ball(neg(x), w);
    const Ball numer = sub(add(mul(mul(Ball(24), emx, w), y, w), square(emx, w), w), Ball(1), w);
    return div(numer, Ball(BigInt(24) * n * n, w), w).with_prec(prec);
}

Ball y_of_pair(const BigInt& n, const BigInt& m, long prec)
{
    if (n < 2) {
        throw DomainError("y_of_pair needs n >= 2");
    }
    const long w = prec + 2 * static_cast<long>(bit_length(n)) + 16;
    const Ball e = const_e(w);
    const Ball half_one_plus_e = Ball(ldexp(exact_add(e.lo(), Dyadic(1)), -1), ldexp(exact_add(e.hi(), Dyadic(1)), -1), w);
    const Ball inner = add(sub(Ball(m, w), mul(e, Ball(n, w), w), w), half_one_plus_e, w);
    return mul(Ball(n, w), inner, w).with_prec(prec);
}

} // namespace nearone
