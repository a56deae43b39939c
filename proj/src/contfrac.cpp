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

#include "nearone/contfrac.hpp"

#include <algorithm>
#include <mutex>

namespace nearone {

BigInt e_cf_coeff(std::size_t i)
{
    if (i == 0) {
        throw IndexError("partial quotients are indexed from 1");
    }
    if (i == 1) {
        return 2;
    }
    if (i % 3 == 0) {
        return BigInt(static_cast<unsigned long>(2 * (i / 3)));
    }
    return 1;
}

BigInt exp_recip_cf_coeff(long kdenom, std::size_t i)
{
    if (kdenom < 2) {
        throw DomainError("e^(1/k) expansion needs k >= 2");
    }
    if (i == 0) {
        throw IndexError("partial quotients are indexed from 1");
    }
    // Periodic triples (1, (k - 1) + 2 k m, 1) for m = 0, 1, 2, ...
    const std::size_t m = (i - 1) / 3;
    if ((i - 1) % 3 == 1) {
        return BigInt(kdenom - 1) + BigInt(2 * kdenom) * BigInt(static_cast<unsigned long>(m));
    }
    return 1;
}

std::vector<Convergent> convergents(const CoeffSource& coeff, std::size_t count)
{
    std::vector<Convergent> out;
    out.reserve(count);
    BigInt p_prev2 = 0, q_prev2 = 1; // index -1
    BigInt p_prev = 1, q_prev = 0;   // index 0
    for (std::size_t i = 1; i <= count; ++i) {
        Convergent c;
        c.index = i;
        c.a = coeff(i);
        c.p = c.a * p_prev + p_prev2;
        c.q = c.a * q_prev + q_prev2;
        p_prev2 = std::move(p_prev);
        q_prev2 = std::move(q_prev);
        p_prev = c.p;
        q_prev = c.q;
        out.push_back(std::move(c));
    }
    return out;
}

std::shared_ptr<const std::vector<Convergent>> e_convergents(std::size_t count)
{
    static std::mutex mu;
    static std::shared_ptr<const std::vector<Convergent>> table =
        std::make_shared<const std::vector<Convergent>>(convergents(e_cf_coeff, 64));
    std::lock_guard<std::mutex> lock(mu);
    if (table->size() < count) {
        table = std::make_shared<const std::vector<Convergent>>(
            convergents(e_cf_coeff, std::max(count, 2 * table->size())));
    }
    return table;
}

namespace {

long round_up(long bits, long step)
{
    return (bits + step - 1) / step * step;
}

} // namespace

SubseqEntry subseq_entry(std::size_t k, long prec, const PrecisionPolicy& policy)
{
    const std::size_t index = 3 * k + 2;
    const auto table = e_convergents(index);
    const Convergent& c = (*table)[index - 1];

    SubseqEntry entry;
    entry.k = k;
    entry.p = c.p;
    entry.q = c.q;

    const Rat lower = Rat::reduce(1, BigInt(static_cast<unsigned long>(2 * k + 4)));
    const Rat upper = Rat::reduce(1, BigInt(static_cast<unsigned long>(2 * k + 2)));
    const Rat max_width = Dyadic(BigInt(1), 4 - prec).to_rat();
    // e must be known to about 2 log2(q) bits beyond the target precision.
    const long offset = 2 * static_cast<long>(bit_length(c.q)) + 8;
    const PrecisionPolicy shifted{round_up(std::max(policy.start_bits, prec) + offset, 64),
                                  policy.max_bits + offset};

    auto attempt = [&](long w) -> std::optional<SubseqEntry> {
        const Ball e = const_e(w);
        const Ball scaled = sub(mul(e, Ball(c.q, w), w), Ball(c.p, w), w); // e q - p
        if (!scaled.excludes_zero()) {
            return std::nullopt;
        }
        const Ball r = mul(abs(scaled), Ball(c.q, w), w);
        const bool decided = r.width().to_rat() <= max_width && less(r, lower).has_value() &&
                             greater(r, upper).has_value();
        if (!decided) {
            return std::nullopt;
        }
        SubseqEntry out = entry;
        out.sign = scaled.is_positive() ? 1 : -1;
        out.r = r.with_prec(prec);
        return out;
    };
    return escalate(shifted, "subsequence remainder", attempt);
}

LegendreVerdict legendre_test(const BigInt& p, const BigInt& q, const Ball& alpha)
{
    if (q < 1) {
        throw DomainError("legendre_test needs q >= 1");
    }
    const long w = alpha.prec() + 2 * static_cast<long>(bit_length(q)) + 8;
    const Ball gap = abs(sub(alpha, Ball(Rat::reduce(p, q), w), w));
    const Rat threshold = Rat::reduce(1, 2 * q * q);
    if (gap.hi().to_rat() <= threshold) {
        return LegendreVerdict::passes;
    }
    if (gap.lo().to_rat() > threshold) {
        return LegendreVerdict::fails;
    }
    return LegendreVerdict::undecidable;
}

bool is_convergent(const BigInt& p, const BigInt& q, std::size_t max_index)
{
    if (q <= 0) {
        return false;
    }
    const Rat target = Rat::reduce(p, q);
    std::size_t want = 64;
    for (;;) {
        const auto table = e_convergents(std::min(want, max_index));
        const std::size_t limit = std::min(table->size(), max_index);
        for (std::size_t i = 0; i < limit; ++i) {
            const Convergent& c = (*table)[i];
            if (c.q > target.den()) {
                return false;
            }
            if (c.q == target.den() && c.p == target.num()) {
                return true;
            }
        }
        if (limit >= max_index) {
            return false;
        }
        want = 2 * limit;
    }
}

Rat ck_sequence(std::size_t k)
{
    const auto table = e_convergents(3 * k + 2);
    return Rat::reduce((*table)[3 * k].q, (*table)[3 * k + 1].q);
}

Rat ck_by_recurrence(std::size_t k)
{
    Rat c(1);
    for (std::size_t j = 0; j < k; ++j) {
        const Rat denom = Rat(2) * (Rat(static_cast<long>(4 * j + 5)) + Rat(2) * c);
        c = Rat::reduce(1, 2) + Rat(1) / denom;
    }
    return c;
}

Ball tail_value(std::size_t k, long prec)
{
    const BigInt base = BigInt(static_cast<unsigned long>(2 * k + 2));
    auto coeff = [&base](std::size_t j) -> BigInt {
        if (j % 3 == 0) {
            return base + BigInt(static_cast<unsigned long>(2 * (j / 3)));
        }
        return 1;
    };
    // Consecutive truncations bracket the value; stop once their gap
    // 1 / (Q_j Q_{j+1}) is below 2^-(prec + 2). The depth target doubles.
    BigInt p2 = 0, q2 = 1, p1 = 1, q1 = 0;
    BigInt limit = 1;
    mpz_mul_2exp(limit.get_mpz_t(), limit.get_mpz_t(), static_cast<mp_bitcnt_t>(prec + 2));
    std::size_t depth = 8;
    std::size_t j = 0;
    for (;;) {
        for (; j < depth; ++j) {
            const BigInt a = coeff(j);
            BigInt p = a * p1 + p2;
            BigInt q = a * q1 + q2;
            p2 = std::move(p1);
            q2 = std::move(q1);
            p1 = std::move(p);
            q1 = std::move(q);
        }
        if (q1 * q2 >= limit) {
            break;
        }
        depth *= 2;
    }
    const Rat a = Rat::reduce(p1, q1);
    const Rat b = Rat::reduce(p2, q2);
    const long w = prec + 4 + static_cast<long>(bit_length(base));
    return Ball(Dyadic::from_rat(std::min(a, b), w, Rounding::down), Dyadic::from_rat(std::max(a, b), w, Rounding::up),
                prec);
}

Ball r_inverse_from_tail(std::size_t k, long prec)
{
    const long w = prec + 8 + static_cast<long>(bit_length(BigInt(static_cast<unsigned long>(2 * k + 2))));
    return add(Ball(ck_sequence(k), w), tail_value(k, w), w).with_prec(prec);
}

} // namespace nearone
