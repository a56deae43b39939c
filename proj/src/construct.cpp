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

#include "nearone/construct.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "nearone/contfrac.hpp"
#include "nearone/harmonic.hpp"

namespace nearone {

namespace {

void require_even(long k)
{
    if (k < 0 || k % 2 != 0) {
        throw DomainError("subsequence index k must be even and >= 0");
    }
}

const Convergent& subseq_convergent(long k)
{
    const auto idx = static_cast<std::size_t>(3 * k + 2);
    static thread_local std::shared_ptr<const std::vector<Convergent>> table;
    if (!table || table->size() < idx) {
        table = e_convergents(idx);
    }
    return (*table)[idx - 1];
}

// sinh(1)/6 / r at working precision w.
Ball target_over_r(const SubseqEntry& entry, long w)
{
    return div(Constants::at(w).target, entry.r, w);
}

Rat pow2(long e)
{
    return Dyadic(BigInt(1), e).to_rat();
}

} // namespace

std::optional<BigInt> closest_odd(const Ball& x)
{
    // 2 floor(x/2) + 1; exact ties (x even) land on the upper odd integer.
    const BigInt lo = ldexp(x.lo(), -1).floor();
    const BigInt hi = ldexp(x.hi(), -1).floor();
    if (lo != hi) {
        return std::nullopt;
    }
    return BigInt(2 * lo + 1);
}

Ball d_star_limit(long k, long prec)
{
    require_even(k);
    const long w = prec + 16;
    const SubseqEntry entry = subseq_entry(static_cast<std::size_t>(k), w);
    return sqrt(mul(Ball(2), target_over_r(entry, w), w), w).with_prec(prec);
}

Ball d_star(long k, long prec, const PrecisionPolicy& policy)
{
    require_even(k);
    const PrecisionPolicy p{std::max(policy.start_bits, prec + 16), policy.max_bits};
    return escalate(p, "d*", [&](long w) -> std::optional<Ball> {
        const SubseqEntry entry = subseq_entry(static_cast<std::size_t>(k), w);
        const Ball ratio = target_over_r(entry, w);
        const Ball approx = sqrt(mul(Ball(2), ratio, w), w);
        const auto d = closest_odd(add(approx, Ball(2), w));
        if (!d) {
            return std::nullopt;
        }
        const BigInt n = (*d * entry.q + 1) / 2;
        const Ball factor(Rat::reduce(2 * n - 1, n), w);
        return sqrt(mul(factor, ratio, w), w).with_prec(prec);
    });
}

BigInt choose_d(long k, const PrecisionPolicy& policy)
{
    require_even(k);
    return escalate(policy, "choice of d", [&](long w) -> std::optional<BigInt> {
        const Ball ds = d_star(k, w, {w, policy.max_bits});
        return closest_odd(add(ds, Ball(2), w));
    });
}

std::pair<BigInt, BigInt> build_pair(long k, const BigInt& d)
{
    if (k < 0) {
        throw DomainError("subsequence index k must be >= 0");
    }
    if (d < 1 || mpz_even_p(d.get_mpz_t())) {
        throw DomainError("multiplier d must be odd and positive, got " + d.get_str());
    }
    const Convergent& c = subseq_convergent(k);
    return {BigInt((d * c.p - 1) / 2), BigInt((d * c.q + 1) / 2)};
}

CandidatePair certify(long k, const BigInt& d, long prec, const PrecisionPolicy& policy)
{
    CandidatePair c;
    c.k = k;
    c.d = d;
    std::tie(c.m, c.n) = build_pair(k, d);
    if (c.n < 2) {
        throw DomainError("pair has n < 2");
    }
    const long w = prec + 16;
    c.y = y_of_pair(c.n, c.m, w);

    if (c.m <= kExactCertifyLimit) {
        c.eps_exact = hdiff_exact(c.n, c.m) - Rat(1);
        c.eps = Ball(*c.eps_exact, w);
    } else {
        const Ball pred = predict_epsilon(c.n, c.y, Ball(1), w);
        // Width 2^-64 of the expected size, but no finer than the asymptotic
        // remainder at n allows without summing a head exactly.
        Rat target = abs(pred.mid().to_rat()) * pow2(-64);
        const BigInt a = c.n - 2;
        target = std::max(target, Rat(1) / Rat(30 * a * a * a * a));
        if (target.sign() == 0) {
            target = Rat(1) / Rat(c.n * c.n) * pow2(-64);
        }
        for (;;) {
            c.eps = sub(hdiff_ball(c.n, c.m, target, policy), Ball(1), w);
            if (c.eps.excludes_zero()) {
                break;
            }
            target *= pow2(-32);
            if (bit_length(target.den()) > static_cast<std::size_t>(policy.max_bits)) {
                throw UndecidableError("sign of eps for k = " + std::to_string(k) + ", d = " + d.get_str(),
                                       policy.max_bits);
            }
        }
    }
    c.eps_positive = c.eps.is_positive();
    const Ball nsq(BigInt(c.n * c.n), w);
    c.quality = mul(nsq, c.eps, w);
    const Ball log_factor = pow_ball(ln_ball(Rat(c.n), w), Rat::reduce(5, 4), w);
    c.scaled_quality = mul(abs(c.quality), log_factor, w);
    if (k >= 2) {
        const Ball scaled = mul(c.quality, sqrt(Ball(k), w), w);
        const auto under = less(scaled, Rat(1001));
        if (!c.eps_positive) {
            c.bound_ok = false; // the sum already falls short of 1
        } else {
            c.bound_ok = under;
        }
    }
    return c;
}

DChoiceBracket d_choice_bracket(long k, long prec)
{
    require_even(k);
    const long w = prec + 16;
    const BigInt d = choose_d(k);
    const auto [m, n] = build_pair(k, d);
    const SubseqEntry entry = subseq_entry(static_cast<std::size_t>(k), w);
    const Ball ds = d_star(k, w);

    DChoiceBracket b;
    const Ball rd2 = mul(entry.r, Ball(BigInt(d * d), w), w);
    b.gap = sub(mul(rd2, Ball(Rat::reduce(n, 2 * n - 1), w), w), Constants::at(w).target, w);
    b.lower = div(mul(ds, entry.r, w), Ball(2), w);
    b.upper = mul(Ball(7), mul(ds, entry.r, w), w);
    const auto lo_ok = less(b.lower, b.gap);
    const auto hi_ok = less(b.gap, b.upper);
    if (lo_ok && hi_ok) {
        b.holds = *lo_ok && *hi_ok;
    } else if ((lo_ok && !*lo_ok) || (hi_ok && !*hi_ok)) {
        b.holds = false;
    }
    return b;
}

JointSearchResult joint_search(long k_max, long d_window, long prec, WindowCenter center, unsigned threads)
{
    if (d_window < 1) {
        throw DomainError("d_window must be >= 1");
    }
    std::vector<long> ks;
    for (long k = 2; k <= k_max; k += 2) {
        ks.push_back(k);
    }
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min<unsigned>(threads, std::max<std::size_t>(1, ks.size()));

    std::vector<std::vector<CandidatePair>> per_k(ks.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> skipped{0};
    std::mutex error_mutex;
    std::exception_ptr error;

    auto worker = [&] {
        for (std::size_t i = next++; i < ks.size(); i = next++) {
            try {
                const long k = ks[i];
                double c = d_star(k, prec).to_double();
                if (center == WindowCenter::d_star_plus_2) {
                    c += 2.0;
                }
                auto lo = static_cast<long>(std::ceil(c - static_cast<double>(d_window)));
                const auto hi = static_cast<long>(std::floor(c + static_cast<double>(d_window)));
                lo = std::max(lo, 1L);
                if (lo % 2 == 0) {
                    ++lo;
                }
                for (long d = lo; d <= hi; d += 2) {
                    try {
                        per_k[i].push_back(certify(k, BigInt(d), prec));
                    } catch (const UndecidableError&) {
                        ++skipped;
                    }
                }
            } catch (const UndecidableError&) {
                ++skipped;
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }

    JointSearchResult result;
    result.skipped = skipped;
    for (auto& v : per_k) {
        std::move(v.begin(), v.end(), std::back_inserter(result.pairs));
    }
    auto key = [](const CandidatePair& c) { return abs(c.quality).mid(); };
    std::stable_sort(result.pairs.begin(), result.pairs.end(), [&](const CandidatePair& a, const CandidatePair& b) {
        const auto ka = key(a);
        const auto kb = key(b);
        if (ka != kb) {
            return ka < kb;
        }
        if (a.k != b.k) {
            return a.k < b.k;
        }
        return a.d < b.d;
    });
    return result;
}

} // namespace nearone
