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

#include "nearone/counting.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

#include "nearone/contfrac.hpp"
#include "parallel.hpp"

namespace nearone {

namespace {

constexpr std::size_t kBlock = 256;

Ball clamp(const Ball& x, const Dyadic& lo, const Dyadic& hi)
{
    const Dyadic l = std::min(std::max(x.lo(), lo), hi);
    const Dyadic h = std::max(std::min(x.hi(), hi), lo);
    return Ball(l, h, x.prec());
}

Ball reduce_mod1(const Ball& x)
{
    const BigInt fl = x.lo().floor();
    if (fl == x.hi().floor()) {
        return sub(x, Ball(fl, x.prec()), x.prec());
    }
    return x;
}

std::pair<Ball, Ball> phase(const Point& x, long prec)
{
    if (const Rat* r = std::get_if<Rat>(&x)) {
        return cos_sin_2pi(*r, prec);
    }
    return cos_sin_2pi(std::get<Ball>(x), prec);
}

Ball modulus(const Ball& re, const Ball& im, long n, long prec)
{
    const Ball s = sqrt(add(square(re, prec), square(im, prec), prec), prec);
    return clamp(s, Dyadic(0), Dyadic(n));
}

// Membership of x in [a, a + delta] (mod 1); nullopt when undecided.
std::optional<bool> in_interval(const Point& x, const Rat& a, const Rat& delta, long prec)
{
    if (const Rat* r = std::get_if<Rat>(&x)) {
        return frac(*r - a) <= delta;
    }
    const Ball t = sub(std::get<Ball>(x), Ball(a, prec), prec);
    const BigInt fl = t.lo().floor();
    if (fl != t.hi().floor()) {
        return std::nullopt;
    }
    const Ball f = sub(t, Ball(fl, prec), prec);
    if (f.hi().to_rat() <= delta) {
        return true;
    }
    if (f.lo().to_rat() > delta) {
        return false;
    }
    return std::nullopt;
}

long mod_floor(long a, long b)
{
    const long r = a % b;
    return r < 0 ? r + b : r;
}

Congruence normalized(Congruence c)
{
    if (c.b < 1) {
        throw DomainError("congruence modulus must be >= 1");
    }
    c.a = mod_floor(c.a, c.b);
    return c;
}

// 0 outside, 1 inside (strict), 2 exact tie, for ||X/Y|| vs dn/dd.
int classify(const BigInt& x, const BigInt& y, const BigInt& dn, const BigInt& dd)
{
    BigInt u;
    mpz_fdiv_r(u.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    const BigInt dist = std::min(u, BigInt(y - u));
    const int c = cmp(BigInt(dist * dd), BigInt(dn * y));
    return c < 0 ? 1 : (c == 0 ? 2 : 0);
}

} // namespace

PointSet::PointSet(const std::vector<Rat>& points)
{
    points_.reserve(points.size());
    for (const Rat& r : points) {
        points_.emplace_back(frac(r));
    }
}

PointSet::PointSet(const std::vector<Ball>& points)
{
    points_.reserve(points.size());
    for (const Ball& b : points) {
        points_.emplace_back(reduce_mod1(b));
    }
}

PointSet::PointSet(std::size_t count, Generator gen, long prec) : gen_(std::move(gen))
{
    points_.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        points_.emplace_back(reduce_mod1(gen_(i, prec)));
    }
}

PointSet PointSet::at_precision(long prec) const
{
    if (!gen_) {
        return *this;
    }
    return PointSet(points_.size(), gen_, prec);
}

PointSet PointSet::reflected() const
{
    PointSet out;
    out.points_.reserve(points_.size());
    for (const Point& x : points_) {
        if (const Rat* r = std::get_if<Rat>(&x)) {
            out.points_.emplace_back(frac(-*r));
        } else {
            out.points_.emplace_back(reduce_mod1(neg(std::get<Ball>(x))));
        }
    }
    return out;
}

Rat frac(const Rat& r)
{
    return r - Rat(r.floor());
}

Rat dist_to_int(const Rat& r)
{
    const Rat f = frac(r);
    return std::min(f, Rat(1) - f);
}

Ball exp_sum(const PointSet& ps, long m, long prec)
{
    if (m < 1) {
        throw DomainError("exp_sum needs m >= 1");
    }
    const long w = prec + 16;
    const std::size_t blocks = (ps.size() + kBlock - 1) / kBlock;
    std::vector<std::pair<Ball, Ball>> partial(blocks, {Ball(0), Ball(0)});
    detail::parallel_for(blocks, 0, [&](std::size_t blk) {
        Ball re(0);
        Ball im(0);
        const std::size_t end = std::min(ps.size(), (blk + 1) * kBlock);
        for (std::size_t i = blk * kBlock; i < end; ++i) {
            const Point& x = ps.points()[i];
            std::pair<Ball, Ball> cs;
            if (const Rat* r = std::get_if<Rat>(&x)) {
                cs = cos_sin_2pi(frac(Rat(m) * *r), w);
            } else {
                cs = cos_sin_2pi(mul(Ball(m), std::get<Ball>(x), w), w);
            }
            re = add(re, cs.first, w);
            im = add(im, cs.second, w);
        }
        partial[blk] = {re, im};
    });
    Ball re(0);
    Ball im(0);
    for (const auto& [r, i] : partial) {
        re = add(re, r, w);
        im = add(im, i, w);
    }
    return modulus(re, im, static_cast<long>(ps.size()), w).with_prec(prec);
}

namespace {

Dyadic exact_dyadic(double x)
{
    int e = 0;
    const double f = std::frexp(x, &e);
    return Dyadic(BigInt(static_cast<long>(std::ldexp(f, 53))), e - 53);
}

// Midpoint-radius evaluation in doubles. Every midpoint carries a radius
// that bounds its distance to the true value; radii are pushed up by a
// relative 2^-40 to absorb rounding in their own computation.
std::vector<Ball> exp_sums_fast(const PointSet& ps, std::size_t L, long prec)
{
    constexpr double u = 0x1p-53;
    constexpr double up = 1.0 + 0x1p-40;
    const double rho0 = 0x1p-51; // |(c0, s0) - e(x)| after rounding a ball to doubles
    const std::size_t blocks = (ps.size() + kBlock - 1) / kBlock;
    struct Acc {
        std::vector<double> re, im, rad, mag;
    };
    std::vector<Acc> partial(blocks);
    detail::parallel_for(blocks, 0, [&](std::size_t blk) {
        Acc acc{std::vector<double>(L, 0.0), std::vector<double>(L, 0.0), std::vector<double>(L, 0.0),
                std::vector<double>(L, 0.0)};
        const std::size_t end = std::min(ps.size(), (blk + 1) * kBlock);
        for (std::size_t i = blk * kBlock; i < end; ++i) {
            auto [cb, sb] = phase(ps.points()[i], 64);
            const Dyadic tol(BigInt(1), -56);
            if (tol < cb.width() || tol < sb.width()) {
                std::tie(cb, sb) = phase(ps.points()[i], prec + 64);
            }
            const double c0 = cb.mid().to_double();
            const double s0 = sb.mid().to_double();
            double zr = c0;
            double zi = s0;
            double err = rho0;
            for (std::size_t m = 0; m < L; ++m) {
                acc.re[m] += zr;
                acc.im[m] += zi;
                acc.rad[m] += err;
                acc.mag[m] += 1.0 + err;
                const double nr = zr * c0 - zi * s0;
                const double ni = zr * s0 + zi * c0;
                // |fl(z c0) - z c0| <= 4u |z||c0|, |z c0 - Z e(x)| <= |z| rho0 + E
                err = (err + (1.0 + err) * ((1.0 + rho0) * 4.0 * u + rho0)) * up;
                zr = nr;
                zi = ni;
            }
        }
        partial[blk] = std::move(acc);
    });
    const double n = static_cast<double>(ps.size());
    const double gamma = (n + 2.0 * static_cast<double>(blocks)) * u / (1.0 - (n + 2.0 * static_cast<double>(blocks)) * u);
    std::vector<Ball> out;
    out.reserve(L);
    for (std::size_t m = 0; m < L; ++m) {
        double re = 0;
        double im = 0;
        double rad = 0;
        double mag = 0;
        for (const auto& a : partial) {
            re += a.re[m];
            im += a.im[m];
            rad += a.rad[m];
            mag += a.mag[m];
        }
        // summation error of both components, then the modulus itself
        const double sum_err = (rad + gamma * mag) * std::sqrt(2.0) * up;
        const double modulus = std::hypot(re, im);
        const double r = (sum_err + 4.0 * u * modulus) * up;
        const Dyadic lo = std::max(exact_dyadic(modulus - r), Dyadic(0));
        const Dyadic hi = std::min(exact_dyadic(modulus + r), Dyadic(static_cast<long>(ps.size())));
        out.emplace_back(std::min(lo, hi), hi, prec);
    }
    return out;
}

std::vector<Ball> exp_sums_exact(const PointSet& ps, std::size_t n, long w, long prec)
{
    const std::size_t blocks = (ps.size() + kBlock - 1) / kBlock;
    std::vector<std::vector<std::pair<Ball, Ball>>> partial(blocks);
    detail::parallel_for(blocks, 0, [&](std::size_t blk) {
        std::vector<std::pair<Ball, Ball>> acc(n, {Ball(0), Ball(0)});
        const std::size_t end = std::min(ps.size(), (blk + 1) * kBlock);
        for (std::size_t i = blk * kBlock; i < end; ++i) {
            const auto [c, s] = phase(ps.points()[i], w);
            Ball zr = c;
            Ball zi = s;
            for (std::size_t m = 0; m < n; ++m) {
                acc[m].first = add(acc[m].first, zr, w);
                acc[m].second = add(acc[m].second, zi, w);
                // z <- z e(x), kept inside the unit square
                const Ball nr = sub(mul(zr, c, w), mul(zi, s, w), w);
                const Ball ni = add(mul(zr, s, w), mul(zi, c, w), w);
                zr = clamp(nr, Dyadic(-1), Dyadic(1));
                zi = clamp(ni, Dyadic(-1), Dyadic(1));
            }
        }
        partial[blk] = std::move(acc);
    });
    std::vector<Ball> out;
    out.reserve(n);
    for (std::size_t m = 0; m < n; ++m) {
        Ball re(0);
        Ball im(0);
        for (const auto& blk : partial) {
            re = add(re, blk[m].first, w);
            im = add(im, blk[m].second, w);
        }
        out.push_back(modulus(re, im, static_cast<long>(ps.size()), w).with_prec(prec));
    }
    return out;
}

} // namespace

std::vector<Ball> exp_sums(const PointSet& ps, long L, long prec)
{
    if (L < 1) {
        throw DomainError("exp_sums needs L >= 1");
    }
    const auto n = static_cast<std::size_t>(L);
    if (prec <= kFastExpSumPrecision && ps.size() < (1u << 30)) {
        return exp_sums_fast(ps, n, prec);
    }
    const long w = prec + 16 + static_cast<long>(bit_length(BigInt(L)));
    return exp_sums_exact(ps, n, w, prec);
}

ETReport et_check(const PointSet& ps, const Rat& a, const Rat& b, long L, long prec, const PrecisionPolicy& policy)
{
    const Rat delta = b - a;
    if (delta.sign() <= 0 || delta >= Rat(1)) {
        throw DomainError("et_check needs 0 < b - a < 1");
    }
    if (L < 1) {
        throw DomainError("et_check needs L >= 1");
    }
    const auto n = static_cast<long>(ps.size());
    const PrecisionPolicy p{std::max(policy.start_bits, prec), policy.max_bits};
    return escalate(p, "Erdos-Turan check", [&](long w) -> std::optional<ETReport> {
        const PointSet pts = ps.at_precision(w);
        ETReport rep;
        rep.L = L;
        for (const Point& x : pts.points()) {
            const auto in = in_interval(x, a, delta, w);
            if (!in) {
                if (!ps.refinable()) {
                    throw UndecidableError("membership of a fixed ball point in the interval", w);
                }
                return std::nullopt;
            }
            rep.count += *in ? 1 : 0;
        }
        rep.expected = Rat(n) * delta;
        rep.lhs = abs(Rat(static_cast<long>(rep.count)) - rep.expected);

        const std::vector<Ball> s = exp_sums(pts, L, w);
        const Ball inv_l1(Rat::reduce(1, L + 1), w);
        const Ball pi = const_pi(w);
        Ball total(0);
        Ball sharp(0);
        for (long m = 1; m <= L; ++m) {
            const Ball& sm = s[static_cast<std::size_t>(m - 1)];
            total = add(total, sm, w);
            const Ball tail = div(Ball(1), mul(pi, Ball(m), w), w);
            // min(delta, 1/(pi m)), decided or hulled
            Ball mn = Ball(delta, w);
            if (const auto lt = less(tail, delta)) {
                mn = *lt ? tail : Ball(delta, w);
            } else {
                mn = Ball::hull(tail, Ball(delta, w));
            }
            sharp = add(sharp, mul(add(inv_l1, mn, w), sm, w), w);
        }
        rep.e_compact = mul(mul(Ball(2), add(inv_l1, Ball(delta, w), w), w), total, w);
        rep.e_sharp = mul(Ball(2), sharp, w);
        rep.rhs = add(Ball(Rat::reduce(n, L + 1), w), rep.e_compact, w);
        if (rep.lhs <= rep.rhs.lo().to_rat()) {
            rep.holds = true;
        } else if (rep.lhs > rep.rhs.hi().to_rat()) {
            rep.holds = false;
        } else {
            return std::nullopt;
        }
        return rep;
    });
}

bool CountReport::within(const Rat& multiplier) const
{
    const Rat diff = abs(Rat(count) - main_term);
    const Ball bound = mul(Ball(multiplier, error_term.prec()), error_term, error_term.prec());
    return diff <= bound.lo().to_rat();
}

Ball counting_error(const BigInt& q, const Rat& delta, long N, long b, const Rat& eta, long prec)
{
    const long w = prec + 16;
    const Ball n(N);
    const Ball d(delta, w);
    const Ball logq = ln_ball(Rat(q), w);
    const Ball main = div(mul(Ball(Rat(2 * N) * delta, w), pow_ball(n, -eta, w), w), Ball(b), w);
    const Ball inner = add(add(div(logq, n, w), Ball(Rat(1) / Rat(q), w), w),
                           div(mul(mul(Ball(q, w), d, w), logq, w), Ball(N * N), w), w);
    const Ball lead = mul(pow_ball(n, Rat(1) + Rat(2) * eta, w), pow_ball(d, -eta, w), w);
    return add(main, mul(lead, sqrt(inner, w), w), w).with_prec(prec);
}

CountReport count_quadratic(const BigInt& p, const BigInt& q, const Rat& r, const Rat& delta, long N, long a, long b,
                            CountMethod method, const Rat& eta)
{
    if (q < 1) {
        throw DomainError("count_quadratic needs q >= 1");
    }
    if (gcd(p, q) != 1) {
        throw DomainError("count_quadratic needs gcd(p, q) = 1");
    }
    if (delta.sign() <= 0 || delta >= Rat::reduce(1, 2)) {
        throw DomainError("count_quadratic needs 0 < delta < 1/2");
    }
    if (N < 1) {
        throw DomainError("count_quadratic needs N >= 1");
    }
    const Congruence c = normalized({a, b});

    CountReport rep;
    rep.p = p;
    rep.q = q;
    rep.r = r;
    rep.delta = delta;
    rep.N = N;
    rep.a = c.a;
    rep.b = c.b;
    rep.eta = eta;
    rep.main_term = Rat(2 * N) * delta / Rat(c.b);
    rep.error_term = counting_error(q, delta, N, c.b, eta);

    const long first = c.a == 0 ? c.b : c.a;
    if (method == CountMethod::table) {
        // ||p n^2/q - r|| = ||X/Y||, X = (p n^2 mod q) rd - q rn, Y = q rd
        const BigInt& rn = r.num();
        const BigInt& rd = r.den();
        const BigInt y = q * rd;
        const bool cache = q <= BigInt(1L << 24);
        std::vector<signed char> table(cache ? q.get_ui() : 0, -1);
        for (long n = first; n <= N; n += c.b) {
            BigInt rho = BigInt(n) % q;
            int cls = -1;
            if (cache) {
                cls = table[rho.get_ui()];
            }
            if (cls < 0) {
                BigInt s;
                mpz_powm_ui(s.get_mpz_t(), rho.get_mpz_t(), 2, q.get_mpz_t());
                s = (s * p) % q;
                cls = classify(BigInt(s * rd - q * rn), y, delta.num(), delta.den());
                if (cache) {
                    table[rho.get_ui()] = static_cast<signed char>(cls);
                }
            }
            rep.count += cls == 1 ? 1 : 0;
            rep.ties += cls == 2 ? 1 : 0;
        }
    } else {
        for (long n = first; n <= N; n += c.b) {
            const Rat d = dist_to_int(Rat(BigInt(p * n * n)) / Rat(q) - r);
            rep.count += d < delta ? 1 : 0;
            rep.ties += d == delta ? 1 : 0;
        }
    }
    return rep;
}

std::optional<bool> m_over_nsq_accepts(const Ball& alpha, const Rat& exponent, const BigInt& m, const BigInt& n,
                                       long prec)
{
    // err < n^(-a/b)  <=>  err^b n^a < 1 (a >= 0), err^b < n^(-a) (a < 0)
    const Ball err = abs(sub(alpha, Ball(Rat(m) / Rat(BigInt(n * n)), prec), prec));
    const BigInt& a = exponent.num();
    const BigInt& b = exponent.den();
    auto ipow = [prec](Ball base, BigInt e) {
        Ball acc(1);
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) {
                acc = mul(acc, base, prec);
            }
            e >>= 1;
            if (e > 0) {
                base = square(base, prec);
            }
        }
        return acc;
    };
    const Ball lhs = ipow(err, b);
    if (a >= 0) {
        return less(mul(lhs, ipow(Ball(n, prec), a), prec), Rat(1));
    }
    return less(lhs, ipow(Ball(n, prec), BigInt(-a)));
}

MOverNSqResult search_m_over_nsq(const AlphaSource& alpha, const Rat& exponent, long n_max, Congruence n_congr,
                                 Congruence m_congr, const PrecisionPolicy& policy)
{
    if (exponent > Rat::reduce(5, 2)) {
        throw DomainError("search_m_over_nsq needs exponent <= 5/2");
    }
    if (n_max < 2) {
        throw DomainError("search_m_over_nsq needs n_max >= 2");
    }
    if (!alpha(policy.start_bits).is_positive()) {
        throw DomainError("search_m_over_nsq needs alpha > 0");
    }
    const Congruence nc = normalized(n_congr);
    const Congruence mc = normalized(m_congr);
    const long first = nc.a == 0 ? nc.b : nc.a;

    std::map<long, Ball> alpha_cache;
    std::mutex alpha_mu;
    auto alpha_at = [&](long w) {
        const std::lock_guard<std::mutex> lock(alpha_mu);
        auto it = alpha_cache.find(w);
        if (it == alpha_cache.end()) {
            it = alpha_cache.emplace(w, alpha(w)).first;
        }
        return it->second;
    };
    const long count = first > n_max ? 0 : (n_max - first) / nc.b + 1;
    const std::size_t blocks = (static_cast<std::size_t>(count) + kBlock - 1) / kBlock;
    std::vector<MOverNSqResult> partial(blocks);
    detail::parallel_for(blocks, 0, [&](std::size_t blk) {
        MOverNSqResult& out = partial[blk];
        const long i_end = std::min<long>(count, static_cast<long>((blk + 1) * kBlock));
        for (long i = static_cast<long>(blk * kBlock); i < i_end; ++i) {
            const BigInt n = first + i * nc.b;
            bool decided = false;
            for (long w = policy.start_bits; w <= policy.max_bits && !decided; w *= 2) {
                const Ball a = alpha_at(w);
                // nearest integer j to (alpha n^2 - a')/b', ties upward
                const Ball x = div(sub(mul(a, Ball(BigInt(n * n), w), w), Ball(mc.a), w), Ball(mc.b), w);
                const Dyadic half(BigInt(1), -1);
                const BigInt j = exact_add(x.lo(), half).floor();
                if (j != exact_add(x.hi(), half).floor()) {
                    continue;
                }
                const BigInt m = mc.a + mc.b * j;
                if (m <= 0) {
                    decided = true;
                    break;
                }
                if (const auto ok = m_over_nsq_accepts(a, exponent, m, n, w)) {
                    decided = true;
                    if (*ok) {
                        out.pairs.emplace_back(m, n);
                    }
                }
            }
            if (!decided) {
                ++out.skipped;
            }
        }
    });
    MOverNSqResult result;
    for (auto& part : partial) {
        std::move(part.pairs.begin(), part.pairs.end(), std::back_inserter(result.pairs));
        result.skipped += part.skipped;
    }
    return result;
}

Ball kprime_gap(long kprime, long d, long prec)
{
    if (kprime < 3 || mod_floor(kprime, 4) != 3) {
        throw DomainError("k' must be >= 3 and = 3 (mod 4)");
    }
    const long k = (kprime - 3) / 2;
    const long w = prec + 16;
    const SubseqEntry entry = subseq_entry(static_cast<std::size_t>(k), w);
    const Ball gap = sub(mul(entry.r, Ball(d * d), w), div(const_sinh1(w), Ball(3), w), w);
    return abs(gap).with_prec(prec);
}

} // namespace nearone
