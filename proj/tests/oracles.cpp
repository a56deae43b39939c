#include "oracles.hpp"

#include <mpfr.h>

namespace oracle_ref {

namespace {

Rat to_rat(mpfr_t x)
{
    BigInt m;
    const mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x);
    return nearone::Dyadic(m, static_cast<long>(e)).to_rat();
}

void set_rat(mpfr_t out, const Rat& r, mpfr_rnd_t rnd)
{
    mpfr_set_q(out, r.raw().get_mpq_t(), rnd);
}

template <class F>
Bracket bracket(long bits, F&& f)
{
    mpfr_t lo, hi;
    mpfr_init2(lo, bits);
    mpfr_init2(hi, bits);
    f(lo, MPFR_RNDD);
    f(hi, MPFR_RNDU);
    Bracket b{to_rat(lo), to_rat(hi)};
    mpfr_clear(lo);
    mpfr_clear(hi);
    return b;
}

} // namespace

Bracket ln(const Rat& r, long bits)
{
    // ln is increasing, so rounding the argument in the same direction as
    // the result keeps the bracket rigorous.
    return bracket(bits, [&](mpfr_t out, mpfr_rnd_t rnd) {
        mpfr_t x;
        mpfr_init2(x, bits + 64);
        set_rat(x, r, rnd);
        mpfr_log(out, x, rnd);
        mpfr_clear(x);
    });
}

Bracket exp(const Rat& r, long bits)
{
    return bracket(bits, [&](mpfr_t out, mpfr_rnd_t rnd) {
        mpfr_t x;
        mpfr_init2(x, bits + 64);
        set_rat(x, r, rnd);
        mpfr_exp(out, x, rnd);
        mpfr_clear(x);
    });
}

Bracket e(long bits)
{
    return exp(Rat(1), bits);
}

Bracket sinh1(long bits)
{
    return bracket(bits, [&](mpfr_t out, mpfr_rnd_t rnd) {
        mpfr_t x;
        mpfr_init2(x, 8);
        mpfr_set_ui(x, 1, MPFR_RNDN);
        mpfr_sinh(out, x, rnd);
        mpfr_clear(x);
    });
}

Bracket pi(long bits)
{
    return bracket(bits, [](mpfr_t out, mpfr_rnd_t rnd) { mpfr_const_pi(out, rnd); });
}

namespace {

Bracket trig2pi(const Rat& x, long bits, bool cosine)
{
    mpfr_t t, out;
    mpfr_init2(t, bits + 32);
    mpfr_init2(out, bits);
    mpfr_const_pi(t, MPFR_RNDN);
    mpfr_t q;
    mpfr_init2(q, bits + 32);
    set_rat(q, x, MPFR_RNDN);
    mpfr_mul(t, t, q, MPFR_RNDN);
    mpfr_mul_ui(t, t, 2, MPFR_RNDN);
    if (cosine) {
        mpfr_cos(out, t, MPFR_RNDN);
    } else {
        mpfr_sin(out, t, MPFR_RNDN);
    }
    const Rat v = to_rat(out);
    BigInt scale = 1;
    mpz_mul_2exp(scale.get_mpz_t(), scale.get_mpz_t(), static_cast<mp_bitcnt_t>(bits - 8));
    const Rat eps = Rat::reduce(1, scale);
    mpfr_clear(t);
    mpfr_clear(q);
    mpfr_clear(out);
    return {v - eps, v + eps};
}

} // namespace

Bracket cos2pi(const Rat& x, long bits)
{
    return trig2pi(x, bits, true);
}

Bracket sin2pi(const Rat& x, long bits)
{
    return trig2pi(x, bits, false);
}

Rat harmonic_left_fold(long n, long m)
{
    BigInt num = 0;
    BigInt den = 1;
    for (long l = n; l <= m; ++l) {
        num = num * l + den;
        den *= l;
    }
    return Rat::reduce(num, den);
}

bool close(const nearone::Ball& b, const Bracket& ref, const Rat& slack)
{
    return b.lo().to_rat() >= ref.lo - slack && b.hi().to_rat() <= ref.hi + slack;
}

} // namespace oracle_ref
