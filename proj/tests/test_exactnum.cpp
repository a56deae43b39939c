#include <random>
#include <vector>

#include "doctest.h"
#include "nearone/exactnum.hpp"
#include "oracles.hpp"

using namespace nearone;

namespace {

Rat q(long n, long d)
{
    return Rat::reduce(n, d);
}

Dyadic pow2(long e)
{
    return Dyadic(BigInt(1), e);
}

bool width_at_most(const Ball& b, const Rat& bound)
{
    return b.width().to_rat() <= bound;
}

Rat two_pow(long e)
{
    return pow2(e).to_rat();
}

} // namespace

TEST_CASE("rat_reduce normalizes sign and gcd")
{
    CHECK(rat_reduce(6, -4).to_string() == "-3/2");
    CHECK(rat_reduce(0, 7).to_string() == "0/1");
    // gcd(579, 213) = 3 by Euclid: 579 = 2*213 + 153, 213 = 153 + 60, ...
    CHECK(rat_reduce(579, 213).to_string() == "193/71");
    CHECK_THROWS_AS(rat_reduce(1, 0), DomainError);
    CHECK_THROWS_AS(Rat(1) / Rat(0), DomainError);
}

TEST_CASE("ball_op examples")
{
    const Ball one(1);
    const Ball two = ball_op(BallOp::add, one, one, 64);
    CHECK(two.lo() == Dyadic(2));
    CHECK(two.hi() == Dyadic(2));

    const long prec = 64;
    const Ball r = ball_op(BallOp::sqrt, Ball(4), std::nullopt, prec);
    CHECK(r.contains(Rat(2)));
    CHECK(width_at_most(r, two_pow(1 - prec) * Rat(2)));

    const Ball third = ball_op(BallOp::div, one, Ball(3), 64);
    CHECK(third.contains(q(1, 3)));
    CHECK(width_at_most(third, two_pow(-62)));

    const Ball s2 = sqrt(Ball(2), 100);
    CHECK(less(mul(s2, s2, 200), Rat(2)) == std::nullopt); // contains 2
    CHECK(mul(s2, s2, 200).contains(Rat(2)));
}

TEST_CASE("ball_op error paths")
{
    const Ball straddle(Dyadic(-1), Dyadic(1), 64);
    CHECK_THROWS_AS(div(Ball(1), straddle, 64), UndecidableError);
    CHECK_THROWS_AS(div(Ball(1), Ball(0), 64), UndecidableError);
    CHECK_THROWS_AS(sqrt(Ball(-4), 64), DomainError);
    CHECK_THROWS_AS(ball_op(BallOp::mul, Ball(1), std::nullopt, 64), std::invalid_argument);
}

TEST_CASE("ball from rational and decimal rendering")
{
    const Ball b(q(1, 3), 64);
    CHECK(b.to_string(10) == "[3.333333333e-01, 3.333333334e-01]");
    CHECK(Ball(q(-1, 3), 64).to_string(4) == "[-3.334e-01, -3.333e-01]");
    CHECK(Ball(Rat(1000), 64).to_string(3) == "[1.00e+03, 1.00e+03]");
    CHECK(Ball(q(1, 2), 8).lo() == Ball(q(1, 2), 8).hi()); // dyadic stays a point
}

TEST_CASE("ln_ball")
{
    CHECK(ln_ball(Rat(1), 64).lo() == Dyadic(0));
    CHECK(ln_ball(Rat(1), 64).hi() == Dyadic(0));

    for (long prec : {48L, 64L, 128L}) {
        const Ball l2 = ln_ball(Rat(2), prec);
        CHECK(l2.lo().to_rat() >= q(6931471805, 10000000000));
        CHECK(l2.hi().to_rat() <= q(6931471806, 10000000000));
        CHECK(oracle_ref::ln(Rat(2)).inside(l2));
    }

    const Ball l = ln_ball(q(289, 106), 64);
    // ln(289/106) = 1.00298759..., i.e. 1.0029876 to seven decimals
    CHECK(l.lo().to_rat() > q(100298755, 100000000));
    CHECK(l.hi().to_rat() < q(100298765, 100000000));
    CHECK(oracle_ref::ln(q(289, 106)).inside(l));
    const Ball diff = ln_ball(Rat(289), 64) - ln_ball(Rat(106), 64);
    CHECK(diff.overlaps(l));

    CHECK_THROWS_AS(ln_ball(Rat(0), 64), DomainError);
    CHECK_THROWS_AS(ln_ball(Rat(-3), 64), DomainError);
}

TEST_CASE("ln_ball width and soundness over random rationals")
{
    std::mt19937_64 rng(20261018);
    std::uniform_int_distribution<long> num(1, 1000000);
    std::uniform_int_distribution<long> den(1, 1000000);
    for (int i = 0; i < 300; ++i) {
        const Rat r = q(num(rng), den(rng));
        const long prec = 48 + static_cast<long>(i % 5) * 40;
        const Ball b = ln_ball(r, prec);
        CHECK(width_at_most(b, two_pow(4 - prec)));
        CHECK(oracle_ref::ln(r).inside(b));
    }
}

TEST_CASE("constants")
{
    const Ball e64 = const_e(64);
    CHECK(e64.contains(q(2718281828459045, 1000000000000000)) == false); // truncation below e
    CHECK(oracle_ref::e().inside(e64));
    CHECK(e64.lo().to_rat() < q(27182818284590453, 10000000000000000));
    CHECK(e64.hi().to_rat() > q(27182818284590452, 10000000000000000));

    const Ball s = const_sinh1(64);
    CHECK(oracle_ref::sinh1().inside(s));
    CHECK(s.lo().to_rat() < q(11752011937, 10000000000));
    CHECK(s.hi().to_rat() > q(11752011936, 10000000000));

    const Constants c = Constants::at(64);
    CHECK(c.y_star.lo().to_rat() > q(9793343, 100000000));
    CHECK(c.y_star.hi().to_rat() < q(9793344, 100000000));
    CHECK(oracle_ref::pi().inside(const_pi(100)));

    for (long prec : {32L, 64L, 200L, 1000L}) {
        const Constants k = Constants::at(prec);
        for (const Ball* b : {&k.e, &k.sinh1, &k.y_star, &k.target, &k.alpha}) {
            CHECK(width_at_most(*b, two_pow(1 - prec) * b->mag().to_rat()));
        }
    }
}

TEST_CASE("const_e refines monotonically")
{
    for (long p1 : {32L, 40L, 64L, 100L, 256L}) {
        for (long extra : {8L, 9L, 30L, 200L}) {
            CHECK(const_e(p1).contains(const_e(p1 + extra)));
        }
    }
}

TEST_CASE("exp_ball and pow_ball against MPFR")
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> num(-5000, 5000);
    std::uniform_int_distribution<long> den(1, 997);
    for (int i = 0; i < 200; ++i) {
        const Rat r = q(num(rng), den(rng));
        const Ball b = exp_ball(r, 96);
        CHECK(oracle_ref::exp(r).inside(b));
        CHECK(width_at_most(b, two_pow(-90) * b.mag().to_rat()));
    }
    const Ball root2 = pow_ball(Ball(2), q(1, 2), 80);
    CHECK(root2.overlaps(sqrt(Ball(2), 80)));
    const Ball cube = pow_ball(Ball(3), Rat(3), 80);
    CHECK(cube.contains(Rat(27)));
}

TEST_CASE("cos_sin_2pi against MPFR")
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> num(-100000, 100000);
    std::uniform_int_distribution<long> den(1, 9973);
    const Rat slack = two_pow(-300);
    for (int i = 0; i < 200; ++i) {
        const Rat x = q(num(rng), den(rng));
        auto [c, s] = cos_sin_2pi(x, 128);
        CHECK(c.overlaps(Ball(oracle_ref::cos2pi(x).lo, 400)));
        CHECK(s.overlaps(Ball(oracle_ref::sin2pi(x).lo, 400)));
        CHECK(width_at_most(c, two_pow(-120)));
        (void)slack;
    }
    auto [c0, s0] = cos_sin_2pi(q(1, 2), 64);
    CHECK(c0.contains(Rat(-1)));
    CHECK(s0.contains(Rat(0)));
    auto [c4, s4] = cos_sin_2pi(q(1, 4), 64);
    CHECK(c4.contains(Rat(0)));
    CHECK(s4.contains(Rat(1)));
}

namespace {

struct Pair {
    Rat exact;
    Ball ball;
};

} // namespace

TEST_CASE("containment: exact results lie inside ball results")
{
    std::mt19937_64 rng(314159);
    std::uniform_int_distribution<long> num(-1000, 1000);
    std::uniform_int_distribution<long> den(1, 1000);
    std::uniform_int_distribution<int> opd(0, 4);
    const long precs[] = {32, 53, 64, 128};
    int checked = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const long prec = precs[trial % 4];
        const Rat r0 = q(num(rng), den(rng));
        Pair acc{r0, Ball(r0, prec)};
        for (int step = 0; step < 4; ++step) {
            const Rat r = q(num(rng), den(rng));
            const Ball rb(r, prec);
            switch (opd(rng)) {
            case 0: acc = {acc.exact + r, ball_op(BallOp::add, acc.ball, rb, prec)}; break;
            case 1: acc = {acc.exact - r, ball_op(BallOp::sub, acc.ball, rb, prec)}; break;
            case 2: acc = {acc.exact * r, ball_op(BallOp::mul, acc.ball, rb, prec)}; break;
            case 3:
                if (r.sign() != 0 && rb.excludes_zero()) {
                    acc = {acc.exact / r, ball_op(BallOp::div, acc.ball, rb, prec)};
                }
                break;
            default: {
                // sqrt(x^2) == |x| exactly
                const Ball sq = square(acc.ball, prec);
                acc = {abs(acc.exact), ball_op(BallOp::sqrt, sq, std::nullopt, prec)};
                break;
            }
            }
        }
        CHECK(acc.ball.contains(acc.exact));
        ++checked;
    }
    CHECK(checked == 10000);
}

TEST_CASE("width contract: doubling precision at least halves width")
{
    std::mt19937_64 rng(2718);
    std::uniform_int_distribution<long> num(1, 1000);
    std::uniform_int_distribution<long> den(1, 1000);
    std::uniform_int_distribution<int> opd(0, 4);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::pair<int, Rat>> ops;
        const Rat r0 = q(num(rng), den(rng));
        for (int i = 0; i < 6; ++i) {
            ops.emplace_back(opd(rng), q(num(rng), den(rng)));
        }
        auto run = [&](long prec) {
            Ball acc(r0, prec);
            for (const auto& [op, r] : ops) {
                const Ball rb(r, prec);
                switch (op) {
                case 0: acc = add(acc, rb, prec); break;
                case 1: acc = sub(acc, rb, prec); break;
                case 2: acc = mul(acc, rb, prec); break;
                case 3: acc = div(acc, rb, prec); break;
                default: acc = sqrt(abs(acc), prec); break;
                }
            }
            return acc.width().to_rat();
        };
        for (long p : {40L, 64L, 100L}) {
            CHECK(run(2 * p) <= run(p) / Rat(2));
        }
    }
}

TEST_CASE("escalate doubles precision and gives up at the cap")
{
    std::vector<long> seen;
    const long got = escalate(PrecisionPolicy{64, 1024}, "test", [&](long prec) -> std::optional<long> {
        seen.push_back(prec);
        if (prec >= 256) {
            return prec;
        }
        return std::nullopt;
    });
    CHECK(got == 256);
    CHECK(seen == std::vector<long>{64, 128, 256});
    CHECK_THROWS_AS(escalate(PrecisionPolicy{64, 200}, "never",
                             [](long) -> std::optional<int> { return std::nullopt; }),
                    UndecidableError);
}
