#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "xyqfi/signed_log.hpp"
#include "xyqfi/polygamma.hpp"
#include "xyqfi/jet.hpp"

using namespace xyqfi;

namespace {
// 50-digit reference values (order, x, psi^(order)(x))
struct PgRef { int n; double x; double val; };
const PgRef kPgTable[] = {
    {1, 0.05, 401.5323573421151193085}, {1, 0.1, 101.4332991507927588172},
    {1, 0.5, 4.934802200544679309417},  {1, 1.0, 1.644934066848226436472},
    {1, 1.5, 0.9348022005446793094172}, {1, 2.5, 0.4903577561002348649728},
    {1, 5.0, 0.2213229557371153253613}, {1, 10.0, 0.1051663356816857461222},
    {1, 25.0, 0.04081066325722557918736}, {1, 50.0, 0.02020133322669712580597},
    {2, 0.05, -16002.10815802194543319}, {2, 0.1, -2001.861457378344006314},
    {2, 0.5, -16.8287966442343199956},   {2, 1.0, -2.404113806319188570799},
    {2, 1.5, -0.8287966442343199955963}, {2, 2.5, -0.2362040516417274030037},
    {2, 5.0, -0.0487897322451144967254}, {2, 10.0, -0.0110498349708020674621},
    {2, 25.0, -0.001665279318422468165429}, {2, 50.0, -0.000408079989337596931408},
    {3, 0.05, 960005.388322313195287},  {3, 0.1, 60004.51287679026670703},
    {3, 0.5, 97.40909103400243723644},  {3, 1.0, 6.493939402266829149096},
    {3, 1.5, 1.40909103400243723644},   {3, 2.5, 0.2239058488172520512551},
    {3, 5.0, 0.02142782819275507502195}, {3, 10.0, 0.002319901304289868385558},
    {3, 25.0, 0.0001358846365082737040312}, {3, 50.0, 0.00001648639872068205308436},
};
}  // namespace

TEST_CASE("polygamma matches high-precision references") {
    for (const auto& r : kPgTable) {
        double got = polygamma(r.n, r.x);
        CHECK(std::fabs(got - r.val) <= 1e-13 * std::fabs(r.val));
    }
}

TEST_CASE("polygamma closed identities") {
    const double pi = 3.14159265358979323846;
    CHECK(std::fabs(polygamma(1, 1.0) - pi * pi / 6.0) <= 1e-12 * (pi * pi / 6.0));
    CHECK(std::fabs(polygamma(1, 0.5) - pi * pi / 2.0) <= 1e-12 * (pi * pi / 2.0));
    const double zeta3 = 1.2020569031595942854;
    CHECK(std::fabs(polygamma(2, 1.0) + 2.0 * zeta3) <= 1e-12 * 2.0 * zeta3);
    // psi^(3)(1) = pi^4/15
    CHECK(std::fabs(polygamma(3, 1.0) - pi * pi * pi * pi / 15.0) <= 1e-12 * 6.5);
}

TEST_CASE("polygamma recurrence residual across [0.05, 50]") {
    for (int n = 1; n <= 3; ++n) {
        double fact = (n == 1) ? 1.0 : (n == 2) ? 2.0 : 6.0;
        double sg = (n % 2) ? 1.0 : -1.0;
        for (double x = 0.05; x <= 50.0; x += 0.173) {
            double lhs = polygamma(n, x);
            double rhs = polygamma(n, x + 1.0) + sg * fact / std::pow(x, n + 1);
            CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::fabs(lhs));
        }
    }
}

TEST_CASE("signed log encode/decode round trip") {
    // storing ln|x| as a double costs 0.5 ulp of the log, which decode
    // amplifies by |ln x|*eps — about 2.4e-14 relative at |x| = 1e300.
    for (double x : {1e-12, 0.5, 1.0, 3.75, 1e12}) {
        for (double s : {1.0, -1.0}) {
            SignedLog e = sl_encode(s * x);
            CHECK(std::fabs(sl_decode(e) - s * x) <= 1e-14 * x);
        }
    }
    for (double x : {1e-300, 1e300}) {
        SignedLog e = sl_encode(x);
        CHECK(std::fabs(sl_decode(e) - x) <= 3e-14 * x);
    }
    CHECK(sl_encode(0.0).sign == 0);
    CHECK(sl_decode(SignedLog::zero()) == 0.0);
}

TEST_CASE("signed log products") {
    auto two = sl_encode(2.0), three = sl_encode(3.0);
    CHECK(sl_decode(sl_mul(two, three)) == Catch::Approx(6.0).epsilon(1e-14));
    auto m5 = sl_encode(-5.0), m2 = sl_encode(-2.0);
    auto p = sl_mul(m5, m2);
    CHECK(p.sign == +1);
    CHECK(sl_decode(p) == Catch::Approx(10.0).epsilon(1e-14));
    CHECK(sl_mul(SignedLog::zero(), sl_encode(7.0)).sign == 0);
}

TEST_CASE("signed log sums") {
    CHECK(sl_decode(sl_sum({sl_encode(1.0), sl_encode(1.0)})) == Catch::Approx(2.0));
    CHECK(sl_decode(sl_sum({sl_encode(3.0), sl_encode(-1.0)})) == Catch::Approx(2.0));
    auto z = sl_sum({sl_encode(4.0), sl_encode(-4.0)});
    CHECK(z.sign == 0);
    // permutation invariance
    std::mt19937_64 rng(11);
    std::vector<SignedLog> terms;
    for (int i = 0; i < 20; ++i)
        terms.push_back(sl_encode((double(rng() >> 11) / 9007199254740992.0 - 0.4) * std::pow(10.0, int(rng() % 6))));
    double ref = sl_decode(sl_sum(std::span<const SignedLog>(terms)));
    std::shuffle(terms.begin(), terms.end(), rng);
    double alt = sl_decode(sl_sum(std::span<const SignedLog>(terms)));
    CHECK(std::fabs(ref - alt) <= 1e-14 * std::max(std::fabs(ref), 1.0));
}

TEST_CASE("log_2cosh monotone and bounded below by 2") {
    double prev = 0.0;
    bool first = true;
    for (double x = 1e-8; x <= 700.0; x *= 3.1) {
        double v = log_2cosh(x);
        CHECK(v >= std::log(2.0) - 1e-15);
        if (!first) CHECK(v > prev);
        prev = v;
        first = false;
    }
}

TEST_CASE("log_coth pairs with cosh/sinh difference") {
    // the naive difference cancels catastrophically at large x; the pairwise
    // form is the accurate one, so only consistency is checked here
    for (double x : {0.3, 1.0, 2.0, 7.5, 20.0}) {
        double direct = log_2cosh(x) - log_2sinh(x).log_mag;
        CHECK(log_coth_abs(x) == Catch::Approx(direct).epsilon(1e-6).margin(1e-13));
    }
    CHECK(std::isinf(log_coth_abs(0.0)));
}

TEST_CASE("jet arithmetic basics") {
    Jet2 x = Jet2::variable(3.0);
    Jet2 sq = x * x;
    CHECK(sq.v == 9.0); CHECK(sq.d1 == 6.0); CHECK(sq.d2 == 2.0);

    Jet2 c = Jet2::constant(1.0) + Jet2::variable(2.0);
    CHECK(c.v == 3.0); CHECK(c.d1 == 1.0); CHECK(c.d2 == 0.0);

    Jet2 r = Jet2::variable(5.0) / Jet2::variable(5.0);
    CHECK(r.v == 1.0); CHECK(r.d1 == 0.0); CHECK(r.d2 == 0.0);
}

TEST_CASE("jet elementary functions") {
    Jet2 e = jet_exp(Jet2::variable(0.0));
    CHECK(e.v == 1.0); CHECK(e.d1 == 1.0); CHECK(e.d2 == 1.0);

    Jet2 s = jet_sqrt(Jet2::variable(4.0));
    CHECK(s.v == 2.0);
    CHECK(s.d1 == Catch::Approx(0.25));
    // d^2 sqrt(x)/dx^2 = -x^{-3/2}/4 = -1/32 at x = 4
    CHECK(s.d2 == Catch::Approx(-0.03125));

    Jet2 th = jet_atan2(Jet2::constant(0.0), Jet2::variable(1.0));
    CHECK(th.v == 0.0); CHECK(th.d1 == 0.0); CHECK(th.d2 == 0.0);

    CHECK_THROWS(jet_atan2(Jet2::constant(0.0), Jet2::constant(0.0)));
    CHECK_THROWS(jet_log(Jet2::constant(0.0)));
}

TEST_CASE("jet trigamma chain") {
    Jet2 p = jet_polygamma1(Jet2::constant(1.0));
    CHECK(p.d1 == 0.0);
    CHECK(p.d2 == 0.0);
    const double pi = 3.14159265358979323846;
    CHECK(p.v == Catch::Approx(pi * pi / 6.0).epsilon(1e-13));

    Jet2 q = jet_polygamma1(Jet2::variable(1.0));
    CHECK(q.d1 == Catch::Approx(-2.404113806319188570799).epsilon(1e-12));
    CHECK(q.d2 == Catch::Approx(pi * pi * pi * pi / 15.0).epsilon(1e-12));
}

namespace {
// 5-point central differences with one Richardson step, used throughout the
// suite as the independent derivative oracle
template <class F>
double fd1(F f, double x, double h) {
    return (8.0 * (f(x + h) - f(x - h)) - (f(x + 2 * h) - f(x - 2 * h))) / (12.0 * h);
}
template <class F>
double fd2(F f, double x, double h) {
    return (-(f(x + 2 * h) + f(x - 2 * h)) + 16.0 * (f(x + h) + f(x - h)) - 30.0 * f(x)) / (12.0 * h * h);
}
}  // namespace

TEST_CASE("jets agree with Richardson finite differences on composites") {
    std::mt19937_64 rng(20240);
    auto uni = [&](double lo, double hi) {
        return lo + (hi - lo) * (double(rng() >> 11) / 9007199254740992.0);
    };
    for (int trial = 0; trial < 50; ++trial) {
        double x0 = uni(0.3, 3.0);
        double a = uni(0.5, 2.0), b = uni(0.2, 1.5);
        // a composite with every elementary in play
        auto f = [&](double x) {
            return std::log(2.0 * std::cosh(a * x)) + std::exp(-b * x) * std::sin(x) +
                   std::atan2(b * x, 1.0 + a * x * x);
        };
        Jet2 x = Jet2::variable(x0);
        Jet2 jf = jet_log_2cosh(a * x) + jet_exp(-b * x) * jet_sin(x) +
                  jet_atan2(b * x, 1.0 + a * (x * x));
        CHECK(jf.v == Catch::Approx(f(x0)).epsilon(1e-12));
        CHECK(jf.d1 == Catch::Approx(fd1(f, x0, 1e-3)).epsilon(1e-8).margin(1e-10));
        CHECK(jf.d2 == Catch::Approx(fd2(f, x0, 1e-3)).epsilon(1e-6).margin(1e-8));
    }
}
