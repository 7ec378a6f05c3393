#include "doctest.h"
#include "oracle.hpp"

#include "ndt/core.hpp"

#include <random>

using namespace ndt;

TEST_CASE("binomial: examples and out-of-range convention")
{
    CHECK(binomial(4, 2) == 6);
    CHECK(binomial(3, 0) == 1);
    CHECK(binomial(2, 3) == 0);
    CHECK(binomial(5, -1) == 0);
    CHECK(binomial(100, 50).str() == "100891344545564193334812497256");
}

TEST_CASE("binomial: Pascal's rule, exhaustive up to 30")
{
    for (int n = 1; n <= 30; ++n)
        for (int k = 1; k < n; ++k) {
            REQUIRE(binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k));
            REQUIRE(binomial(n, k) == oracle::binom(n, k));
        }
}

TEST_CASE("rational: normalisation after every operation")
{
    CHECK(Rational(6, -4).frac() == "-3/2");
    CHECK(Rational(0, 7).frac() == "0/1");
    CHECK(Rational(4).str() == "4");
    CHECK(Rational(4).frac() == "4/1");

    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> d(-50, 50);
    for (int i = 0; i < 2000; ++i) {
        int a = d(rng), b = d(rng), c = d(rng), e = d(rng);
        if (b == 0 || e == 0) continue;
        Rational x(a, b), y(c, e);
        oracle::Q qx(a, b), qy(c, e);
        REQUIRE(oracle::same(x + y, qx + qy));
        REQUIRE(oracle::same(x - y, qx - qy));
        REQUIRE(oracle::same(x * y, qx * qy));
        if (c != 0) REQUIRE(oracle::same(x / y, qx / qy));
        REQUIRE((x < y) == (qx < qy));
        for (const Rational& r : {x + y, x * y}) {
            REQUIRE(r.den() > 0);
            REQUIRE(boost::multiprecision::gcd(boost::multiprecision::abs(r.num()), r.den()) == 1);
        }
    }
}

TEST_CASE("rational: parse and floor/ceil")
{
    CHECK(Rational::parse("4/5") == Rational(4, 5));
    CHECK(Rational::parse(" 3 ") == Rational(3));
    CHECK(Rational::parse("-2/6") == Rational(-1, 3));
    CHECK_THROWS_AS(Rational::parse("0.5"), Error);
    CHECK_THROWS_AS(Rational::parse("1/0"), Error);
    CHECK_THROWS_AS(Rational::parse(""), Error);
    CHECK_THROWS_AS(Rational::parse("1/"), Error);
    CHECK(Rational(7, 2).floor() == 3);
    CHECK(Rational(7, 2).ceil() == 4);
    CHECK(Rational(-7, 2).floor() == -4);
    CHECK(Rational(-7, 2).ceil() == -3);
    CHECK(Rational(3).ceil() == 3);
}

TEST_CASE("rational: no overflow on large products")
{
    Rational x(1);
    for (int i = 1; i <= 40; ++i) x *= Rational(i * 1000003LL, 7);
    CHECK(x / x == Rational(1));
    CHECK(x > Rational(1));
}

TEST_CASE("validate_config")
{
    NetworkConfig ok{2, 2, 4, Rational(4, 9)};
    CHECK(validate_config(ok).mu == Rational(4, 9));

    try {
        validate_config({1, 3, 3, Rational(1, 2)});
        FAIL("expected InvalidConfig");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidConfig);
        CHECK(e.field() == "N");
    }
    try {
        validate_config({1, 1, 2, Rational(3, 2)});
        FAIL("expected InvalidConfig");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidConfig);
        CHECK(e.field() == "mu");
    }
    CHECK_THROWS_AS(validate_config({1, 1, 2, Rational(-1, 2)}), Error);
}

TEST_CASE("discrete_cache_grid")
{
    CHECK(discrete_cache_grid(2) == std::vector<Rational>{0, Rational(1, 2), 1});
    CHECK(discrete_cache_grid(3) == std::vector<Rational>{0, Rational(1, 3), Rational(2, 3), 1});
    CHECK(discrete_cache_grid(1) == std::vector<Rational>{0, 1});
    for (int M = 1; M <= 12; ++M) {
        auto g = discrete_cache_grid(M);
        REQUIRE(g.size() == static_cast<std::size_t>(M + 1));
        CHECK(g.front() == Rational(0));
        CHECK(g.back() == Rational(1));
        for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i - 1] < g[i]);
    }
}
