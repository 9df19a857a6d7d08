#include <gtest/gtest.h>

#include <cstdint>
#include <random>

#include "dchaos/rational.hpp"

using dchaos::Rational;

TEST(Rational, NormalizesSignAndGcd) {
    const Rational r(6, -8);
    EXPECT_EQ(r.num(), -3);
    EXPECT_EQ(r.den(), 4);
    EXPECT_EQ(Rational(0, -5).den(), 1);
    EXPECT_THROW(Rational(1, 0), std::domain_error);
}

TEST(Rational, ParsesNumDenStrings) {
    EXPECT_EQ(Rational::parse("3/6"), Rational(1, 2));
    EXPECT_EQ(Rational::parse(" -2/4 "), Rational(-1, 2));
    EXPECT_EQ(Rational::parse("7"), Rational(7));
    EXPECT_EQ(Rational::parse("+13/10"), Rational(13, 10));
    EXPECT_THROW(Rational::parse("1/0"), std::invalid_argument);
    EXPECT_THROW(Rational::parse("abc"), std::invalid_argument);
    EXPECT_THROW(Rational::parse("1/2/3"), std::invalid_argument);
    EXPECT_THROW(Rational::parse(""), std::invalid_argument);
}

TEST(Rational, RoundTripsThroughStr) {
    for (const char* s : {"0", "1/2", "-5/7", "123456789/1000000007"}) EXPECT_EQ(Rational::parse(s).str(), s);
}

TEST(Rational, FloorAndFrac) {
    EXPECT_EQ(dchaos::floor(Rational(-1, 2)), -1);
    EXPECT_EQ(dchaos::floor(Rational(7, 2)), 3);
    EXPECT_EQ(dchaos::floor(Rational(-4, 2)), -2);
    EXPECT_EQ(dchaos::frac(Rational(-1, 4)), Rational(3, 4));
    EXPECT_EQ(dchaos::frac(Rational(9, 4)), Rational(1, 4));
    EXPECT_EQ(dchaos::frac(Rational(1)), Rational(0));
}

TEST(Rational, DetectsOverflow) {
    const Rational big(INT64_MAX);
    EXPECT_THROW(big + Rational(1), std::overflow_error);
    EXPECT_THROW(big * Rational(2), std::overflow_error);
    // Intermediates wider than 64 bits are fine when the result fits.
    EXPECT_EQ(big * Rational(1, 3) * Rational(3), big);
}

// Arithmetic against cross-multiplication in 128-bit integers.
TEST(Rational, RandomArithmeticMatchesWideOracle) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> num(-100000, 100000);
    std::uniform_int_distribution<std::int64_t> den(1, 100000);
    for (int t = 0; t < 5000; ++t) {
        const std::int64_t an = num(rng), ad = den(rng), bn = num(rng), bd = den(rng);
        const Rational a(an, ad), b(bn, bd);
        const auto same = [](const Rational& r, __int128 n, __int128 d) {
            return static_cast<__int128>(r.num()) * d == n * static_cast<__int128>(r.den());
        };
        EXPECT_TRUE(same(a + b, static_cast<__int128>(an) * bd + static_cast<__int128>(bn) * ad,
                         static_cast<__int128>(ad) * bd));
        EXPECT_TRUE(same(a - b, static_cast<__int128>(an) * bd - static_cast<__int128>(bn) * ad,
                         static_cast<__int128>(ad) * bd));
        EXPECT_TRUE(same(a * b, static_cast<__int128>(an) * bn, static_cast<__int128>(ad) * bd));
        const __int128 lhs = static_cast<__int128>(an) * bd;
        const __int128 rhs = static_cast<__int128>(bn) * ad;
        EXPECT_EQ(a < b, lhs < rhs);
        EXPECT_EQ(a == b, lhs == rhs);
        const Rational f = dchaos::frac(a);
        EXPECT_GE(f, Rational(0));
        EXPECT_LT(f, Rational(1));
        EXPECT_EQ((a - f).den(), 1);
    }
}
