#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "dchaos/chaoscore.hpp"
#include "dchaos/telescope.hpp"

using namespace dchaos;

TEST(CircleDistance, Examples) {
    EXPECT_EQ(circle_distance(Angle(1, 10), Angle(9, 10)), Rational(1, 5));
    EXPECT_EQ(circle_distance(Angle(3, 7), Angle(3, 7)), Rational(0));
    EXPECT_EQ(circle_distance(Angle(0, 1), Angle(1, 2)), Rational(1, 2));
    EXPECT_EQ(Angle(5, 4).value(), Rational(1, 4));
    EXPECT_EQ(Angle(-1, 3).value(), Rational(2, 3));
}

TEST(EmpiricalFraction, Examples) {
    const DistanceSeries<Rational> alt({0, 1, 0, 1});
    EXPECT_EQ(empirical_fraction(alt, 4, Rational(1, 2)), Rational(1, 2));
    const DistanceSeries<Rational> zeros(std::vector<Rational>(9, Rational(0)));
    for (std::size_t m = 1; m <= 9; ++m) EXPECT_EQ(empirical_fraction(zeros, m, Rational(1, 1000)), Rational(1));
    EXPECT_THROW(empirical_fraction(alt, 0, Rational(1)), std::out_of_range);
    EXPECT_THROW(empirical_fraction(alt, 5, Rational(1)), std::out_of_range);
}

TEST(DistanceSeries, RejectsNegativeDistances) {
    EXPECT_THROW(DistanceSeries<Rational>({Rational(1), Rational(-1)}), std::invalid_argument);
}

TEST(Profile, ConstantSeries) {
    const DistanceSeries<Rational> ones(std::vector<Rational>(20, Rational(1)));
    const auto p = build_profile(ones, {Rational(1, 2), Rational(2)}, {5, 10, 20}, 0);
    EXPECT_EQ(p.lower[0], Rational(0));
    EXPECT_EQ(p.upper[0], Rational(0));
    EXPECT_EQ(p.lower[1], Rational(1));
    EXPECT_EQ(p.upper[1], Rational(1));
}

TEST(Profile, SingleCheckpointCollapsesEnvelopes) {
    const DistanceSeries<Rational> s({0, 2, 1, 3, 0, 0, 5});
    const auto p = build_profile(s, {Rational(1), Rational(4)}, {7}, 0);
    EXPECT_EQ(p.lower, p.upper);
    EXPECT_EQ(p.upper[0], Rational(3, 7));
    EXPECT_EQ(p.upper[1], Rational(6, 7));
}

TEST(Profile, RejectsBadGridsAndSchedules) {
    using Acc = ProfileAccumulator<Rational>;
    EXPECT_THROW(Acc({}, {1}, 0), std::invalid_argument);
    EXPECT_THROW(Acc({Rational(0)}, {1}, 0), std::invalid_argument);
    EXPECT_THROW(Acc({Rational(1), Rational(1)}, {1}, 0), std::invalid_argument);
    EXPECT_THROW(Acc({Rational(1)}, {3, 3}, 0), std::invalid_argument);
    EXPECT_THROW(Acc({Rational(1)}, {3, 4}, 2), std::invalid_argument);
    Acc acc({Rational(1)}, {2}, 0);
    acc.push(Rational(0));
    EXPECT_THROW(acc.finish(), std::out_of_range);
    acc.push(Rational(0));
    EXPECT_THROW(acc.push(Rational(0)), std::out_of_range);
}

// Streaming envelopes against direct recounting at every checkpoint.
TEST(Profile, StreamingMatchesDirectCount) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> val(0, 20);
    for (int t = 0; t < 50; ++t) {
        std::vector<Rational> values;
        for (int i = 0; i < 300; ++i) values.emplace_back(val(rng), 10);
        const DistanceSeries<Rational> s(values);
        const std::vector<Rational> grid = {Rational(1, 10), Rational(1, 2), Rational(1), Rational(3, 2)};
        const std::vector<std::uint64_t> cps = {17, 64, 150, 299};
        const std::size_t burn = static_cast<std::size_t>(t % 3);
        const auto p = build_profile(s, grid, cps, burn);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            Rational lo(1), hi(0);
            for (std::size_t c = burn; c < cps.size(); ++c) {
                std::int64_t hits = 0;
                for (std::uint64_t k = 0; k < cps[c]; ++k) hits += values[k] < grid[i] ? 1 : 0;
                const Rational f(hits, static_cast<std::int64_t>(cps[c]));
                EXPECT_EQ(p.fractions[c][i], f);
                lo = min(lo, f);
                hi = max(hi, f);
            }
            EXPECT_EQ(p.lower[i], lo);
            EXPECT_EQ(p.upper[i], hi);
        }
        EXPECT_NO_THROW(p.validate());
    }
}

// At l_6 the last block has only 6 lattice points, so the fraction is only
// guaranteed within 1/K plus the finite-size term of the limit 2 delta.
TEST(Profile, TelescopeFixedPointFractionNearTwoDelta) {
    using namespace telescope;
    const TelescopePoint x{Column::inner, Angle{}, 1, true};
    const TelescopePoint y{Column::inner, Angle(1, 32), 0, true};
    const unsigned K = 6;
    const auto p = pair_profile(x, y, {Rational(1, 5)}, {block_bounds(K)}, 0);
    const double lk1 = static_cast<double>(block_bounds(K - 1));
    const double slack = 1.0 / K + lk1 / static_cast<double>(block_bounds(K)) + K / lk1;
    EXPECT_NEAR(p.upper[0].to_double(), 0.4, slack);
}

namespace {

DistributionProfile make_profile(std::vector<Rational> grid, std::vector<Rational> lo, std::vector<Rational> up,
                                 double tail_min, double tail_max) {
    DistributionProfile p;
    p.deltas = std::move(grid);
    p.lower = std::move(lo);
    p.upper = std::move(up);
    p.checkpoints = {1};
    p.tail_min = tail_min;
    p.tail_max = tail_max;
    return p;
}

}  // namespace

TEST(Classify, FullScrambleSetsEveryFlag) {
    const std::vector<Rational> g = {Rational(1, 4), Rational(1, 2), Rational(1), Rational(2)};
    const auto v = classify_pair(make_profile(g, {0, 0, 0, 0}, {1, 1, 1, 1}, 0, 2), Rational(0));
    EXPECT_TRUE(v.dc1 && v.dc2 && v.dc2half && v.dc3 && v.li_yorke);
}

TEST(Classify, ConvergentStatisticsSetNoFlag) {
    const std::vector<Rational> g = {Rational(1, 4), Rational(1, 2), Rational(1)};
    const std::vector<Rational> same = {Rational(1, 5), Rational(1, 2), Rational(1)};
    const auto v = classify_pair(make_profile(g, same, same, 0.1, 1), Rational(0));
    EXPECT_FALSE(v.dc1 || v.dc2 || v.dc2half || v.dc3);
}

TEST(Classify, DistalTelescopeProfileIsDc3Only) {
    const std::vector<Rational> g = {Rational(1, 200), Rational(1, 100), Rational(1, 10), Rational(3, 10),
                                     Rational(2, 5),   Rational(1, 2)};
    const auto v = classify_pair(
        make_profile(g, {0, 0, Rational(1, 5), Rational(3, 5), Rational(4, 5), 1}, {0, 0, 1, 1, 1, 1}, 0.01, 1.3),
        Rational(0));
    EXPECT_TRUE(v.dc3);
    ASSERT_TRUE(v.dc3_a && v.dc3_b);
    EXPECT_EQ(*v.dc3_a, Rational(1, 100));
    EXPECT_EQ(*v.dc3_b, Rational(1, 2));
    EXPECT_FALSE(v.dc2half);
    EXPECT_FALSE(v.li_yorke);
    EXPECT_TRUE(v.distal);
}

TEST(Classify, RejectsToleranceOutOfRange) {
    const auto p = make_profile({Rational(1)}, {0}, {1}, 0, 1);
    EXPECT_THROW(classify_pair(p, Rational(1, 4)), std::invalid_argument);
    EXPECT_THROW(classify_pair(p, Rational(-1, 100)), std::invalid_argument);
}

// dc1 => dc2 => dc2half => dc3 on random valid profiles, for several tolerances.
TEST(Classify, HierarchyHoldsOnRandomProfiles) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> step(0, 3);
    std::uniform_int_distribution<int> coin(0, 3);
    for (int t = 0; t < 4000; ++t) {
        const std::size_t n = 1 + static_cast<std::size_t>(t % 6);
        std::vector<Rational> g, lo, up;
        int l = 0;
        int u = 0;
        for (std::size_t i = 0; i < n; ++i) {
            g.emplace_back(static_cast<std::int64_t>(i + 1), 8);
            l = std::min(20, l + step(rng));
            u = std::max(u, l);
            u = std::min(20, u + (coin(rng) == 0 ? 20 : step(rng)));
            lo.emplace_back(l, 20);
            up.emplace_back(u, 20);
        }
        const auto p = make_profile(g, lo, up, coin(rng) * 0.05, 0.2 + coin(rng) * 0.3);
        for (const Rational tol : {Rational(0), Rational(1, 20), Rational(1, 10), Rational(1, 5)}) {
            const auto v = classify_pair(p, tol);
            EXPECT_TRUE(!v.dc1 || v.dc2);
            EXPECT_TRUE(!v.dc2 || v.dc2half);
            EXPECT_TRUE(!v.dc2half || v.dc3);
            EXPECT_TRUE(!v.dc2half || v.li_yorke);
            EXPECT_NE(v.proximal, v.distal);
            EXPECT_TRUE(!v.asymptotic || v.proximal);
        }
    }
}

TEST(Transport, IdentityConjugacyGivesEqualCounts) {
    const DistanceSeries<Rational> s({Rational(1, 3), Rational(1, 7), Rational(2), Rational(0)});
    const auto res = check_transport(s, s, {{Rational(1, 2), Rational(1, 2)}, {Rational(1, 5), Rational(1, 5)}});
    for (const auto& r : res) {
        EXPECT_TRUE(r.pass);
        EXPECT_TRUE(r.counts_equal);
    }
}

TEST(Transport, ShiftedSeriesFailsAtFirstDrop) {
    std::vector<Rational> f = {0, Rational(3, 4), 0, 0};
    std::vector<Rational> g;
    for (const auto& d : f) g.push_back(d + Rational(1));
    const auto res = check_transport(DistanceSeries<Rational>(f), DistanceSeries<Rational>(g),
                                     {{Rational(1, 2), Rational(1, 2)}});
    ASSERT_EQ(res.size(), 1u);
    EXPECT_FALSE(res[0].pass);
    ASSERT_TRUE(res[0].first_violation);
    EXPECT_EQ(*res[0].first_violation, 1u);
}

TEST(Transport, RejectsBadModuli) {
    using Checker = TransportChecker<Rational, Rational>;
    EXPECT_THROW(Checker({}), std::invalid_argument);
    EXPECT_THROW(Checker({{Rational(0), Rational(1)}}), std::invalid_argument);
    EXPECT_THROW(check_transport(DistanceSeries<Rational>({0}), DistanceSeries<Rational>({0, 0}),
                                 {{Rational(1), Rational(1)}}),
                 std::invalid_argument);
}
