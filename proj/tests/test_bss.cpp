#include <gtest/gtest.h>

#include <random>
#include <string>

#include "dchaos/bss.hpp"

using namespace dchaos;
using namespace dchaos::bss;

namespace {

// The whole odometer is binary counting with the least significant bit first,
// so a state is just an integer below 2^{m_K}.
Rational oracle_p(std::uint64_t v, const std::vector<int>& n) {
    int shift = 0;
    for (std::size_t k = 1; k <= n.size(); ++k) {
        const std::uint64_t mask = (std::uint64_t{1} << n[k - 1]) - 1;
        const std::uint64_t e = (v >> shift) & mask;
        shift += n[k - 1];
        if (e == mask) continue;
        const std::uint64_t lo = std::uint64_t{1} << (k - 1);
        return (e >= lo && e + lo + 1 < mask + 1) ? Rational(0) : Rational(1, std::int64_t{1} << k);
    }
    return Rational(0);
}

std::uint64_t spread_value(const std::string& omega, const std::vector<int>& n) {
    std::uint64_t v = 0;
    int shift = 0;
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (omega[i] == '1') v |= std::uint64_t{1} << (shift + n[i] - 1);
        shift += n[i];
    }
    return v;
}

// Printed values of the phi_l table, with the band 2^{l-1} <= e < 2^l of the
// omega_l = 0 table left open.
std::optional<std::pair<Rational, bool>> printed_phi(int l, int n, int bit, std::int64_t e) {
    const std::int64_t L = std::int64_t{1} << l, H = std::int64_t{1} << (l - 1), N = std::int64_t{1} << n;
    if (bit == 0) {
        if (e < H) return std::pair{Rational(e, L), false};
        if (e < L) return std::nullopt;
        if (e < N - H) return std::pair{Rational(1, 2), true};
        return std::pair{Rational(e - N + L + 1, L), false};
    }
    if (e < H) return std::pair{Rational(H + e, L), false};
    if (e < N / 2) return std::pair{Rational(1), true};
    if (e < N - H) return std::pair{Rational(0), true};
    return std::pair{Rational(e - N + H + 1, L), false};
}

}  // namespace

TEST(Bss, StepExamples) {
    const auto config = BssConfig::standard();
    const BssPoint x{CirclePoint{Angle{}}, OdometerState::zero(config.structure_ptr())};
    const BssPoint y = step(x);
    EXPECT_EQ(y.angle().value(), Rational(1, 2));
    EXPECT_EQ(y.base.str(), "10000|0000000|000000000");
    const BssPoint z = step(y);
    EXPECT_EQ(z.angle().value(), Rational(1, 2));
    EXPECT_EQ(z.base.str(), "01000|0000000|000000000");
    const BssPoint iso{IsolatedPoint{}, OdometerState::zero(config.structure_ptr())};
    EXPECT_TRUE(step(iso).isolated());
}

TEST(Bss, DistanceExamples) {
    const auto st = BssConfig::standard().structure_ptr();
    const auto z = OdometerState::zero(st);
    const BssPoint a{CirclePoint{Angle{}}, z};
    const BssPoint b{CirclePoint{Angle(1, 2)}, z};
    const BssPoint iso{IsolatedPoint{}, z};
    for (Metric m : {Metric::rho, Metric::rho_prime}) {
        EXPECT_EQ(distance(a, b, m).exact(), Rational(2));
        EXPECT_EQ(distance(a, a, m).exact(), Rational(0));
        EXPECT_EQ(distance(iso, iso, m).exact(), Rational(0));
    }
    EXPECT_EQ(distance(b, iso, Metric::rho).exact(), Rational(3));
    EXPECT_EQ(distance(b, iso, Metric::rho_prime).exact(), Rational(1));
    EXPECT_EQ(distance(a, iso, Metric::rho).exact(), Rational(1));
    EXPECT_EQ(distance(a, BssPoint{CirclePoint{Angle(1, 6)}, z}, Metric::rho).exact(), Rational(1));
    const BssDistance quarter = distance(a, BssPoint{CirclePoint{Angle(1, 4)}, z}, Metric::rho);
    EXPECT_FALSE(quarter.exact());
    EXPECT_NEAR(quarter.value(), std::sqrt(2.0), 1e-15);
}

TEST(Bss, BaseDistanceDominatesSmallChords) {
    const auto st = BssConfig::standard().structure_ptr();
    const BssPoint a{CirclePoint{Angle{}}, OdometerState::zero(st)};
    const BssPoint b{CirclePoint{Angle{}}, OdometerState::parse(st, "01000|0000000|000000000")};
    EXPECT_EQ(distance(a, b, Metric::rho).exact(), Rational(1, 2));
    EXPECT_TRUE(below(distance(a, b, Metric::rho), Rational(3, 5)));
    EXPECT_FALSE(below(distance(a, b, Metric::rho), Rational(1, 2)));
}

TEST(Bss, NearTieIsReportedNotGuessed) {
    const auto st = BssConfig::standard().structure_ptr();
    const auto z = OdometerState::zero(st);
    const auto d = distance(BssPoint{CirclePoint{Angle{}}, z}, BssPoint{CirclePoint{Angle(1, 4)}, z}, Metric::rho);
    EXPECT_THROW(fiber_below(d, Rational(1414213562373095, 1000000000000000)), std::domain_error);
    EXPECT_TRUE(fiber_below(d, Rational(3, 2)));
    EXPECT_FALSE(fiber_below(d, Rational(7, 5)));
}

TEST(Bss, NetRotationExamples) {
    const auto st = BssConfig::standard().structure_ptr();
    const auto z = OdometerState::zero(st);
    EXPECT_EQ(net_rotation(z, 0).value(), Rational(0));
    EXPECT_EQ(net_rotation(z, 1).value(), Rational(1, 2));
    const std::vector<int> n = {5, 7, 9};
    Rational acc(0);
    for (std::uint64_t j = 0; j < 700; ++j) acc = frac(acc + oracle_p(j, n));
    EXPECT_EQ(net_rotation(z, 700).value(), acc);
}

TEST(Bss, ConfigValidation) {
    EXPECT_THROW(BssConfig(BlockStructure({1, 5})), std::invalid_argument);
    EXPECT_NO_THROW(BssConfig(BlockStructure({2, 3, 4})));
    const auto c = BssConfig::standard(4);
    EXPECT_EQ(c.lemma_bound(1), 6);
    EXPECT_EQ(c.window(1), 8);
    EXPECT_EQ(c.lemma_bound(2), 870);
    EXPECT_THROW(static_cast<void>(c.lemma_bound(5)), std::out_of_range);
    for (std::size_t i = 2; i <= 4; ++i) {
        EXPECT_LT(c.alpha_partial(i), c.alpha_partial(i - 1));
        EXPECT_GT(c.alpha_partial(i), Rational(3, 4));
    }
}

TEST(Bss, PhiTableSpotValues) {
    const auto config = BssConfig::standard();
    const auto t0 = phi_table(1, 0, config);
    EXPECT_EQ(t0.entries[0].phi, Rational(0));
    EXPECT_FALSE(t0.entries[0].good);
    EXPECT_EQ(t0.entries[5].phi, Rational(1, 2));
    EXPECT_TRUE(t0.entries[5].good);
    EXPECT_EQ(t0.entries[31].phi, Rational(1));
    EXPECT_FALSE(t0.entries[31].good);
    EXPECT_THROW(phi_table(0, 0, config), std::out_of_range);
    EXPECT_THROW(phi_table(1, 2, config), std::invalid_argument);
}

// Every printed entry matches, and the count of good words is 2^{n_l} - 2^l.
TEST(Bss, PhiTablesMatchPrintedBands) {
    for (const std::vector<int>& n : {std::vector<int>{5, 7, 9}, std::vector<int>{4, 6, 8}}) {
        const BssConfig config{BlockStructure(n)};
        for (int l = 1; l <= 3; ++l) {
            for (int bit : {0, 1}) {
                const auto t = phi_table(static_cast<std::size_t>(l), bit, config);
                for (const auto& e : t.entries) {
                    const auto want = printed_phi(l, n[l - 1], bit, static_cast<std::int64_t>(e.evaluation));
                    if (want) {
                        EXPECT_EQ(e.phi, want->first) << "l=" << l << " bit=" << bit << " e=" << e.evaluation;
                        EXPECT_EQ(e.good, want->second) << "l=" << l << " bit=" << bit << " e=" << e.evaluation;
                    } else {
                        EXPECT_TRUE(e.good) << "unprinted band, l=" << l << " e=" << e.evaluation;
                    }
                }
                EXPECT_EQ(t.good_count(), (std::size_t{1} << n[l - 1]) - (std::size_t{1} << l));
            }
        }
    }
}

TEST(Bss, LemmaCountsAgainstIntegerOracle) {
    const std::vector<int> n = {5, 7, 9};
    const BssConfig config{BlockStructure(n)};
    for (const std::string omega : {"000", "100", "010", "110", "011", "111"}) {
        for (std::size_t i = 1; i <= 2; ++i) {
            const auto c = lemma_freq_count(omega, i, config);
            std::uint64_t v = spread_value(omega, n);
            Rational acc(0);
            std::int64_t count = 0;
            for (std::int64_t k = 1; k <= c.window; ++k) {
                acc = frac(acc + oracle_p(v++, n));
                count += acc == lemma_target(omega, i) ? 1 : 0;
            }
            EXPECT_EQ(c.count, count) << omega << " i=" << i;
            EXPECT_TRUE(c.pass) << lemma_record(c, omega);
        }
    }
}

TEST(Bss, LemmaTargetShiftsWithSecondBit) {
    EXPECT_EQ(lemma_target("000", 2), Rational(0));
    EXPECT_EQ(lemma_target("010", 2), Rational(1, 2));
    EXPECT_EQ(lemma_target("110", 1), Rational(0));
    EXPECT_EQ(lemma_target("010", 1), Rational(1, 2));
}

// Fiber distances of the scrambled pair follow the oracle net rotations.
TEST(Bss, ScrambledSeriesFollowsNetRotations) {
    const std::vector<int> n = {5, 7, 9};
    const BssConfig config{BlockStructure(n)};
    EXPECT_EQ(scrambled_point("101", config).base.str(), "00001|0000001|000000000");
    const std::uint64_t horizon = 3000;
    for (const auto& [w1, w2] : {std::pair<std::string, std::string>{"101", "111"}, {"110", "100"}, {"011", "011"}}) {
        const auto series = scrambled_pair_series(w1, w2, horizon, config);
        std::uint64_t a = spread_value(lambda_embed(w1, 3), n), b = spread_value(lambda_embed(w2, 3), n);
        Rational ra(0), rb(0);
        for (std::uint64_t k = 0; k < horizon; ++k) {
            const BssDistance& d = series[k];
            const Rational gap = circle_distance(Angle(ra), Angle(rb));
            if (gap == Rational(0)) {
                EXPECT_EQ(d.kind, BssDistance::Fiber::zero) << k;
            } else {
                EXPECT_EQ(d.param, gap) << k;
            }
            if (w1 == w2) {
                EXPECT_EQ(d.exact(), Rational(0));
            }
            ra = frac(ra + oracle_p(a++, n));
            rb = frac(rb + oracle_p(b++, n));
        }
    }
}

TEST(Bss, ScrambledPairRejectsShortWords) {
    const auto config = BssConfig::standard();
    EXPECT_THROW(scrambled_pair_series("", "1", 10, config), std::invalid_argument);
    EXPECT_THROW(scrambled_pair_series("101", "111", 0, config), std::invalid_argument);
}

TEST(Bss, SameParity) {
    EXPECT_TRUE(same_parity("110", "000", 2));
    EXPECT_FALSE(same_parity("100", "000", 2));
    EXPECT_THROW(same_parity("1", "0", 2), std::invalid_argument);
}
