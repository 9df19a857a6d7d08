#include <gtest/gtest.h>

#include <random>

#include "dchaos/telescope.hpp"

using namespace dchaos;
using namespace dchaos::telescope;

namespace {

TelescopePoint pt(Column c, Angle phi, std::uint64_t h, bool lifted = true) { return {c, phi, h, lifted}; }

const std::vector<Rational> kGrid = {Rational(1, 10), Rational(1, 5), Rational(3, 10), Rational(2, 5)};

}  // namespace

TEST(Telescope, BlockBounds) {
    EXPECT_EQ(block_bounds(0), 0u);
    EXPECT_EQ(block_bounds(1), 1u);
    EXPECT_EQ(block_bounds(2), 5u);
    EXPECT_EQ(block_bounds(3), 32u);
    EXPECT_EQ(block_bounds(5), 3413u);
    EXPECT_EQ(block_bounds(6), 50069u);
    EXPECT_THROW(block_bounds(16), std::overflow_error);
    EXPECT_EQ(block_of(1), 1u);
    EXPECT_EQ(block_of(2), 2u);
    EXPECT_EQ(block_of(5), 2u);
    EXPECT_EQ(block_of(6), 3u);
    EXPECT_EQ(block_of(33), 4u);
    EXPECT_THROW(block_of(0), std::invalid_argument);
    EXPECT_EQ(horizon_block(3413), 5u);
    EXPECT_THROW(horizon_block(3414), std::invalid_argument);
}

TEST(Telescope, RotationExamples) {
    EXPECT_EQ(rotation(Column::inner, 1), Rational(0));
    EXPECT_EQ(rotation(Column::inner, 3), Rational(1, 2));
    EXPECT_EQ(rotation(Column::outer, 3), Rational(0));
    EXPECT_EQ(rotation(Column::inner, 10), Rational(1, 3));
    EXPECT_EQ(rotation(Column::outer, 10), Rational(1, 3));
    EXPECT_EQ(rotation(Column::inner, 33), Rational(1, 4));
    EXPECT_EQ(rotation(Column::outer, 33), Rational(1, 2));
    EXPECT_EQ(rotation(Column::outer, 300), Rational(1, 5));
}

TEST(Telescope, StepExamples) {
    const auto a = step(pt(Column::inner, Angle{}, 1, false));
    EXPECT_EQ(a.height, 2u);
    EXPECT_EQ(a.phi.value(), Rational(0));
    const auto b = step(a);
    EXPECT_EQ(b.height, 3u);
    EXPECT_EQ(b.phi.value(), Rational(1, 2));
    const auto fixed = pt(Column::outer, Angle(1, 7), 0, false);
    EXPECT_EQ(step(fixed), fixed);
    EXPECT_EQ(fixed.z(), Rational(0));
}

TEST(Telescope, LiftAndConjugacy) {
    const auto x = pt(Column::inner, Angle(1, 3), 4, false);
    EXPECT_EQ(lift(x).z(), Rational(1, 4) + Rational(13, 10));
    EXPECT_EQ(lift(pt(Column::outer, Angle{}, 4, false)).z(), Rational(1, 4));
    EXPECT_THROW(lift(lift(x)), std::invalid_argument);
    EXPECT_THROW(unlift(x), std::invalid_argument);
    TelescopePoint p = x;
    for (int n = 0; n < 200; ++n) {
        EXPECT_EQ(g_step(lift(p)), lift(step(p)));
        p = step(p);
    }
}

TEST(Telescope, DistanceExamples) {
    EXPECT_EQ(distance(pt(Column::inner, Angle{}, 2), pt(Column::outer, Angle{}, 2)), Rational(13, 10));
    EXPECT_EQ(distance(pt(Column::inner, Angle{}, 2, false), pt(Column::outer, Angle{}, 2, false)), Rational(1, 100));
    EXPECT_EQ(distance(pt(Column::inner, Angle(1, 10), 2), pt(Column::inner, Angle(9, 10), 2)), Rational(1, 5));
    EXPECT_EQ(distance(pt(Column::outer, Angle{}, 2), pt(Column::outer, Angle{}, 0)), Rational(1, 2));
    EXPECT_THROW(distance(pt(Column::inner, Angle{}, 2), pt(Column::inner, Angle{}, 2, false)), std::invalid_argument);
}

TEST(Telescope, ThresholdByCrossMultiplication) {
    TelescopeDistance d;
    d.parts = {{{1, 100}, {2, 6}, {1, 3}}};
    EXPECT_EQ(d.exact(), Rational(1, 3));
    EXPECT_FALSE(below(d, Rational(1, 3)));
    EXPECT_TRUE(below(d, Rational(334, 1000)));
}

// The integer orbit reproduces the rational step-by-step distances.
TEST(Telescope, PairOrbitMatchesRationalOrbit) {
    const std::vector<std::pair<TelescopePoint, TelescopePoint>> pairs = {
        {pt(Column::inner, Angle{}, 1), pt(Column::outer, Angle{}, 1)},
        {pt(Column::inner, Angle(1, 7), 3), pt(Column::inner, Angle(2, 5), 9)},
        {pt(Column::outer, Angle{}, 2), pt(Column::outer, Angle(1, 32), 0)},
        {pt(Column::inner, Angle{}, 1, false), pt(Column::outer, Angle{}, 1, false)},
    };
    for (const auto& [a0, b0] : pairs) {
        PairOrbit orbit(a0, b0, 3413);
        TelescopePoint a = a0, b = b0;
        for (int n = 0; n < 3413; ++n) {
            ASSERT_EQ(orbit.distance().exact(), distance(a, b)) << n;
            orbit.advance();
            a = advance(a);
            b = advance(b);
        }
        EXPECT_EQ(orbit.point(0), a);
    }
}

TEST(Telescope, LatticeExamples) {
    const auto c = lattice_count(Angle{}, Angle{}, 10, Rational(1, 4));
    EXPECT_EQ(c.pi, 5);
    EXPECT_TRUE(c.pass);
    EXPECT_THROW(lattice_count(Angle{}, Angle{}, 0, Rational(1, 4)), std::invalid_argument);
    EXPECT_THROW(lattice_count(Angle{}, Angle{}, 3, Rational(1, 2)), std::invalid_argument);
}

TEST(Telescope, LatticeBoundHoldsOnRandomInputs) {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<std::int64_t> num(0, 9999);
    std::uniform_int_distribution<std::int64_t> kk(1, 60);
    std::uniform_int_distribution<std::int64_t> dd(1, 499);
    for (int t = 0; t < 2000; ++t) {
        const auto c = lattice_count(Angle(num(rng), 10000), Angle(num(rng), 10000), kk(rng), Rational(dd(rng), 1000));
        EXPECT_TRUE(c.pass) << c.pi << " not in [" << c.lower_bound << ", " << c.upper_bound << "]";
    }
}

TEST(Telescope, CaseLabels) {
    EXPECT_EQ(case_label(pt(Column::inner, Angle{}, 3), pt(Column::outer, Angle{}, 3)), Case::Y1);
    EXPECT_EQ(case_label(pt(Column::inner, Angle{}, 3), pt(Column::inner, Angle(1, 3), 3)), Case::Y2);
    EXPECT_EQ(case_label(pt(Column::outer, Angle{}, 0), pt(Column::outer, Angle(1, 3), 0)), Case::Y2);
    EXPECT_EQ(case_label(pt(Column::inner, Angle{}, 1), pt(Column::inner, Angle{}, 2)), Case::Y3);
    EXPECT_EQ(case_label(pt(Column::inner, Angle{}, 1), pt(Column::inner, Angle{}, 0)), Case::Y4);
    EXPECT_EQ(case_label(pt(Column::outer, Angle{}, 1), pt(Column::outer, Angle{}, 0)), Case::Y5);
    EXPECT_EQ(case_label(pt(Column::outer, Angle{}, 1), pt(Column::outer, Angle{}, 2)), Case::Y6);
    EXPECT_THROW(case_label(pt(Column::inner, Angle{}, 1), pt(Column::inner, Angle{}, 1)), std::invalid_argument);
    EXPECT_THROW(case_label(pt(Column::inner, Angle{}, 1, false), pt(Column::outer, Angle{}, 1, false)),
                 std::invalid_argument);
    EXPECT_EQ(to_string(Case::Y4), "Y4");
}

TEST(Telescope, EqualHeightPairsKeepTheirDistance) {
    const auto y2 = verify_case(pt(Column::inner, Angle{}, 1), pt(Column::inner, Angle(1, 4), 1), 3413,
                                Rational(1, 1000), kGrid);
    EXPECT_EQ(y2.label, Case::Y2);
    EXPECT_TRUE(y2.constant);
    EXPECT_TRUE(y2.pass);
    const auto y1 = verify_case(pt(Column::inner, Angle{}, 1), pt(Column::outer, Angle{}, 1), 3413,
                                Rational(1, 1000), kGrid);
    EXPECT_EQ(y1.label, Case::Y1);
    EXPECT_DOUBLE_EQ(y1.terminal_distance, 1.3);
    EXPECT_TRUE(y1.pass);
    EXPECT_THROW(verify_case(pt(Column::inner, Angle{}, 1), pt(Column::outer, Angle{}, 1), 1, Rational(1, 10), kGrid),
                 std::invalid_argument);
}

TEST(Telescope, InnerHeightsOneAndTwoHaveNoGap) {
    const auto y3 = verify_case(pt(Column::inner, Angle{}, 1), pt(Column::inner, Angle{}, 2), block_bounds(6),
                                Rational(1, 20), {Rational(1, 20), Rational(1, 10), Rational(7, 20), Rational(2, 5)});
    EXPECT_EQ(y3.label, Case::Y3);
    EXPECT_TRUE(y3.pass) << case_csv(y3);
}

TEST(Telescope, DistalPairScramblesAtBlockEnds) {
    const auto rep = dc3_pair_check(block_bounds(6),
                                    {Rational(1, 200), Rational(1, 10), Rational(3, 10), Rational(1, 2)},
                                    Rational(1, 20));
    EXPECT_TRUE(rep.pass) << dc3_csv(rep);
    EXPECT_EQ(rep.rows[0].upper, Rational(0));
    EXPECT_GT(rep.rows[1].upper - rep.rows[1].lower, Rational(1, 2));
    EXPECT_THROW(dc3_pair_check(block_bounds(2), kGrid, Rational(1, 20)), std::invalid_argument);
}
