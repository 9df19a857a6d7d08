#pragma once

// The acceptance suite: eleven criteria, each returning a verdict plus a few
// lines of detail.  Shared by the acceptance test binary and `dchaos verify`.
// Tolerances are fixed here; Options only moves horizons and seeds.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dchaos/bss.hpp"
#include "dchaos/cantorwheel.hpp"
#include "dchaos/chaoscore.hpp"
#include "dchaos/fiberlab.hpp"
#include "dchaos/odometer.hpp"
#include "dchaos/rational.hpp"
#include "dchaos/telescope.hpp"

namespace dchaos::acceptance {

struct Options {
    std::uint64_t seed = 20130611;
    unsigned telescope_block = 8;  // horizon l_K for criteria 5 and 6
    std::size_t fiber_block = 5;   // horizon m_L for criterion 9
    std::optional<fiberlab::FiberSchedule> fiber_schedule;  // default: standard
    bool informational = true;     // extra sweeps that never affect verdicts
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::vector<std::string> detail;
    double seconds = 0;
};

namespace detail {

inline std::string fmt(double v, int precision = 4) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(precision);
    os << v;
    return os.str();
}

inline Rational random_unit_rational(std::mt19937_64& rng, std::int64_t max_den) {
    std::uniform_int_distribution<std::int64_t> den(1, max_den);
    const std::int64_t d = den(rng);
    std::uniform_int_distribution<std::int64_t> num(0, d - 1);
    return Rational(num(rng), d);
}

}  // namespace detail

// 1. Lattice lemma on random rational triples, exact comparison.
inline CriterionResult criterion1(const Options& opt) {
    CriterionResult r{1, "lattice lemma oracle", false, {}, 0};
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<std::int64_t> kd(1, 1000);
    std::uniform_int_distribution<std::int64_t> dd(3, 1000);
    int failures = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        const Angle px(detail::random_unit_rational(rng, 1000));
        const Angle py(detail::random_unit_rational(rng, 1000));
        const std::int64_t k = kd(rng);
        const std::int64_t d = dd(rng);
        std::uniform_int_distribution<std::int64_t> nd(1, (d - 1) / 2);
        const Rational delta(nd(rng), d);
        const auto c = telescope::lattice_count(px, py, k, delta);
        if (!c.pass) {
            if (failures < 5) {
                r.detail.push_back("violation: phi_x=" + px.value().str() + " phi_y=" + py.value().str() +
                                   " k=" + std::to_string(k) + " delta=" + delta.str() + " pi=" + std::to_string(c.pi));
            }
            ++failures;
        }
    }
    r.detail.insert(r.detail.begin(), std::to_string(trials) + " triples, " + std::to_string(failures) + " failures");
    r.pass = failures == 0;
    return r;
}

// The rows of the printed phi_l table: value for a block-l evaluation e, or
// nullopt for the band [2^{l-1}, 2^l - 1] that the omega_l = 0 table omits.
struct PrintedRow {
    Rational phi;
    bool good = false;
};

inline std::optional<PrintedRow> figure1_printed(std::size_t l, int n, int owner_bit, std::int64_t e) {
    const std::int64_t full = std::int64_t{1} << n;
    const std::int64_t half_l = std::int64_t{1} << (l - 1);
    const std::int64_t pow_l = std::int64_t{1} << l;
    if (owner_bit == 0) {
        if (e < half_l) return PrintedRow{Rational(e, pow_l), false};
        if (e < pow_l) return std::nullopt;
        if (e < full - half_l) return PrintedRow{Rational(1, 2), true};
        return PrintedRow{Rational(e - full + pow_l + 1, pow_l), false};
    }
    if (e < half_l) return PrintedRow{Rational(half_l + e, pow_l), false};
    if (e < full / 2) return PrintedRow{Rational(1), true};
    if (e < full - half_l) return PrintedRow{Rational(0), true};
    return PrintedRow{Rational(e - full + half_l + 1, pow_l), false};
}

// 2. Brute-force phi_l tables against the printed rows.
inline CriterionResult criterion2(const Options&) {
    CriterionResult r{2, "phi_l table reproduction", true, {}, 0};
    const auto config = bss::BssConfig::standard(3);
    for (std::size_t l = 1; l <= 3; ++l) {
        const int n = config.structure().length(l);
        for (int bit : {0, 1}) {
            const auto table = bss::phi_table(l, bit, config);
            std::size_t mismatches = 0;
            std::size_t band = 0;
            std::size_t band_good = 0;
            for (const auto& e : table.entries) {
                const auto printed = figure1_printed(l, n, bit, static_cast<std::int64_t>(e.evaluation));
                if (!printed) {
                    ++band;
                    band_good += e.good ? 1 : 0;
                    continue;
                }
                if (!(printed->phi == e.phi) || printed->good != e.good) {
                    if (mismatches < 3) {
                        r.detail.push_back("  l=" + std::to_string(l) + " bit=" + std::to_string(bit) +
                                           " e=" + std::to_string(e.evaluation) + ": computed " + e.phi.str() +
                                           ", printed " + printed->phi.str());
                    }
                    ++mismatches;
                }
            }
            const std::size_t expected_good = (std::size_t{1} << n) - (std::size_t{1} << l);
            const bool ok = mismatches == 0 && table.good_count() == expected_good;
            r.pass = r.pass && ok;
            std::string line = "l=" + std::to_string(l) + " bit=" + std::to_string(bit) +
                               ": mismatches " + std::to_string(mismatches) + ", good " +
                               std::to_string(table.good_count()) + "/" + std::to_string(expected_good);
            if (bit == 0) {
                line += ", unprinted band " + std::to_string(band_good) + " of " + std::to_string(band) + " good";
            }
            r.detail.push_back(line);
        }
    }
    return r;
}

// 3. Net-rotation counts over the window 2^{m_i - 2}.
inline CriterionResult criterion3(const Options& opt) {
    CriterionResult r{3, "net rotation counting bound", true, {}, 0};
    const auto config = bss::BssConfig::standard(3);
    std::mt19937_64 rng(opt.seed + 3);
    std::bernoulli_distribution coin(0.5);
    std::int64_t worst[4] = {0, -1, -1, -1};
    for (int s = 0; s < 20; ++s) {
        Word omega;
        for (int j = 0; j < 3; ++j) omega.push_back(coin(rng) ? '1' : '0');
        for (std::size_t i = 1; i <= 3; ++i) {
            const auto c = bss::lemma_freq_count(omega, i, config);
            if (worst[i] < 0 || c.count < worst[i]) worst[i] = c.count;
            if (!c.pass) {
                r.pass = false;
                r.detail.push_back("  " + bss::lemma_record(c, omega));
            }
        }
    }
    for (std::size_t i = 1; i <= 3; ++i) {
        r.detail.push_back("i=" + std::to_string(i) + ": min count " + std::to_string(worst[i]) + " >= bound " +
                           std::to_string(config.lemma_bound(i)) + " of window " + std::to_string(config.window(i)));
    }
    if (config.lemma_bound(2) != 870) {
        r.pass = false;
        r.detail.push_back("bound for i=2 is " + std::to_string(config.lemma_bound(2)) + ", expected 870");
    }
    return r;
}

// 4. Desk check of the scrambled-set estimates on pairs from S.
inline CriterionResult criterion4(const Options& opt) {
    CriterionResult r{4, "scrambled set desk check", true, {}, 0};
    const auto config = bss::BssConfig::standard(6);
    std::vector<std::pair<Word, Word>> pairs;
    for (int a = 0; a < 8; ++a) {
        for (int b = a + 1; b < 8; ++b) {
            auto word = [](int v) {
                Word w;
                for (int j = 0; j < 3; ++j) w.push_back(((v >> j) & 1) ? '1' : '0');
                return w;
            };
            pairs.emplace_back(word(a), word(b));
        }
    }
    std::mt19937_64 rng(opt.seed + 4);
    std::shuffle(pairs.begin(), pairs.end(), rng);
    pairs.resize(10);
    const std::vector<Rational> deltas = {Rational(11, 10), Rational(3, 2), Rational(19, 10)};
    double minA[4] = {2, 2, 2, 2};
    double maxB[4] = {-1, -1, -1, -1};
    const double slack = 0.02;
    try {
        for (const auto& [w1, w2] : pairs) {
            const auto series = bss::scrambled_pair_series(w1, w2, config.window(3), config, 1);
            const Word l1 = lambda_embed(w1, config.structure().blocks());
            const Word l2 = lambda_embed(w2, config.structure().blocks());
            for (std::size_t i = 1; i <= 3; ++i) {
                const double alpha = config.lemma_alpha(i).to_double();
                const bool same = bss::same_parity(l1, l2, i);
                for (const auto& d : deltas) {
                    const double f = empirical_fraction(series, static_cast<std::size_t>(config.window(i)), d).to_double();
                    if (same) {
                        minA[i] = std::min(minA[i], f);
                        if (f < 2 * alpha - 1 - slack) r.pass = false;
                    } else {
                        maxB[i] = std::max(maxB[i], f);
                        if (f > 2 - 2 * alpha + slack) r.pass = false;
                    }
                }
            }
        }
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail.push_back(std::string("error: ") + e.what());
        return r;
    }
    r.detail.push_back("rho and rho' agree at every step of all 10 pairs");
    for (std::size_t i = 1; i <= 3; ++i) {
        const double alpha = config.lemma_alpha(i).to_double();
        std::string line = "i=" + std::to_string(i) + " alpha=" + detail::fmt(alpha);
        if (minA[i] <= 1) line += ": A min " + detail::fmt(minA[i]) + " (need >= " + detail::fmt(2 * alpha - 1 - slack) + ")";
        if (maxB[i] >= 0) line += ", B max " + detail::fmt(maxB[i]) + " (need <= " + detail::fmt(2 - 2 * alpha + slack) + ")";
        r.detail.push_back(line);
    }
    return r;
}

// 5. The distal pair in X: upper envelope near 1 and lower near 2 delta.
inline CriterionResult criterion5(const Options& opt) {
    CriterionResult r{5, "telescope distal pair envelopes", false, {}, 0};
    try {
        const std::uint64_t horizon = telescope::block_bounds(opt.telescope_block);
        const auto rep = telescope::dc3_pair_check(horizon, {Rational(1, 200), Rational(3, 10)}, Rational(0));
        const auto& p = rep.profile;
        const Rational up = p.upper_at(Rational(3, 10));
        const Rational lo = p.lower_at(Rational(3, 10));
        const bool small_zero = p.upper_at(Rational(1, 200)) == Rational(0) && p.lower_at(Rational(1, 200)) == Rational(0);
        r.pass = up.to_double() >= 0.95 && lo.to_double() <= 0.65 && small_zero;
        r.detail.push_back("horizon l_" + std::to_string(opt.telescope_block) + " = " + std::to_string(horizon));
        r.detail.push_back("delta=3/10: upper " + detail::fmt(up.to_double()) + " (need >= 0.95), lower " +
                           detail::fmt(lo.to_double()) + " (need <= 0.65)");
        r.detail.push_back(std::string("delta=1/200: both envelopes ") + (small_zero ? "exactly 0" : "nonzero"));
    } catch (const std::exception& e) {
        r.detail.push_back(std::string("error: ") + e.what());
    }
    return r;
}

// 6. One representative pair per case of the Y case tree.
inline CriterionResult criterion6(const Options& opt) {
    using namespace telescope;
    CriterionResult r{6, "telescope Y cases", true, {}, 0};
    // The gap grid stays out of the bands (1/8, 1/3] where a block before K - 1
    // still carries a visible share of the orbit at l_8.
    const std::vector<Rational> gap_grid = {Rational(1, 20), Rational(1, 10), Rational(7, 20), Rational(2, 5)};
    const std::vector<Rational> two_delta_grid = {Rational(1, 10), Rational(1, 5), Rational(3, 10), Rational(2, 5)};
    struct Rep {
        TelescopePoint a;
        TelescopePoint b;
        Rational tol;
        std::vector<Rational> grid;
    };
    const Rep reps[] = {
        {{Column::inner, Angle{}, 1, true}, {Column::outer, Angle{}, 1, true}, Rational(1, 1000), {Rational(1, 2)}},
        {{Column::inner, Angle{}, 1, true}, {Column::inner, Angle(1, 3), 1, true}, Rational(0), {Rational(1, 2)}},
        {{Column::inner, Angle{}, 1, true}, {Column::inner, Angle{}, 2, true}, Rational(1, 50), gap_grid},
        {{Column::inner, Angle{}, 1, true}, {Column::inner, Angle(1, 32), 0, true}, Rational(1, 20), two_delta_grid},
        {{Column::outer, Angle{}, 1, true}, {Column::outer, Angle(1, 32), 0, true}, Rational(1, 20), two_delta_grid},
        {{Column::outer, Angle{}, 1, true}, {Column::outer, Angle{}, 2, true}, Rational(1, 50), gap_grid},
    };
    std::uint64_t horizon = 0;
    try {
        horizon = block_bounds(opt.telescope_block);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail.push_back(std::string("error: ") + e.what());
        return r;
    }
    for (const auto& rep : reps) {
        try {
            const CaseReport c = verify_case(rep.a, rep.b, horizon, rep.tol, rep.grid);
            r.pass = r.pass && c.pass;
            std::string line = to_string(c.label) + (c.pass ? " PASS" : " FAIL");
            if (c.label == Case::Y1) line += ": terminal distance " + detail::fmt(c.terminal_distance, 6);
            if (c.label == Case::Y2) line += std::string(": distance ") + (c.constant ? "exactly constant" : "varies");
            for (const auto& row : c.rows) {
                line += " [" + row.delta.str() + ": " + detail::fmt(row.lower.to_double()) + ".." +
                        detail::fmt(row.upper.to_double()) + " vs " + row.expected + "]";
            }
            r.detail.push_back(line);
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail.push_back(std::string("error: ") + e.what());
        }
    }
    if (!opt.informational) return r;
    // Phase sensitivity of the fixed-point cases: at l_8 the last block
    // dominates and its rotation lattice has only 8 (inner) or 4 (outer)
    // points, so the fraction depends on where the fixed point sits.
    for (const std::int64_t den : {36, 48, 64, 100}) {
        for (const Column col : {Column::inner, Column::outer}) {
            try {
                const TelescopePoint a{col, Angle{}, 1, true};
                const TelescopePoint b{col, Angle(1, den), 0, true};
                const CaseReport c = verify_case(a, b, horizon, Rational(1, 20), two_delta_grid);
                std::string line = "  info " + to_string(c.label) + " phase 1/" + std::to_string(den) + ":";
                for (const auto& row : c.rows) line += " " + detail::fmt(row.upper.to_double());
                r.detail.push_back(line + (c.pass ? " (within 0.05)" : " (outside 0.05)"));
            } catch (const std::exception& e) {
                r.detail.push_back(std::string("  info error: ") + e.what());
            }
        }
    }
    try {
        const TelescopePoint a{Column::outer, Angle{}, 1, true};
        const TelescopePoint b{Column::outer, Angle{}, 2, true};
        const auto p = pair_profile(a, b, {Rational(1, 5), Rational(3, 10)},
                                    {block_bounds(opt.telescope_block - 1), horizon}, 0);
        r.detail.push_back("  info Y6 gaps off the grid: delta=1/5 " +
                           detail::fmt((p.upper[0] - p.lower[0]).to_double()) + ", delta=3/10 " +
                           detail::fmt((p.upper[1] - p.lower[1]).to_double()));
    } catch (const std::exception& e) {
        r.detail.push_back(std::string("  info error: ") + e.what());
    }
    if (opt.telescope_block < 9) {
        try {
            const TelescopePoint a{Column::outer, Angle{}, 1, true};
            const TelescopePoint b{Column::outer, Angle(1, 32), 0, true};
            const CaseReport c = verify_case(a, b, block_bounds(opt.telescope_block + 1), Rational(1, 20), two_delta_grid);
            std::string line = "  info Y5 at l_" + std::to_string(opt.telescope_block + 1) + ":";
            for (const auto& row : c.rows) line += " " + detail::fmt(row.upper.to_double());
            r.detail.push_back(line + (c.pass ? " (within 0.05)" : " (outside 0.05)"));
        } catch (const std::exception& e) {
            r.detail.push_back(std::string("  info error: ") + e.what());
        }
    }
    return r;
}

// 7. Level counts of eta and the S-pair envelopes in Y.
inline CriterionResult criterion7(const Options&) {
    using namespace cantorwheel;
    CriterionResult r{7, "cantor wheel level counts and envelopes", true, {}, 0};
    const auto sched = WheelSchedule::standard();
    const auto eta = eta_series(sched.limit(), sched);
    std::string counts = "levels:";
    for (std::size_t m = 0; m < sched.blocks(); ++m) {
        const auto c = count_levels(m, eta, sched);
        r.pass = r.pass && c.pass;
        counts += " m=" + std::to_string(m) + (m % 2 == 0 ? " L=" + std::to_string(c.L) : " U=" + std::to_string(c.U)) +
                  ">=" + std::to_string(c.bound) + (c.pass ? "" : "(FAIL)");
    }
    r.detail.push_back(counts);
    const Rational delta(3, 2);
    const auto p = pair_profile_Y(CantorRadius(""), CantorRadius("", true), sched, {delta},
                                  {sched.s(4), sched.s(5), sched.s(6), sched.s(7)}, 2);
    const double up = p.upper[0].to_double();
    const double lo = p.lower[0].to_double();
    r.pass = r.pass && up >= 0.94 && lo <= 0.06;
    r.detail.push_back("r1=1, r2=2, delta=3/2 over s_6, s_7: upper " + detail::fmt(up) + " (need >= 0.94), lower " +
                       detail::fmt(lo) + " (need <= 0.06)");
    return r;
}

namespace detail {

inline cantorwheel::CantorRadius random_radius(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> len(0, 6);
    std::bernoulli_distribution coin(0.5);
    std::string digits;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) digits.push_back(coin(rng) ? '2' : '0');
    return cantorwheel::CantorRadius(digits, coin(rng));
}

}  // namespace detail

// 8. Existence of the distance limit for pairs in X.
inline CriterionResult criterion8(const Options& opt) {
    using namespace cantorwheel;
    CriterionResult r{8, "cantor wheel distance limits", true, {}, 0};
    const auto sched = WheelSchedule::standard();
    std::mt19937_64 rng(opt.seed + 8);
    std::uniform_int_distribution<std::uint64_t> height(1, 2);
    Rational worst(0);
    int constant_pairs = 0;
    for (int i = 0; i < 50; ++i) {
        WheelPoint a{detail::random_radius(rng), Angle(detail::random_unit_rational(rng, 64)), height(rng), Space::X};
        WheelPoint b{detail::random_radius(rng), Angle(detail::random_unit_rational(rng, 64)), height(rng), Space::X};
        if (i % 10 == 0) {
            b.r = a.r;
            b.k = a.k;
        }
        const auto c = limit_existence_check(a, b, 100000, 4, Rational(1, 100), sched);
        worst = max(worst, c.oscillation);
        if (!c.pass) r.pass = false;
        if (a.r == b.r && a.k == b.k) {
            ++constant_pairs;
            if (!(c.oscillation == Rational(0))) {
                r.pass = false;
                r.detail.push_back("same radius and height but oscillation " + c.oscillation.str());
            }
        }
    }
    r.detail.push_back("50 pairs over [1e5, 4e5]: max oscillation " + worst.str() + " = " +
                       detail::fmt(worst.to_double(), 6) + " (need < 0.01)");
    r.detail.push_back(std::to_string(constant_pairs) + " same-radius same-height pairs, all exactly constant");
    return r;
}

// The 30-pair sample of the absence scan.
inline std::vector<std::pair<fiberlab::FiberPoint, fiberlab::FiberPoint>> fiber_scan_sample(std::uint64_t seed) {
    using fiberlab::FiberPoint;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::uint64_t> delay(1, 5);
    std::vector<std::pair<FiberPoint, FiberPoint>> out;
    for (int i = 0; i < 10; ++i) out.push_back({{1, unit(rng)}, {1, unit(rng)}});
    for (int i = 0; i < 10; ++i) out.push_back({{1, unit(rng)}, {1 + delay(rng), unit(rng)}});
    for (int i = 0; i < 5; ++i) out.push_back({{1, unit(rng)}, {0, unit(rng)}});
    for (int i = 0; i < 4; ++i) out.push_back({{0, unit(rng)}, {0, unit(rng)}});
    out.push_back({{78, 0.9}, {78, 0.5}});
    return out;
}

// 9. The converging-fiber example: DC2 1/2 bounds and absence of DC2.
inline CriterionResult criterion9(const Options& opt) {
    using namespace fiberlab;
    CriterionResult r{9, "fiber example bounds and DC2 absence", false, {}, 0};
    const FiberSchedule sched = opt.fiber_schedule ? *opt.fiber_schedule : FiberSchedule::standard();
    const auto violations = sched.divisibility_violations();
    if (!violations.empty()) {
        r.detail.push_back("schedule invariant broken:");
        for (const auto& v : violations) r.detail.push_back("  " + v);
        return r;
    }
    try {
        const Rational tol(1, 20);
        const auto b = dc2half_bounds_check({1, 1.0}, {1, 0.5}, Rational(1, 4), opt.fiber_block, tol, sched);
        r.detail.push_back("u=(1,1), v=(1,1/2), delta=1/4, horizon m_" + std::to_string(opt.fiber_block) + " = " +
                           std::to_string(sched.m(opt.fiber_block)) + ": upper " + detail::fmt(b.upper) +
                           " in [4/7-0.05, 6/7+0.05], lower " + detail::fmt(b.lower) + " in [1/7-0.05, 3/7+0.05]");
        const std::vector<Rational> grid = {Rational(1, 1000), Rational(1, 100), Rational(1, 20),
                                            Rational(1, 10),   Rational(1, 4),   Rational(1, 2)};
        const auto scan = dc2_absence_scan(fiber_scan_sample(opt.seed + 9), opt.fiber_block, grid, tol, sched);
        std::size_t candidates = 0;
        std::size_t asymptotic = 0;
        for (const auto& e : scan) {
            candidates += e.dc2_candidate ? 1 : 0;
            asymptotic += e.asymptotic ? 1 : 0;
        }
        r.detail.push_back("absence scan: " + std::to_string(scan.size()) + " pairs, " + std::to_string(candidates) +
                           " DC2 candidates, " + std::to_string(asymptotic) + " asymptotic");
        r.pass = b.pass && candidates == 0;
    } catch (const std::exception& e) {
        r.detail.push_back(std::string("error: ") + e.what());
    }
    return r;
}

// 10. Count-level transport through the stretch conjugacy X -> Y.
inline CriterionResult criterion10(const Options& opt) {
    using namespace cantorwheel;
    CriterionResult r{10, "conjugacy transport", true, {}, 0};
    const auto sched = WheelSchedule::standard();
    std::mt19937_64 rng(opt.seed + 10);
    std::uniform_int_distribution<std::uint64_t> height(1, 3);
    std::vector<std::pair<Rational, Rational>> moduli;
    for (const Rational d : {Rational(1, 10), Rational(1, 4), Rational(1, 2)}) {
        moduli.emplace_back(d, d * Rational(2));
        moduli.emplace_back(d / Rational(2), d);
    }
    const std::uint64_t steps = 100000;
    std::size_t equal_counts = 0;
    std::size_t checks = 0;
    for (int i = 0; i < 10; ++i) {
        WheelPoint a{detail::random_radius(rng), Angle(detail::random_unit_rational(rng, 64)), height(rng), Space::X};
        WheelPoint b{detail::random_radius(rng), Angle(detail::random_unit_rational(rng, 64)), height(rng), Space::X};
        try {
            TransportChecker<WheelDistance, WheelDistance> checker(moduli);
            WheelPoint ya = stretch(a);
            WheelPoint yb = stretch(b);
            for (std::uint64_t m = 0; m < steps; ++m) {
                checker.push(cartesian_distance(a, b), cartesian_distance(ya, yb));
                a = step(a, sched);
                b = step(b, sched);
                ya = F_step(ya, sched);
                yb = F_step(yb, sched);
            }
            for (const auto& t : checker.results()) {
                ++checks;
                equal_counts += t.counts_equal ? 1 : 0;
                if (!t.pass) {
                    r.pass = false;
                    r.detail.push_back("pair " + std::to_string(i) + " (" + t.delta.str() + ", " + t.epsilon.str() +
                                       ") first violated at m=" + std::to_string(*t.first_violation));
                }
            }
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail.push_back("pair " + std::to_string(i) + " error: " + e.what());
        }
    }
    r.detail.push_back("10 pairs x " + std::to_string(moduli.size()) + " modulus pairs over 1e5 steps; " +
                       std::to_string(equal_counts) + " of " + std::to_string(checks) + " with identical counts");
    return r;
}

struct SyntheticProfile {
    std::string name;
    DistributionProfile profile;
    Rational tolerance;
    // Expected flags in the order dc1 dc2 dc2half dc3 proximal asymptotic distal li_yorke.
    std::string expected;
};

inline std::string verdict_flags(const PairVerdict& v) {
    std::string s;
    for (bool b : {v.dc1, v.dc2, v.dc2half, v.dc3, v.proximal, v.asymptotic, v.distal, v.li_yorke}) s += b ? '1' : '0';
    return s;
}

inline DistributionProfile synthetic(std::vector<Rational> deltas, std::vector<Rational> lower,
                                     std::vector<Rational> upper, double tail_min, double tail_max) {
    DistributionProfile p;
    p.deltas = std::move(deltas);
    p.lower = std::move(lower);
    p.upper = std::move(upper);
    p.checkpoints = {1};
    p.tail_min = tail_min;
    p.tail_max = tail_max;
    return p;
}

inline std::vector<SyntheticProfile> truth_table() {
    using R = Rational;
    const std::vector<R> g = {R(1, 20), R(1, 10), R(1, 5), R(2, 5), R(4, 5)};
    const std::vector<R> ones(5, R(1));
    std::vector<SyntheticProfile> t;
    t.push_back({"pure DC1", synthetic(g, {0, 0, 0, 0, 0}, ones, 0, 1), R(0), "11111001"});
    t.push_back({"DC1 with rising lower", synthetic(g, {0, 0, R(1, 4), R(1, 2), 1}, ones, 0, 1), R(0), "11111001"});
    t.push_back({"DC2 not DC1", synthetic(g, {R(1, 10), R(1, 10), R(1, 5), R(1, 2), 1}, ones, 0, 1), R(0), "01111001"});
    t.push_back({"DC2 not DC1, lower near 1/2", synthetic(g, {R(1, 2), R(1, 2), R(3, 5), R(3, 4), 1}, ones, 0, 1), R(0),
                 "01111001"});
    t.push_back({"DC2 1/2 not DC2", synthetic(g, {R(1, 7), R(1, 7), R(3, 7), 1, 1}, {R(6, 7), R(6, 7), R(6, 7), 1, 1}, 0, 1),
                 R(0), "00111001"});
    t.push_back({"DC2 1/2 not DC2, fiber-like",
                 synthetic(g, {R(1, 7), R(2, 7), R(3, 7), 1, 1}, {R(4, 7), R(4, 7), R(5, 7), 1, 1}, 0, 1), R(1, 20),
                 "00111001"});
    t.push_back({"DC3 not DC2 1/2, distal telescope",
                 synthetic({R(1, 200), R(1, 10), R(3, 10), R(2, 5), R(3, 5)}, {0, R(1, 5), R(3, 5), R(4, 5), 1},
                           {0, 1, 1, 1, 1}, 0.01, 1.3),
                 R(0), "00010010"});
    t.push_back({"DC3 not DC2 1/2, band", synthetic(g, {0, R(1, 4), R(1, 4), 1, 1}, {0, R(1, 2), R(1, 2), 1, 1}, 0.05, 0.5),
                 R(0), "00010010"});
    t.push_back({"DC3 not DC2 1/2, proximal", synthetic(g, {R(1, 10), R(1, 10), R(1, 5), 1, 1}, {R(1, 10), R(1, 10), R(1, 2), 1, 1}, 0, 0.5),
                 R(0), "00011001"});
    t.push_back({"asymptotic", synthetic(g, ones, ones, 0, 0), R(0), "00001100"});
    t.push_back({"distal, no chaos", synthetic(g, {0, 0, 0, 1, 1}, {0, 0, 0, 1, 1}, 0.3, 0.35), R(0), "00000010"});
    t.push_back({"gap inside tolerance",
                 synthetic(g, {R(1, 5), R(2, 5), R(1, 2), R(3, 5), 1},
                           {R(9, 40), R(17, 40), R(21, 40), R(5, 8), 1}, 0.1, 0.9),
                 R(1, 20), "00000010"});
    return t;
}

// 11. Classifier truth table, hierarchy included.
inline CriterionResult criterion11(const Options&) {
    CriterionResult r{11, "classifier truth table", true, {}, 0};
    int correct = 0;
    const auto table = truth_table();
    for (const auto& row : table) {
        const PairVerdict v = classify_pair(row.profile, row.tolerance);
        const std::string got = verdict_flags(v);
        const bool hierarchy = (!v.dc1 || v.dc2) && (!v.dc2 || v.dc2half) && (!v.dc2half || v.dc3) &&
                               (!v.dc2half || v.li_yorke);
        if (got == row.expected && hierarchy) {
            ++correct;
        } else {
            r.pass = false;
            r.detail.push_back(row.name + ": got " + got + ", expected " + row.expected +
                               (hierarchy ? "" : " (hierarchy broken)"));
        }
    }
    r.detail.insert(r.detail.begin(), std::to_string(correct) + " of " + std::to_string(table.size()) +
                                          " profiles classified as expected (flags dc1 dc2 dc2half dc3 prox asym distal LY)");
    return r;
}

inline std::vector<std::function<CriterionResult(const Options&)>> all_criteria() {
    return {criterion1, criterion2, criterion3, criterion4,  criterion5, criterion6,
            criterion7, criterion8, criterion9, criterion10, criterion11};
}

inline CriterionResult timed(const std::function<CriterionResult(const Options&)>& c, const Options& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
        r = c(opt);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail.push_back(std::string("error: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

inline std::string format_result(const CriterionResult& r, bool with_detail = true) {
    std::ostringstream os;
    os << (r.pass ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.name << " (" << detail::fmt(r.seconds, 2)
       << " s)\n";
    if (with_detail) {
        for (const auto& d : r.detail) os << "    " << d << '\n';
    }
    return os.str();
}

}  // namespace dchaos::acceptance
