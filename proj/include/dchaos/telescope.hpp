#pragma once

// Two concentric columns of rings, r in {1/100, 2/100}, heights z in
// {1/n} u {0}.  f carries ring 1/n to ring 1/(n+1) rotating by phi^(r)_n and
// fixes the bottom ring.  The conjugate system (Y, g) lifts the inner column
// by 13/10.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dchaos/chaoscore.hpp"
#include "dchaos/rational.hpp"

namespace dchaos::telescope {

enum class Column { inner, outer };

inline Rational radius(Column c) { return c == Column::inner ? Rational(1, 100) : Rational(2, 100); }
inline const Rational& lift_offset() {
    static const Rational v(13, 10);
    return v;
}

struct TelescopePoint {
    Column column = Column::inner;
    Angle phi;
    std::uint64_t height = 1;  // z = 1/height; 0 marks the bottom ring z = 0
    bool lifted = false;       // point of Y rather than X

    [[nodiscard]] bool fixed() const { return height == 0; }
    [[nodiscard]] Rational z() const {
        Rational base = fixed() ? Rational(0) : Rational(1, static_cast<std::int64_t>(height));
        if (lifted && column == Column::inner) base += lift_offset();
        return base;
    }

    friend bool operator==(const TelescopePoint&, const TelescopePoint&) = default;
};

// l_k = sum_{i<=k} i^i, l_0 = 0.
inline std::uint64_t block_bounds(unsigned k) {
    if (k > 15) throw std::overflow_error("block_bounds: l_k beyond 64 bits for k > 15");
    std::uint64_t total = 0;
    for (unsigned i = 1; i <= k; ++i) {
        std::uint64_t p = 1;
        for (unsigned j = 0; j < i; ++j) p *= i;
        total += p;
    }
    return total;
}

// The k with l_{k-1} < n <= l_k.
inline unsigned block_of(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("block_of: step index starts at 1");
    unsigned k = 1;
    while (block_bounds(k) < n) ++k;
    return k;
}

inline Rational rotation(Column c, std::uint64_t n) {
    const auto k = static_cast<std::int64_t>(block_of(n));
    if (c == Column::inner || k % 2 == 1) return frac(Rational(1, k));
    return frac(Rational(2, k));
}

inline TelescopePoint step(const TelescopePoint& p) {
    if (p.fixed()) return p;
    TelescopePoint q = p;
    q.phi += Angle(rotation(p.column, p.height));
    ++q.height;
    return q;
}

inline TelescopePoint lift(TelescopePoint p) {
    if (p.lifted) throw std::invalid_argument("lift: point already in Y");
    p.lifted = true;
    return p;
}
inline TelescopePoint unlift(TelescopePoint p) {
    if (!p.lifted) throw std::invalid_argument("unlift: point not in Y");
    p.lifted = false;
    return p;
}

// g = Pi o f o Pi^{-1} on Y.
inline TelescopePoint g_step(const TelescopePoint& y) { return lift(step(unlift(y))); }

// Generic step: f on X, g on Y.
inline TelescopePoint advance(const TelescopePoint& p) { return p.lifted ? g_step(p) : step(p); }

// max{|r_a - r_b|, |z_a - z_b|, rho(phi_a, phi_b)}.
inline Rational distance(const TelescopePoint& a, const TelescopePoint& b) {
    if (a.lifted != b.lifted) throw std::invalid_argument("telescope distance: points from X and Y mixed");
    return max(max(abs(radius(a.column) - radius(b.column)), abs(a.z() - b.z())), circle_distance(a.phi, b.phi));
}

// A distance held as three unreduced nonnegative fractions whose maximum is
// the distance; thresholds are decided by cross-multiplication.
struct TelescopeDistance {
    struct Part {
        std::int64_t num = 0;
        std::int64_t den = 1;
    };
    std::array<Part, 3> parts{};

    [[nodiscard]] Rational exact() const {
        Rational m(0);
        for (const auto& p : parts) m = max(m, Rational(p.num, p.den));
        return m;
    }
    [[nodiscard]] double value() const {
        double m = 0;
        for (const auto& p : parts) m = std::max(m, static_cast<double>(p.num) / static_cast<double>(p.den));
        return m;
    }
};

inline bool below(const TelescopeDistance& d, const Rational& delta) {
    for (const auto& p : d.parts) {
        if (!(static_cast<__int128>(p.num) * delta.den() < static_cast<__int128>(delta.num()) * p.den)) return false;
    }
    return true;
}
inline double to_double(const TelescopeDistance& d) { return d.value(); }

// Integer-arithmetic orbit of a pair: angles are numerators over a common
// denominator D = lcm(1..K, den phi_a, den phi_b), where K is the last block
// reached.  Produces exactly the values of distance() along the orbit.
class PairOrbit {
  public:
    PairOrbit(const TelescopePoint& a, const TelescopePoint& b, std::uint64_t horizon) {
        if (a.lifted != b.lifted) throw std::invalid_argument("PairOrbit: points from X and Y mixed");
        std::uint64_t top = 1;
        for (const auto* p : {&a, &b}) {
            if (!p->fixed()) top = std::max(top, p->height + horizon);
        }
        const unsigned kmax = block_of(top);
        std::int64_t d = 1;
        for (unsigned k = 1; k <= kmax; ++k) d = std::lcm(d, static_cast<std::int64_t>(k));
        d = std::lcm(d, a.phi.value().den());
        d = std::lcm(d, b.phi.value().den());
        if (d > (std::int64_t{1} << 40)) throw std::overflow_error("PairOrbit: common angle denominator too large");
        den_ = d;
        s_[0] = init(a);
        s_[1] = init(b);
        lifted_ = a.lifted;
        dr_ = a.column == b.column ? 0 : 1;
    }

    [[nodiscard]] TelescopeDistance distance() const {
        TelescopeDistance out;
        out.parts[0] = {dr_, 100};
        // z = (zn / zd), with the lift folded in for the inner column of Y.
        auto z = [&](const State& s, std::int64_t& num, std::int64_t& den) {
            if (s.height == 0) {
                num = 0;
                den = 1;
            } else {
                num = 1;
                den = static_cast<std::int64_t>(s.height);
            }
            if (lifted_ && s.inner) {
                num = num * 10 + 13 * den;
                den *= 10;
            }
        };
        std::int64_t an = 0, ad = 1, bn = 0, bd = 1;
        z(s_[0], an, ad);
        z(s_[1], bn, bd);
        __int128 num = static_cast<__int128>(an) * bd - static_cast<__int128>(bn) * ad;
        if (num < 0) num = -num;
        __int128 den = static_cast<__int128>(ad) * bd;
        if (den > INT64_MAX || num > INT64_MAX) {
            const Rational r = abs(Rational(an, ad) - Rational(bn, bd));
            out.parts[1] = {r.num(), r.den()};
        } else {
            out.parts[1] = {static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
        }
        std::int64_t diff = s_[0].angle - s_[1].angle;
        if (diff < 0) diff = -diff;
        out.parts[2] = {std::min(diff, den_ - diff), den_};
        return out;
    }

    void advance() {
        for (auto& s : s_) {
            if (s.height == 0) continue;
            while (s.height > s.block_end) {
                ++s.block;
                s.block_end = block_bounds(s.block);
            }
            const std::int64_t k = s.block;
            const std::int64_t rot = (s.inner || k % 2 == 1) ? den_ / k : (2 * den_ / k) % den_;
            s.angle = (s.angle + rot) % den_;
            ++s.height;
        }
    }

    [[nodiscard]] TelescopePoint point(std::size_t i) const {
        const State& s = s_.at(i);
        TelescopePoint p;
        p.column = s.inner ? Column::inner : Column::outer;
        p.phi = Angle(s.angle, den_);
        p.height = s.height;
        p.lifted = lifted_;
        return p;
    }

  private:
    struct State {
        bool inner = true;
        std::int64_t angle = 0;
        std::uint64_t height = 0;
        unsigned block = 1;
        std::uint64_t block_end = 1;
    };
    std::array<State, 2> s_{};
    std::int64_t den_ = 1;
    std::int64_t dr_ = 0;
    bool lifted_ = false;

    [[nodiscard]] State init(const TelescopePoint& p) const {
        State s;
        s.inner = p.column == Column::inner;
        s.angle = p.phi.value().num() * (den_ / p.phi.value().den());
        s.height = p.height;
        if (p.height != 0) {
            s.block = block_of(p.height);
            s.block_end = block_bounds(s.block);
        }
        return s;
    }
};

// Streams the pair's distances through a profile accumulator.
inline DistributionProfile pair_profile(const TelescopePoint& a, const TelescopePoint& b,
                                        std::vector<Rational> deltas, std::vector<std::uint64_t> checkpoints,
                                        std::size_t burn_in) {
    if (checkpoints.empty()) throw std::invalid_argument("pair_profile: no checkpoints");
    ProfileAccumulator<TelescopeDistance> acc(std::move(deltas), checkpoints, burn_in);
    PairOrbit orbit(a, b, acc.horizon());
    while (!acc.done()) {
        acc.push(orbit.distance());
        orbit.advance();
    }
    return acc.finish();
}

struct LatticeCount {
    std::int64_t pi = 0;
    Rational lower_bound;
    Rational upper_bound;
    bool pass = false;
};

// pi_k = #{0 <= i < k : rho(phi_x + i/k, phi_y) < delta}; the lattice lemma
// asserts 2 delta k - 1 <= pi_k <= 2 delta k + 1.
inline LatticeCount lattice_count(const Angle& phi_x, const Angle& phi_y, std::int64_t k, const Rational& delta) {
    if (k < 1) throw std::invalid_argument("lattice_count: k must be positive");
    if (delta <= Rational(0) || delta >= Rational(1, 2)) {
        throw std::invalid_argument("lattice_count: delta must lie in (0, 1/2)");
    }
    LatticeCount out;
    for (std::int64_t i = 0; i < k; ++i) {
        if (circle_distance(phi_x + Angle(i, k), phi_y) < delta) ++out.pi;
    }
    const Rational centre = Rational(2) * delta * Rational(k);
    out.lower_bound = centre - Rational(1);
    out.upper_bound = centre + Rational(1);
    out.pass = out.lower_bound <= Rational(out.pi) && Rational(out.pi) <= out.upper_bound;
    return out;
}

enum class Case { Y1, Y2, Y3, Y4, Y5, Y6 };

inline std::string to_string(Case c) {
    static const char* names[] = {"Y1", "Y2", "Y3", "Y4", "Y5", "Y6"};
    return names[static_cast<int>(c)];
}

// The case tree for pairs of distinct points of Y.
inline Case case_label(const TelescopePoint& a, const TelescopePoint& b) {
    if (!a.lifted || !b.lifted) throw std::invalid_argument("case_label: points must lie in Y");
    if (a == b) throw std::invalid_argument("case_label: points are equal");
    if (a.column != b.column) return Case::Y1;
    if (a.z() == b.z()) return Case::Y2;
    if (a.column == Column::inner) return (a.fixed() || b.fixed()) ? Case::Y4 : Case::Y3;
    return (a.fixed() || b.fixed()) ? Case::Y5 : Case::Y6;
}

// Returns K with l_K == horizon.
inline unsigned horizon_block(std::uint64_t horizon) {
    for (unsigned k = 1; k <= 15; ++k) {
        if (block_bounds(k) == horizon) return k;
        if (block_bounds(k) > horizon) break;
    }
    throw std::invalid_argument("horizon " + std::to_string(horizon) + " is not a block boundary l_K");
}

struct CaseRow {
    Rational delta;
    Rational lower;
    Rational upper;
    std::string expected;
    bool pass = true;
};

struct CaseReport {
    Case label = Case::Y1;
    std::uint64_t horizon = 0;
    Rational tolerance;
    std::vector<CaseRow> rows;
    double terminal_distance = 0;
    bool constant = false;
    // l_{K-1}/l_K + K/l_{K-1}, the finite-size term of the limit argument.
    double deviation_bound = 0;
    bool pass = false;
};

// Finite-horizon check of the conclusion of each case.
//   Y1: terminal distance within tol of 13/10.
//   Y2: the distance series is exactly constant, equal to rho(phi_x, phi_y).
//   Y3, Y6: upper - lower <= tol at every grid delta over checkpoints l_{K-1}, l_K.
//   Y4, Y5: empirical fraction at l_K within tol of 2 delta for delta < 1/2,
//           within tol of 1 for delta >= 1/2 + tol.
inline CaseReport verify_case(const TelescopePoint& a, const TelescopePoint& b, std::uint64_t horizon,
                              const Rational& tolerance, std::vector<Rational> grid) {
    const unsigned K = horizon_block(horizon);
    if (K < 2) throw std::invalid_argument("verify_case: horizon must be at least l_2");
    CaseReport rep;
    rep.label = case_label(a, b);
    rep.horizon = horizon;
    rep.tolerance = tolerance;
    const double lk1 = static_cast<double>(block_bounds(K - 1));
    rep.deviation_bound = lk1 / static_cast<double>(horizon) + static_cast<double>(K) / lk1;

    if (rep.label == Case::Y1 || rep.label == Case::Y2) {
        PairOrbit orbit(a, b, horizon);
        const Rational first = orbit.distance().exact();
        bool constant = true;
        TelescopeDistance last = orbit.distance();
        for (std::uint64_t n = 1; n < horizon; ++n) {
            orbit.advance();
            last = orbit.distance();
            if (rep.label == Case::Y2 && !(last.exact() == first)) constant = false;
        }
        rep.terminal_distance = last.value();
        if (rep.label == Case::Y1) {
            rep.pass = std::fabs(rep.terminal_distance - lift_offset().to_double()) <= tolerance.to_double();
        } else {
            rep.constant = constant;
            rep.pass = constant && first == circle_distance(a.phi, b.phi);
        }
        return rep;
    }

    const bool gap_case = rep.label == Case::Y3 || rep.label == Case::Y6;
    std::vector<std::uint64_t> checkpoints;
    if (gap_case) checkpoints.push_back(block_bounds(K - 1));
    checkpoints.push_back(horizon);
    const DistributionProfile prof = pair_profile(a, b, grid, checkpoints, 0);
    rep.terminal_distance = prof.tail_max;
    rep.pass = true;
    const Rational half(1, 2);
    for (std::size_t i = 0; i < prof.deltas.size(); ++i) {
        CaseRow row{prof.deltas[i], prof.lower[i], prof.upper[i], "", true};
        if (gap_case) {
            row.expected = "gap<=" + tolerance.str();
            row.pass = prof.upper[i] - prof.lower[i] <= tolerance;
        } else if (row.delta < half) {
            const Rational target = Rational(2) * row.delta;
            row.expected = target.str();
            row.pass = abs(row.lower - target) <= tolerance && abs(row.upper - target) <= tolerance;
        } else if (row.delta >= half + tolerance) {
            row.expected = "1";
            row.pass = abs(row.lower - Rational(1)) <= tolerance && abs(row.upper - Rational(1)) <= tolerance;
        } else {
            row.expected = "-";
        }
        rep.pass = rep.pass && row.pass;
        rep.rows.push_back(row);
    }
    return rep;
}

struct Dc3Row {
    Rational delta;
    Rational lower;
    Rational upper;
    double upper_needed = 0;   // 1 - l_{K-1}/l_K - tol at the odd block end
    double lower_allowed = 0;  // 2 delta + 1/K + l_{K-1}/l_K + tol at the even block end
    bool pass = false;
};

struct Dc3Report {
    std::uint64_t horizon = 0;
    std::vector<std::uint64_t> checkpoints;
    DistributionProfile profile;
    std::vector<Dc3Row> rows;
    bool pass = false;
};

// x = (0.01, 0, 1), y = (0.02, 0, 1) in X.  The angles agree throughout odd
// blocks (both rotate by 1/k) and drift apart in even blocks, so the upper
// envelope is attained at the end of odd blocks and the lower one at the
// end of even blocks.
inline Dc3Report dc3_pair_check(std::uint64_t horizon, std::vector<Rational> grid, const Rational& tolerance) {
    const unsigned K = horizon_block(horizon);
    if (K < 3) throw std::invalid_argument("dc3_pair_check: horizon must be at least l_3");
    Dc3Report rep;
    rep.horizon = horizon;
    rep.checkpoints = {block_bounds(K - 1), horizon};
    const TelescopePoint x{Column::inner, Angle{}, 1, false};
    const TelescopePoint y{Column::outer, Angle{}, 1, false};
    rep.profile = pair_profile(x, y, grid, rep.checkpoints, 0);

    const unsigned k_odd = K % 2 == 1 ? K : K - 1;
    const unsigned k_even = K % 2 == 0 ? K : K - 1;
    auto ratio = [](unsigned k) {
        return static_cast<double>(block_bounds(k - 1)) / static_cast<double>(block_bounds(k));
    };
    const double tol = tolerance.to_double();
    rep.pass = true;
    for (std::size_t i = 0; i < rep.profile.deltas.size(); ++i) {
        Dc3Row row;
        row.delta = rep.profile.deltas[i];
        row.lower = rep.profile.lower[i];
        row.upper = rep.profile.upper[i];
        if (row.delta <= Rational(1, 100)) {
            row.upper_needed = 0;
            row.lower_allowed = 0;
            row.pass = row.lower == Rational(0) && row.upper == Rational(0);
        } else if (row.delta < Rational(1, 2)) {
            row.upper_needed = 1 - ratio(k_odd) - tol;
            row.lower_allowed = 2 * row.delta.to_double() + 1.0 / k_even + ratio(k_even) + tol;
            row.pass = row.upper.to_double() >= row.upper_needed && row.lower.to_double() <= row.lower_allowed;
        } else {
            row.upper_needed = 1 - tol;
            row.lower_allowed = 1;
            row.pass = row.upper.to_double() >= row.upper_needed;
        }
        rep.pass = rep.pass && row.pass;
        rep.rows.push_back(row);
    }
    return rep;
}

inline std::string case_csv(const CaseReport& r) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(9);
    os << "delta,lower,upper,expected,pass\n";
    for (const auto& row : r.rows) {
        os << row.delta << ',' << row.lower.to_double() << ',' << row.upper.to_double() << ',' << row.expected << ','
           << (row.pass ? "true" : "false") << '\n';
    }
    return os.str();
}

inline std::string dc3_csv(const Dc3Report& r) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(9);
    os << "delta,lower,upper,expected,pass\n";
    for (const auto& row : r.rows) {
        os << row.delta << ',' << row.lower.to_double() << ',' << row.upper.to_double() << ",upper>="
           << row.upper_needed << ";lower<=" << row.lower_allowed << ',' << (row.pass ? "true" : "false") << '\n';
    }
    return os.str();
}

}  // namespace dchaos::telescope
