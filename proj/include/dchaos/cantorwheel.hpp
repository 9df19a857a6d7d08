#pragma once

// Concentric cylinders over the radii C + 1 (C the middle-thirds Cantor
// set).  Heights 1/k descend to 0, each step rotating by p(k); the bottom
// level is fixed.  The conjugate (Y, F) doubles the x-coordinate where x < 0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dchaos/chaoscore.hpp"
#include "dchaos/odometer.hpp"
#include "dchaos/rational.hpp"

namespace dchaos::cantorwheel {

// 1 + sum_j d_j 3^{-j}, d_j in {0, 2}; an optional tail of repeating 2s adds 3^{-D}.
class CantorRadius {
  public:
    CantorRadius() = default;
    explicit CantorRadius(std::string digits, bool repeat_two = false)
        : digits_(std::move(digits)), repeat_two_(repeat_two) {
        if (digits_.size() > 38) throw std::invalid_argument("CantorRadius: depth beyond 38 digits");
        for (char c : digits_) {
            if (c != '0' && c != '2') throw std::invalid_argument("CantorRadius: ternary digit must be 0 or 2");
        }
        Rational v(1);
        std::int64_t p = 1;
        for (char c : digits_) {
            p *= 3;
            if (c == '2') v += Rational(2, p);
        }
        if (repeat_two_) v += Rational(1, p);
        value_ = v;
    }

    // "0202" or "0202(2)" for a repeating tail of 2s.
    static CantorRadius parse(std::string_view text) {
        const std::string_view tail = "(2)";
        if (text.size() >= tail.size() && text.substr(text.size() - tail.size()) == tail) {
            return CantorRadius(std::string(text.substr(0, text.size() - tail.size())), true);
        }
        return CantorRadius(std::string(text));
    }

    [[nodiscard]] const std::string& digits() const { return digits_; }
    [[nodiscard]] bool repeat_two() const { return repeat_two_; }
    [[nodiscard]] const Rational& value() const { return value_; }
    [[nodiscard]] std::string str() const { return digits_ + (repeat_two_ ? "(2)" : ""); }

    friend bool operator==(const CantorRadius& a, const CantorRadius& b) { return a.value_ == b.value_; }

  private:
    std::string digits_;
    bool repeat_two_ = false;
    Rational value_{1};
};

class WheelSchedule {
  public:
    explicit WheelSchedule(std::vector<std::uint64_t> n) : n_(std::move(n)) {
        if (n_.empty()) throw std::invalid_argument("WheelSchedule: no blocks");
        if (n_.size() > 40) throw std::invalid_argument("WheelSchedule: at most 40 blocks");
        std::uint64_t s = 0;
        for (std::size_t m = 0; m < n_.size(); ++m) {
            if (m > 0 && n_[m] <= n_[m - 1]) throw std::invalid_argument("WheelSchedule: n_m must increase");
            if (n_[m] < (std::uint64_t{1} << m)) {
                throw std::invalid_argument("WheelSchedule: n_" + std::to_string(m) + " shorter than its ramp 2^m");
            }
            s_.push_back(s);
            s += n_[m];
        }
        s_.push_back(s);
    }

    // n_m = 4^m m!, m = 0..blocks-1.
    static WheelSchedule standard(std::size_t blocks = 7) {
        std::vector<std::uint64_t> n;
        std::uint64_t v = 1;
        for (std::size_t m = 0; m < blocks; ++m) {
            if (m > 0) v *= 4 * m;
            n.push_back(v);
        }
        return WheelSchedule(std::move(n));
    }

    [[nodiscard]] std::size_t blocks() const { return n_.size(); }
    [[nodiscard]] std::uint64_t n(std::size_t m) const { return n_.at(m); }
    // s_m = sum_{i<m} n_i; s(blocks()) is the last index covered.
    [[nodiscard]] std::uint64_t s(std::size_t m) const { return s_.at(m); }
    [[nodiscard]] std::uint64_t limit() const { return s_.back(); }

    // The m with s_m < k <= s_m + n_m.
    [[nodiscard]] std::size_t block_of(std::uint64_t k) const {
        if (k == 0 || k > limit()) throw std::out_of_range("WheelSchedule: index " + std::to_string(k) + " outside schedule");
        const auto it = std::lower_bound(s_.begin() + 1, s_.end(), k);
        return static_cast<std::size_t>(it - s_.begin()) - 1;
    }

  private:
    std::vector<std::uint64_t> n_;
    std::vector<std::uint64_t> s_;
};

// p(k) = 1/2^{m+1} on the ramp s_m < k <= s_m + 2^m, 0 on the rest of block m.
inline DyadicAngle schedule_angle(std::uint64_t k, const WheelSchedule& sched) {
    const std::size_t m = sched.block_of(k);
    if (k <= sched.s(m) + (std::uint64_t{1} << m)) return DyadicAngle::inverse_power(static_cast<int>(m + 1));
    return DyadicAngle{};
}

// eta^i = sum_{j<=i} p(j) mod 1 for i = 0..horizon.
inline std::vector<DyadicAngle> eta_series(std::uint64_t horizon, const WheelSchedule& sched) {
    if (horizon > sched.limit()) throw std::out_of_range("eta_series: horizon beyond schedule");
    std::vector<DyadicAngle> eta;
    eta.reserve(horizon + 1);
    eta.emplace_back();
    for (std::uint64_t i = 1; i <= horizon; ++i) eta.push_back(eta.back() + schedule_angle(i, sched));
    return eta;
}

struct LevelCount {
    std::size_t block = 0;
    std::uint64_t upto = 0;  // s_m + n_m
    std::uint64_t U = 0;     // #{i <= upto : eta^i = 0}
    std::uint64_t L = 0;     // #{i <= upto : eta^i = 1/2}
    std::int64_t bound = 0;  // n_m - 2^m, applied to L for even m, to U for odd m
    bool pass = false;
};

inline LevelCount count_levels(std::size_t m, const std::vector<DyadicAngle>& eta, const WheelSchedule& sched) {
    if (m >= sched.blocks()) throw std::out_of_range("count_levels: block beyond schedule");
    LevelCount c;
    c.block = m;
    c.upto = sched.s(m) + sched.n(m);
    if (eta.size() <= c.upto) throw std::out_of_range("count_levels: eta series too short");
    const DyadicAngle half(Rational(1, 2));
    for (std::uint64_t i = 0; i <= c.upto; ++i) {
        if (eta[i] == DyadicAngle{}) ++c.U;
        if (eta[i] == half) ++c.L;
    }
    c.bound = static_cast<std::int64_t>(sched.n(m)) - (std::int64_t{1} << m);
    const std::uint64_t counted = m % 2 == 0 ? c.L : c.U;
    c.pass = static_cast<std::int64_t>(counted) >= c.bound;
    return c;
}

inline LevelCount count_levels(std::size_t m, const WheelSchedule& sched) {
    return count_levels(m, eta_series(sched.s(m) + sched.n(m), sched), sched);
}

enum class Space { X, Y };

struct WheelPoint {
    CantorRadius r;
    Angle phi;
    std::uint64_t k = 1;  // z = 1/k; 0 marks a fixed point (z = 0)
    Space space = Space::X;

    [[nodiscard]] bool fixed() const { return k == 0; }
    friend bool operator==(const WheelPoint&, const WheelPoint&) = default;
};

inline WheelPoint step(const WheelPoint& p, const WheelSchedule& sched) {
    if (p.fixed()) return p;
    WheelPoint q = p;
    q.phi += schedule_angle(p.k, sched).angle();
    ++q.k;
    return q;
}

inline WheelPoint stretch(WheelPoint p) {
    if (p.space != Space::X) throw std::invalid_argument("stretch: point not in X");
    p.space = Space::Y;
    return p;
}
inline WheelPoint unstretch(WheelPoint p) {
    if (p.space != Space::Y) throw std::invalid_argument("unstretch: point not in Y");
    p.space = Space::X;
    return p;
}

// F = Pi o f o Pi^{-1} on Y.
inline WheelPoint F_step(const WheelPoint& y, const WheelSchedule& sched) {
    return stretch(step(unstretch(y), sched));
}

// A coordinate that is exact (rational) when the angle is a multiple of a
// quarter turn and long double otherwise.
struct Coord {
    std::optional<Rational> exact;
    long double approx = 0;
};

inline Coord make_coord(const Rational& v) { return Coord{v, v.to_long_double()}; }

// Unit-circle cos and sin of 2 pi phi, exact on quarter turns.
inline std::pair<Coord, Coord> unit_cos_sin(const Angle& phi) {
    const Rational q = phi.value() * Rational(4);
    if (q.den() == 1) {
        static const int c[] = {1, 0, -1, 0};
        static const int s[] = {0, 1, 0, -1};
        const auto i = static_cast<std::size_t>(q.num());
        return {make_coord(Rational(c[i])), make_coord(Rational(s[i]))};
    }
    const long double a = 2.0L * std::numbers::pi_v<long double> * phi.value().to_long_double();
    return {Coord{std::nullopt, std::cos(a)}, Coord{std::nullopt, std::sin(a)}};
}

inline Coord scale(const Coord& c, const Rational& f) {
    if (c.exact) return make_coord(*c.exact * f);
    return Coord{std::nullopt, c.approx * f.to_long_double()};
}

struct Cartesian {
    Coord x;
    Coord y;
    Rational z;
};

// Embedding in R^3; points of Y carry the x-doubling on x < 0.
inline Cartesian cartesian(const WheelPoint& p) {
    auto [c, s] = unit_cos_sin(p.phi);
    Cartesian out{scale(c, p.r.value()), scale(s, p.r.value()),
                  p.fixed() ? Rational(0) : Rational(1, static_cast<std::int64_t>(p.k))};
    if (p.space == Space::Y && out.x.approx < 0) out.x = scale(out.x, Rational(2));
    return out;
}

struct WheelDistance {
    std::optional<Rational> exact;
    long double approx = 0;
};

inline bool below(const WheelDistance& d, const Rational& delta) {
    if (d.exact) return *d.exact < delta;
    const long double t = delta.to_long_double();
    if (std::fabs(d.approx - t) < 1e-12L) {
        throw std::domain_error("cantorwheel: distance too close to threshold " + delta.str() + " to decide");
    }
    return d.approx < t;
}
inline double to_double(const WheelDistance& d) { return static_cast<double>(d.approx); }

inline WheelDistance coord_gap(const Coord& a, const Coord& b) {
    if (a.exact && b.exact) {
        const Rational g = abs(*a.exact - *b.exact);
        return {g, g.to_long_double()};
    }
    return {std::nullopt, std::fabs(a.approx - b.approx)};
}

inline WheelDistance max_distance(const WheelDistance& a, const WheelDistance& b) {
    WheelDistance out;
    out.approx = std::max(a.approx, b.approx);
    if (a.exact && b.exact) {
        out.exact = max(*a.exact, *b.exact);
        out.approx = out.exact->to_long_double();
    }
    return out;
}

// max(|dx|, |dy|, |dz|) in the ambient coordinates of the points' space.
inline WheelDistance cartesian_distance(const WheelPoint& a, const WheelPoint& b) {
    if (a.space != b.space) throw std::invalid_argument("cartesian_distance: points from X and Y mixed");
    const Cartesian ca = cartesian(a);
    const Cartesian cb = cartesian(b);
    const Rational dz = abs(ca.z - cb.z);
    return max_distance(max_distance(coord_gap(ca.x, cb.x), coord_gap(ca.y, cb.y)), {dz, dz.to_long_double()});
}

// max{|r_x - r_y|, rho(phi_x, phi_y), |1/k_x - 1/k_y|}, the metric on X used
// for the limit argument.
inline Rational cylinder_distance(const WheelPoint& a, const WheelPoint& b) {
    if (a.space != Space::X || b.space != Space::X) throw std::invalid_argument("cylinder_distance: points must lie in X");
    const Rational za = a.fixed() ? Rational(0) : Rational(1, static_cast<std::int64_t>(a.k));
    const Rational zb = b.fixed() ? Rational(0) : Rational(1, static_cast<std::int64_t>(b.k));
    return max(max(abs(a.r.value() - b.r.value()), circle_distance(a.phi, b.phi)), abs(za - zb));
}

// The point (r, 0, 1) of S, in the given space.
inline WheelPoint s_point(const CantorRadius& r, Space space) { return WheelPoint{r, Angle{}, 1, space}; }

// Y-distances of an S-pair for i = 0..horizon-1.
inline DistanceSeries<WheelDistance> pair_series_Y(const CantorRadius& r1, const CantorRadius& r2,
                                                   std::uint64_t horizon, const WheelSchedule& sched) {
    if (horizon == 0) throw std::invalid_argument("pair_series_Y: empty horizon");
    if (horizon > sched.limit()) throw std::out_of_range("pair_series_Y: horizon beyond schedule");
    WheelPoint a = s_point(r1, Space::Y);
    WheelPoint b = s_point(r2, Space::Y);
    std::vector<WheelDistance> out;
    out.reserve(horizon);
    for (std::uint64_t i = 0; i < horizon; ++i) {
        if (i > 0) {
            a = F_step(a, sched);
            b = F_step(b, sched);
        }
        out.push_back(cartesian_distance(a, b));
    }
    return DistanceSeries<WheelDistance>(std::move(out));
}

// Streams the Y-distances of an S-pair through a profile accumulator.
inline DistributionProfile pair_profile_Y(const CantorRadius& r1, const CantorRadius& r2, const WheelSchedule& sched,
                                          std::vector<Rational> deltas, std::vector<std::uint64_t> checkpoints,
                                          std::size_t burn_in) {
    ProfileAccumulator<WheelDistance> acc(std::move(deltas), std::move(checkpoints), burn_in);
    if (acc.horizon() > sched.limit()) throw std::out_of_range("pair_profile_Y: horizon beyond schedule");
    WheelPoint a = s_point(r1, Space::Y);
    WheelPoint b = s_point(r2, Space::Y);
    while (!acc.done()) {
        acc.push(cartesian_distance(a, b));
        a = F_step(a, sched);
        b = F_step(b, sched);
    }
    return acc.finish();
}

struct LimitCheck {
    Rational min_distance;
    Rational max_distance;
    Rational oscillation;
    bool pass = false;
};

// Oscillation of the X-distance (cylinder metric) over steps [N, factor N].
inline LimitCheck limit_existence_check(const WheelPoint& a, const WheelPoint& b, std::uint64_t window_start,
                                        std::uint64_t window_factor, const Rational& tolerance,
                                        const WheelSchedule& sched) {
    if (a.fixed() || b.fixed()) throw std::invalid_argument("limit_existence_check: fixed point supplied");
    if (window_start == 0 || window_factor < 1) throw std::invalid_argument("limit_existence_check: empty window");
    const std::uint64_t end = window_start * window_factor;
    if (std::max(a.k, b.k) + end > sched.limit()) throw std::out_of_range("limit_existence_check: window beyond schedule");
    WheelPoint x = a;
    WheelPoint y = b;
    for (std::uint64_t n = 0; n < window_start; ++n) {
        x = step(x, sched);
        y = step(y, sched);
    }
    LimitCheck out;
    out.min_distance = out.max_distance = cylinder_distance(x, y);
    for (std::uint64_t n = window_start; n < end; ++n) {
        x = step(x, sched);
        y = step(y, sched);
        const Rational d = cylinder_distance(x, y);
        out.min_distance = min(out.min_distance, d);
        out.max_distance = max(out.max_distance, d);
    }
    out.oscillation = out.max_distance - out.min_distance;
    out.pass = out.oscillation < tolerance;
    return out;
}

inline std::string schedule_csv(const WheelSchedule& sched) {
    std::ostringstream os;
    os << "m,n_m,s_m\n";
    for (std::size_t m = 0; m < sched.blocks(); ++m) os << m << ',' << sched.n(m) << ',' << sched.s(m) << '\n';
    return os.str();
}

inline std::string levels_csv(const std::vector<LevelCount>& rows) {
    std::ostringstream os;
    os << "m,upto,U,L,bound,pass\n";
    for (const auto& c : rows) {
        os << c.block << ',' << c.upto << ',' << c.U << ',' << c.L << ',' << c.bound << ','
           << (c.pass ? "true" : "false") << '\n';
    }
    return os.str();
}

}  // namespace dchaos::cantorwheel
