#pragma once

// Circle-fiber skew product over the block odometer:
//   F(theta, omega) = (theta + p(omega), tau(omega)),   F((2,0), omega) = ((2,0), tau(omega)).
// M = (unit circle u {(2,0)}) x Omega with the metrics rho (Euclidean fiber
// metric) and rho' (same, except every circle point is at distance 1 from
// the isolated point).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dchaos/chaoscore.hpp"
#include "dchaos/odometer.hpp"
#include "dchaos/rational.hpp"

namespace dchaos::bss {

struct CirclePoint {
    Angle angle;
    friend bool operator==(const CirclePoint&, const CirclePoint&) = default;
};
struct IsolatedPoint {
    friend bool operator==(const IsolatedPoint&, const IsolatedPoint&) = default;
};

struct BssPoint {
    std::variant<CirclePoint, IsolatedPoint> fiber;
    OdometerState base;

    [[nodiscard]] bool isolated() const { return std::holds_alternative<IsolatedPoint>(fiber); }
    [[nodiscard]] const Angle& angle() const { return std::get<CirclePoint>(fiber).angle; }

    friend bool operator==(const BssPoint&, const BssPoint&) = default;
};

enum class Metric { rho, rho_prime };

class BssConfig {
  public:
    explicit BssConfig(BlockStructure structure)
        : structure_(std::make_shared<const BlockStructure>(std::move(structure))) {
        Rational prod(1);
        for (std::size_t i = 1; i <= structure_->blocks(); ++i) {
            const int n = structure_->length(i);
            if (n <= static_cast<int>(i)) throw std::invalid_argument("block " + std::to_string(i) + " too short");
            prod *= Rational((std::int64_t{1} << n) - (std::int64_t{1} << i), std::int64_t{1} << n);
            alpha_partials_.push_back(prod);
        }
    }

    static BssConfig standard(std::size_t blocks = 3) { return BssConfig(BlockStructure::standard(blocks)); }

    [[nodiscard]] const BlockStructure& structure() const { return *structure_; }
    [[nodiscard]] const std::shared_ptr<const BlockStructure>& structure_ptr() const { return structure_; }

    // prod_{l<=i} (2^{n_l} - 2^l) / 2^{n_l}; converges to the parameter alpha.
    [[nodiscard]] const Rational& alpha_partial(std::size_t i) const { return alpha_partials_.at(i - 1); }
    [[nodiscard]] const std::vector<Rational>& alpha_partials() const { return alpha_partials_; }

    // Lemma bound (2^{n_i-2} - 2^{i-1} - 1) * prod_{l<i} (2^{n_l} - 2^l).
    [[nodiscard]] std::int64_t lemma_bound(std::size_t i) const {
        check_block(i);
        __int128 b = (std::int64_t{1} << (structure_->length(i) - 2)) - (std::int64_t{1} << (i - 1)) - 1;
        for (std::size_t l = 1; l < i; ++l) {
            b *= (std::int64_t{1} << structure_->length(l)) - (std::int64_t{1} << l);
            if (b > INT64_MAX) throw std::overflow_error("lemma bound exceeds 64 bits");
        }
        return static_cast<std::int64_t>(b);
    }

    // 2^{m_i - 2}: the orbit window of the counting lemma.
    [[nodiscard]] std::int64_t window(std::size_t i) const {
        check_block(i);
        const int m = structure_->prefix(i);
        if (m - 2 > 62) throw std::overflow_error("window exceeds 64 bits");
        return std::int64_t{1} << (m - 2);
    }

    // alpha_i = lemma_bound(i) / window(i): the density guaranteed by the lemma.
    [[nodiscard]] Rational lemma_alpha(std::size_t i) const { return Rational(lemma_bound(i), window(i)); }

  private:
    std::shared_ptr<const BlockStructure> structure_;
    std::vector<Rational> alpha_partials_;

    void check_block(std::size_t i) const {
        if (i < 1 || i > structure_->blocks()) throw std::out_of_range("block index " + std::to_string(i));
    }
};

inline BssPoint step(const BssPoint& pt) {
    BssPoint next = pt;
    if (!pt.isolated()) {
        std::get<CirclePoint>(next.fiber).angle += rotation_angle(pt.base).angle();
    }
    next.base.advance();
    return next;
}

// Distance between two points of M, kept in symbolic form so that threshold
// tests are decided without rounding.
struct BssDistance {
    enum class Fiber { zero, chord, to_isolated, unit };
    Fiber kind = Fiber::zero;
    // chord: arc distance Delta in [0, 1/2], value 2 sin(pi Delta);
    // to_isolated: arc distance t of the circle point from angle 0, value sqrt(5 - 4 cos 2 pi t).
    Rational param{0};
    Rational base{0};  // rho_Omega

    [[nodiscard]] std::optional<Rational> exact_fiber() const {
        switch (kind) {
            case Fiber::zero: return Rational(0);
            case Fiber::unit: return Rational(1);
            case Fiber::chord:
                // sin(pi Delta) is rational only at Delta = 0, 1/6, 1/2.
                if (param == Rational(0)) return Rational(0);
                if (param == Rational(1, 6)) return Rational(1);
                if (param == Rational(1, 2)) return Rational(2);
                return std::nullopt;
            case Fiber::to_isolated:
                // 5 - 4 cos(2 pi t) is a rational square only at t = 0, 1/2.
                if (param == Rational(0)) return Rational(1);
                if (param == Rational(1, 2)) return Rational(3);
                return std::nullopt;
        }
        return std::nullopt;
    }

    [[nodiscard]] long double fiber_value() const {
        if (auto e = exact_fiber()) return e->to_long_double();
        const long double pi = std::numbers::pi_v<long double>;
        if (kind == Fiber::chord) return 2.0L * std::sin(pi * param.to_long_double());
        return std::sqrt(5.0L - 4.0L * std::cos(2.0L * pi * param.to_long_double()));
    }

    [[nodiscard]] double value() const {
        return static_cast<double>(std::max(fiber_value(), base.to_long_double()));
    }

    [[nodiscard]] std::optional<Rational> exact() const {
        if (auto e = exact_fiber()) return max(*e, base);
        return std::nullopt;
    }

    friend bool operator==(const BssDistance&, const BssDistance&) = default;
};

// Fiber value < delta.  Irrational fiber values are compared in long double
// and must clear delta by a wide margin; a near tie is reported, never guessed.
inline bool fiber_below(const BssDistance& d, const Rational& delta) {
    if (auto e = d.exact_fiber()) return *e < delta;
    const long double v = d.fiber_value();
    const long double t = delta.to_long_double();
    if (std::fabs(v - t) < 1e-12L) {
        throw std::domain_error("bss: fiber distance too close to threshold " + delta.str() + " to decide");
    }
    return v < t;
}

inline bool below(const BssDistance& d, const Rational& delta) { return d.base < delta && fiber_below(d, delta); }
inline double to_double(const BssDistance& d) { return d.value(); }

inline BssDistance distance(const BssPoint& a, const BssPoint& b, Metric which) {
    BssDistance d;
    d.base = omega_metric(a.base, b.base);
    if (a.isolated() && b.isolated()) {
        d.kind = BssDistance::Fiber::zero;
    } else if (!a.isolated() && !b.isolated()) {
        d.kind = BssDistance::Fiber::chord;
        d.param = circle_distance(a.angle(), b.angle());
        if (d.param == Rational(0)) d.kind = BssDistance::Fiber::zero;
    } else if (which == Metric::rho_prime) {
        d.kind = BssDistance::Fiber::unit;
    } else {
        const Angle& theta = a.isolated() ? b.angle() : a.angle();
        d.kind = BssDistance::Fiber::to_isolated;
        d.param = circle_distance(theta, Angle{});
    }
    return d;
}

// sum_{j<steps} p(tau^j start) mod 1.
inline DyadicAngle net_rotation(const OdometerState& start, std::uint64_t steps) {
    OdometerState s = start;
    DyadicAngle total;
    for (std::uint64_t j = 0; j < steps; ++j) {
        total += rotation_angle(s);
        s.advance();
    }
    return total;
}

struct PhiEntry {
    std::uint64_t evaluation = 0;
    Word word;
    Rational phi;  // accumulated block-l rotation, not reduced: lies in [0, 1]
    bool good = false;
};

struct PhiTable {
    std::size_t block = 0;
    int owner_bit = 0;
    std::vector<PhiEntry> entries;  // indexed by evaluation

    [[nodiscard]] std::size_t good_count() const {
        std::size_t c = 0;
        for (const auto& e : entries) c += e.good ? 1 : 0;
        return c;
    }
};

// Brute force: run tau from sigma(omega) (omega_l = owner_bit, other bits 0)
// for one full cycle of blocks 1..l and record, at the first visit of each
// block-l word, the sum of p over the earlier steps with k = l.
inline PhiTable phi_table(std::size_t l, int owner_bit, const BssConfig& config) {
    const auto& st = config.structure();
    if (l < 1 || l > st.blocks()) throw std::out_of_range("phi_table: block index " + std::to_string(l));
    if (owner_bit != 0 && owner_bit != 1) throw std::invalid_argument("phi_table: owner bit must be 0 or 1");
    if (st.prefix(l) > 30) throw std::overflow_error("phi_table: cycle of 2^" + std::to_string(st.prefix(l)) + " steps");

    // Blocks 1..l plus a guard block that absorbs the final carry.
    std::vector<int> lengths(st.lengths().begin(), st.lengths().begin() + static_cast<std::ptrdiff_t>(l));
    lengths.push_back(lengths.back() + 1);
    auto local = std::make_shared<const BlockStructure>(lengths);
    Word omega(l + 1, '0');
    omega[l - 1] = owner_bit ? '1' : '0';
    OdometerState s = spread(omega, local);

    const std::uint64_t words = std::uint64_t{1} << st.length(l);
    std::vector<std::optional<Rational>> phi(words);
    Rational acc(0);
    const std::uint64_t cycle = std::uint64_t{1} << st.prefix(l);
    for (std::uint64_t n = 0; n < cycle; ++n) {
        const std::uint64_t w = s.block(l);
        if (!phi[w]) phi[w] = acc;
        if (first_incomplete_block(s) == l) acc += rotation_angle(s).value();
        s.advance();
    }

    PhiTable table;
    table.block = l;
    table.owner_bit = owner_bit;
    const Rational target = frac(Rational(1 - owner_bit, 2));
    for (std::uint64_t w = 0; w < words; ++w) {
        if (!phi[w]) throw std::logic_error("phi_table: word never visited");
        PhiEntry e;
        e.evaluation = w;
        for (int j = 0; j < st.length(l); ++j) e.word.push_back(((w >> j) & 1U) ? '1' : '0');
        e.phi = *phi[w];
        e.good = frac(e.phi) == target;
        table.entries.push_back(std::move(e));
    }
    return table;
}

// Figure-style CSV: the first l-1 digits are separated from the rest by '-'.
inline std::string phi_table_csv(const PhiTable& t) {
    std::ostringstream os;
    os << "word,evaluation,phi,status\n";
    for (const auto& e : t.entries) {
        os << e.word.substr(0, t.block - 1) << '-' << e.word.substr(t.block - 1) << ',' << e.evaluation << ','
           << e.phi << ',' << (e.good ? "good" : "bad") << '\n';
    }
    return os.str();
}

struct LemmaCount {
    std::size_t block = 0;
    std::int64_t window = 0;
    std::int64_t count = 0;
    std::int64_t bound = 0;
    Rational target;
    bool pass = false;
};

// r_i = (1/2) sum_{j<=i} (1 - omega_j) mod 1.
inline Rational lemma_target(std::string_view omega, std::size_t i) {
    check_word(omega);
    if (omega.size() < i) throw std::invalid_argument("lemma_target: word shorter than block index");
    std::int64_t zeros = 0;
    for (std::size_t j = 0; j < i; ++j) zeros += omega[j] == '0' ? 1 : 0;
    return frac(Rational(zeros, 2));
}

// #{n in 1..2^{m_i-2} : net rotation of sigma(omega) after n steps = r_i}.
inline LemmaCount lemma_freq_count(std::string_view omega, std::size_t i, const BssConfig& config) {
    LemmaCount out;
    out.block = i;
    out.window = config.window(i);
    out.bound = config.lemma_bound(i);
    out.target = lemma_target(omega, i);
    OdometerState s = spread(omega, config.structure_ptr());
    DyadicAngle total;
    for (std::int64_t n = 1; n <= out.window; ++n) {
        total += rotation_angle(s);
        s.advance();
        if (total.value() == out.target) ++out.count;
    }
    out.pass = out.count >= out.bound;
    return out;
}

inline std::string lemma_record(const LemmaCount& c, std::string_view omega) {
    std::ostringstream os;
    os << "omega=" << omega << " block=" << c.block << " window=" << c.window << " target=" << c.target
       << " count=" << c.count << " bound=" << c.bound << " " << (c.pass ? "PASS" : "FAIL");
    return os.str();
}

// The point (1, 0, sigma(lambda(omega))) of the scrambled set.
inline BssPoint scrambled_point(std::string_view omega, const BssConfig& config) {
    const Word lam = lambda_embed(omega, config.structure().blocks());
    return BssPoint{CirclePoint{Angle{}}, spread(lam, config.structure_ptr())};
}

// Distances d(F^n s, F^n s') for n = first .. first + horizon - 1.  Both
// metrics are evaluated and required to agree at every step.
inline DistanceSeries<BssDistance> scrambled_pair_series(std::string_view omega, std::string_view omega_prime,
                                                          std::uint64_t horizon, const BssConfig& config,
                                                          std::uint64_t first = 0) {
    if (horizon == 0) throw std::invalid_argument("scrambled_pair_series: empty horizon");
    BssPoint s = scrambled_point(omega, config);
    BssPoint t = scrambled_point(omega_prime, config);
    for (std::uint64_t n = 0; n < first; ++n) {
        s = step(s);
        t = step(t);
    }
    std::vector<BssDistance> out;
    out.reserve(horizon);
    for (std::uint64_t n = 0; n < horizon; ++n) {
        if (n > 0) {
            s = step(s);
            t = step(t);
        }
        BssDistance d = distance(s, t, Metric::rho);
        if (!(d == distance(s, t, Metric::rho_prime))) {
            throw std::logic_error("bss: rho and rho' disagree on a scrambled pair at step " +
                                   std::to_string(first + n));
        }
        out.push_back(d);
    }
    return DistanceSeries<BssDistance>(std::move(out));
}

// Parity class of block index i for a pair of lambda words: true for A
// (equal parity of the first i bits), false for B.
inline bool same_parity(std::string_view a, std::string_view b, std::size_t i) {
    if (a.size() < i || b.size() < i) throw std::invalid_argument("same_parity: words shorter than index");
    int pa = 0;
    int pb = 0;
    for (std::size_t j = 0; j < i; ++j) {
        pa ^= a[j] - '0';
        pb ^= b[j] - '0';
    }
    return pa == pb;
}

}  // namespace dchaos::bss
