#pragma once

// Distribution functions of orbit distances and the chaos-hierarchy
// classifier.
//
// The lower/upper distribution functions of a pair are liminf/limsup over m of
//     #{0 <= k < m : d_k < delta} / m.
// Limits are estimated along a caller-supplied checkpoint schedule (the block
// boundaries where each construction attains its extremes): lower(delta) is
// the minimum and upper(delta) the maximum of the empirical fraction over the
// checkpoints that survive burn-in.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dchaos/rational.hpp"

namespace dchaos {

// A position on the circle R/Z, always reduced to [0, 1).
class Angle {
  public:
    Angle() = default;
    explicit Angle(const Rational& v) : value_(frac(v)) {}
    Angle(Rational::int_type n, Rational::int_type d) : value_(frac(Rational(n, d))) {}

    [[nodiscard]] const Rational& value() const { return value_; }

    Angle operator+(const Angle& o) const { return Angle(value_ + o.value_); }
    Angle operator-(const Angle& o) const { return Angle(value_ - o.value_); }
    Angle& operator+=(const Angle& o) { return *this = *this + o; }

    friend bool operator==(const Angle&, const Angle&) = default;
    friend std::ostream& operator<<(std::ostream& os, const Angle& a) { return os << a.value_; }

  private:
    Rational value_{0};
};

// Arc-length distance on the unit-circumference circle, in [0, 1/2].
inline Rational circle_distance(const Angle& a, const Angle& b) {
    const Rational diff = abs(a.value() - b.value());
    return min(diff, Rational(1) - diff);
}

// Threshold predicate d < delta.  Distance types other than Rational and
// double provide their own overload, found by argument-dependent lookup.
inline bool below(const Rational& d, const Rational& delta) { return d < delta; }
inline bool below(double d, const Rational& delta) { return d < delta.to_double(); }

// A finite run of orbit distances d(f^k x, f^k y), k = 0..m-1.
template <typename D>
class DistanceSeries {
  public:
    DistanceSeries() = default;
    explicit DistanceSeries(std::vector<D> values) : values_(std::move(values)) {
        if (values_.empty()) throw std::invalid_argument("distance series must be nonempty");
        for (const auto& v : values_) {
            if (to_double(v) < 0) throw std::invalid_argument("distance series has a negative entry");
        }
    }

    [[nodiscard]] std::size_t size() const { return values_.size(); }
    [[nodiscard]] const D& operator[](std::size_t i) const { return values_[i]; }
    [[nodiscard]] const std::vector<D>& values() const { return values_; }
    [[nodiscard]] auto begin() const { return values_.begin(); }
    [[nodiscard]] auto end() const { return values_.end(); }

  private:
    std::vector<D> values_;
};

// #{0 <= k < m : series[k] < delta} / m, exact.
template <typename D>
Rational empirical_fraction(const DistanceSeries<D>& series, std::size_t m, const Rational& delta) {
    if (m < 1 || m > series.size()) {
        throw std::out_of_range("empirical_fraction: m=" + std::to_string(m) + " outside [1, " +
                                std::to_string(series.size()) + "]");
    }
    if (delta <= Rational(0)) throw std::invalid_argument("empirical_fraction: delta must be positive");
    std::int64_t count = 0;
    for (std::size_t k = 0; k < m; ++k) {
        if (below(series[k], delta)) ++count;
    }
    return Rational(count, static_cast<std::int64_t>(m));
}

struct DistributionProfile {
    std::vector<Rational> deltas;        // strictly increasing, positive
    std::vector<std::uint64_t> checkpoints;  // strictly increasing orbit lengths
    std::size_t burn_in = 0;             // leading checkpoints excluded from the envelopes
    // fractions[c][i]: empirical fraction at checkpoints[c] for deltas[i]
    std::vector<std::vector<Rational>> fractions;
    std::vector<Rational> lower;
    std::vector<Rational> upper;
    // Extremes of the distances between the last burned-in checkpoint and the
    // final checkpoint; used for proximality/asymptoticity estimates.
    double tail_min = 0.0;
    double tail_max = 0.0;

    // Throws std::logic_error when the envelope invariants do not hold.
    void validate() const {
        if (deltas.empty()) throw std::logic_error("profile: empty delta grid");
        if (lower.size() != deltas.size() || upper.size() != deltas.size()) {
            throw std::logic_error("profile: envelope size mismatch");
        }
        for (std::size_t i = 0; i < deltas.size(); ++i) {
            if (deltas[i] <= Rational(0)) throw std::logic_error("profile: nonpositive delta");
            if (i > 0 && deltas[i] <= deltas[i - 1]) throw std::logic_error("profile: deltas not increasing");
            if (lower[i] < Rational(0) || upper[i] > Rational(1) || upper[i] < lower[i]) {
                throw std::logic_error("profile: envelope outside 0 <= lower <= upper <= 1 at delta " +
                                       deltas[i].str());
            }
            if (i > 0 && (lower[i] < lower[i - 1] || upper[i] < upper[i - 1])) {
                throw std::logic_error("profile: envelope not monotone in delta at " + deltas[i].str());
            }
        }
    }

    [[nodiscard]] std::size_t index_of(const Rational& delta) const {
        const auto it = std::find(deltas.begin(), deltas.end(), delta);
        if (it == deltas.end()) throw std::out_of_range("delta " + delta.str() + " not on profile grid");
        return static_cast<std::size_t>(it - deltas.begin());
    }
    [[nodiscard]] const Rational& lower_at(const Rational& delta) const { return lower[index_of(delta)]; }
    [[nodiscard]] const Rational& upper_at(const Rational& delta) const { return upper[index_of(delta)]; }
};

// Streaming estimator: feed distances one at a time; envelopes are recorded
// whenever the number of consumed distances reaches a checkpoint.  Long orbits
// (10^7+ steps) never need to be materialized.
template <typename D>
class ProfileAccumulator {
  public:
    ProfileAccumulator(std::vector<Rational> deltas, std::vector<std::uint64_t> checkpoints, std::size_t burn_in)
        : deltas_(std::move(deltas)), checkpoints_(std::move(checkpoints)), burn_in_(burn_in) {
        if (deltas_.empty()) throw std::invalid_argument("profile: empty delta grid");
        for (std::size_t i = 0; i < deltas_.size(); ++i) {
            if (deltas_[i] <= Rational(0)) throw std::invalid_argument("profile: delta grid must be strictly positive");
            if (i > 0 && deltas_[i] <= deltas_[i - 1]) {
                throw std::invalid_argument("profile: delta grid must be strictly increasing");
            }
        }
        if (checkpoints_.empty()) throw std::invalid_argument("profile: empty checkpoint schedule");
        for (std::size_t c = 0; c < checkpoints_.size(); ++c) {
            if (checkpoints_[c] == 0 || (c > 0 && checkpoints_[c] <= checkpoints_[c - 1])) {
                throw std::invalid_argument("profile: checkpoints must be positive and strictly increasing");
            }
        }
        if (burn_in_ >= checkpoints_.size()) {
            throw std::invalid_argument("profile: no checkpoints remain after burn-in");
        }
        tail_start_ = burn_in_ == 0 ? 0 : checkpoints_[burn_in_ - 1];
        hist_.assign(deltas_.size() + 1, 0);
    }

    [[nodiscard]] std::uint64_t consumed() const { return n_; }
    [[nodiscard]] std::uint64_t horizon() const { return checkpoints_.back(); }
    [[nodiscard]] bool done() const { return next_ == checkpoints_.size(); }

    void push(const D& d) {
        if (done()) throw std::out_of_range("profile: distance pushed past the last checkpoint");
        // below() is monotone in delta, so the grid splits at a single index.
        std::size_t lo = 0;
        std::size_t hi = deltas_.size();
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (below(d, deltas_[mid])) hi = mid; else lo = mid + 1;
        }
        ++hist_[lo];
        if (n_ >= tail_start_) {
            const double v = to_double(d);
            if (!seen_tail_) {
                tail_min_ = tail_max_ = v;
                seen_tail_ = true;
            } else {
                tail_min_ = std::min(tail_min_, v);
                tail_max_ = std::max(tail_max_, v);
            }
        }
        ++n_;
        if (n_ == checkpoints_[next_]) record();
    }

    [[nodiscard]] DistributionProfile finish() const {
        if (!done()) {
            throw std::out_of_range("profile: series ended at " + std::to_string(n_) + " before checkpoint " +
                                    std::to_string(checkpoints_[next_]));
        }
        DistributionProfile p;
        p.deltas = deltas_;
        p.checkpoints = checkpoints_;
        p.burn_in = burn_in_;
        p.fractions = fractions_;
        p.lower.assign(deltas_.size(), Rational(1));
        p.upper.assign(deltas_.size(), Rational(0));
        for (std::size_t c = burn_in_; c < checkpoints_.size(); ++c) {
            for (std::size_t i = 0; i < deltas_.size(); ++i) {
                p.lower[i] = min(p.lower[i], fractions_[c][i]);
                p.upper[i] = max(p.upper[i], fractions_[c][i]);
            }
        }
        p.tail_min = tail_min_;
        p.tail_max = tail_max_;
        return p;
    }

  private:
    std::vector<Rational> deltas_;
    std::vector<std::uint64_t> checkpoints_;
    std::size_t burn_in_;
    std::uint64_t tail_start_ = 0;
    std::vector<std::uint64_t> hist_;  // hist_[i]: distances first below deltas_[i]
    std::vector<std::vector<Rational>> fractions_;
    std::size_t next_ = 0;
    std::uint64_t n_ = 0;
    double tail_min_ = 0.0;
    double tail_max_ = 0.0;
    bool seen_tail_ = false;

    void record() {
        std::vector<Rational> row(deltas_.size());
        std::uint64_t running = 0;
        for (std::size_t i = 0; i < deltas_.size(); ++i) {
            running += hist_[i];
            row[i] = Rational(static_cast<std::int64_t>(running), static_cast<std::int64_t>(n_));
        }
        fractions_.push_back(std::move(row));
        ++next_;
    }
};

template <typename D>
DistributionProfile build_profile(const DistanceSeries<D>& series, std::vector<Rational> deltas,
                                  std::vector<std::uint64_t> checkpoints, std::size_t burn_in) {
    if (!checkpoints.empty() && checkpoints.back() > series.size()) {
        throw std::out_of_range("build_profile: checkpoint beyond series length");
    }
    ProfileAccumulator<D> acc(std::move(deltas), std::move(checkpoints), burn_in);
    for (std::size_t k = 0; k < series.size() && !acc.done(); ++k) acc.push(series[k]);
    return acc.finish();
}

struct PairVerdict {
    bool proximal = false;
    bool asymptotic = false;
    bool distal = false;
    bool li_yorke = false;
    bool dc1 = false;
    bool dc2 = false;
    bool dc2half = false;
    bool dc3 = false;
    // DC2 1/2 witness: lower + tol < c < upper - tol at every grid delta < s.
    std::optional<Rational> dc2half_c;
    std::optional<Rational> dc2half_s;
    // DC3 witness: lower + tol < upper at every grid delta inside (a, b).
    std::optional<Rational> dc3_a;
    std::optional<Rational> dc3_b;
    Rational tolerance{0};
};

// Finite-horizon classification of a profile.
//
// With tol = 0 every rule reduces to the exact definition.  For tol > 0 the
// margins are chosen so that the hierarchy dc1 => dc2 => dc2half => dc3 holds
// on every valid profile (lower is nondecreasing in delta):
//   dc1      upper >= 1 - tol on the grid, lower(eps) <= tol somewhere
//   dc2      upper >= 1 - tol on the grid, lower(eps) < 1 - 3 tol somewhere
//   dc2half  longest grid prefix with max lower + tol < c < min upper - tol
//   dc3      longest run of grid points with lower + tol < upper
// A DC2 1/2 witness forces upper > c at the smallest grid delta, which is the
// finite-horizon evidence of proximality, so dc2half marks the pair proximal
// and not asymptotic.
inline PairVerdict classify_pair(const DistributionProfile& profile, const Rational& tolerance) {
    profile.validate();
    if (tolerance < Rational(0) || tolerance >= Rational(1, 4)) {
        throw std::invalid_argument("classify_pair: tolerance must lie in [0, 1/4)");
    }
    const auto& lo = profile.lower;
    const auto& up = profile.upper;
    const auto& grid = profile.deltas;
    const std::size_t n = grid.size();
    const Rational one(1);
    const Rational& tol = tolerance;

    PairVerdict v;
    v.tolerance = tol;

    const bool upper_full = std::all_of(up.begin(), up.end(), [&](const Rational& u) { return u >= one - tol; });
    v.dc1 = upper_full && std::any_of(lo.begin(), lo.end(), [&](const Rational& l) { return l <= tol; });
    v.dc2 = upper_full &&
            std::any_of(lo.begin(), lo.end(), [&](const Rational& l) { return l < one - Rational(3) * tol; });

    Rational max_lo(0);
    Rational min_up(1);
    std::size_t prefix = 0;
    Rational best_c;
    for (std::size_t i = 0; i < n; ++i) {
        const Rational cand_lo = max(max_lo, lo[i]);
        const Rational cand_up = min(min_up, up[i]);
        if (!(cand_lo + tol < cand_up - tol)) break;
        max_lo = cand_lo;
        min_up = cand_up;
        prefix = i + 1;
        best_c = (max_lo + tol + min_up - tol) / Rational(2);
    }
    if (prefix > 0) {
        v.dc2half = true;
        v.dc2half_c = best_c;
        v.dc2half_s = prefix < n ? grid[prefix] : grid[n - 1];
    }

    std::size_t best_start = 0;
    std::size_t best_len = 0;
    for (std::size_t i = 0; i < n;) {
        if (lo[i] + tol < up[i]) {
            std::size_t j = i;
            while (j < n && lo[j] + tol < up[j]) ++j;
            if (j - i > best_len) {
                best_len = j - i;
                best_start = i;
            }
            i = j;
        } else {
            ++i;
        }
    }
    if (best_len > 0) {
        v.dc3 = true;
        v.dc3_a = best_start == 0 ? Rational(0) : grid[best_start - 1];
        const std::size_t end = best_start + best_len;
        v.dc3_b = end < n ? grid[end] : grid[n - 1];
    }

    const double tol_d = tol.to_double();
    v.proximal = profile.tail_min <= tol_d || v.dc2half;
    v.asymptotic = profile.tail_max <= tol_d && !v.dc2half;
    v.distal = !v.proximal;
    v.li_yorke = v.proximal && !v.asymptotic;
    return v;
}

struct TransportResult {
    Rational delta;
    Rational epsilon;
    bool pass = true;
    bool counts_equal = true;
    std::optional<std::uint64_t> first_violation;  // smallest m with count_f(m) > count_g(m)
};

// Count-level transport check for a conjugacy h with modulus (delta, eps):
// for every m, #{k < m : f-distance < delta} <= #{k < m : g-distance < eps}.
template <typename DF, typename DG>
class TransportChecker {
  public:
    explicit TransportChecker(std::vector<std::pair<Rational, Rational>> moduli) {
        if (moduli.empty()) throw std::invalid_argument("transport: no modulus pairs");
        for (auto& [d, e] : moduli) {
            if (d <= Rational(0) || e <= Rational(0)) throw std::invalid_argument("transport: moduli must be positive");
            state_.push_back({d, e, 0, 0, {}});
            state_.back().result.delta = d;
            state_.back().result.epsilon = e;
        }
    }

    void push(const DF& df, const DG& dg) {
        ++m_;
        for (auto& s : state_) {
            if (below(df, s.delta)) ++s.count_f;
            if (below(dg, s.epsilon)) ++s.count_g;
            if (s.count_f != s.count_g) s.result.counts_equal = false;
            if (s.count_f > s.count_g && s.result.pass) {
                s.result.pass = false;
                s.result.first_violation = m_;
            }
        }
    }

    [[nodiscard]] std::vector<TransportResult> results() const {
        std::vector<TransportResult> out;
        for (const auto& s : state_) out.push_back(s.result);
        return out;
    }

  private:
    struct State {
        Rational delta;
        Rational epsilon;
        std::uint64_t count_f;
        std::uint64_t count_g;
        TransportResult result;
    };
    std::vector<State> state_;
    std::uint64_t m_ = 0;
};

template <typename DF, typename DG>
std::vector<TransportResult> check_transport(const DistanceSeries<DF>& series_f, const DistanceSeries<DG>& series_g,
                                             std::vector<std::pair<Rational, Rational>> moduli) {
    if (series_f.size() != series_g.size()) throw std::invalid_argument("check_transport: series length mismatch");
    TransportChecker<DF, DG> checker(std::move(moduli));
    for (std::size_t k = 0; k < series_f.size(); ++k) checker.push(series_f[k], series_g[k]);
    return checker.results();
}

// CSV table: delta (num/den), lower, upper.
inline std::string profile_csv(const DistributionProfile& p) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(9);
    os << "delta,lower,upper\n";
    for (std::size_t i = 0; i < p.deltas.size(); ++i) {
        os << p.deltas[i].str() << ',' << p.lower[i].to_double() << ',' << p.upper[i].to_double() << '\n';
    }
    return os.str();
}

inline std::string profile_report(const DistributionProfile& p) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(9);
    os << "checkpoints:";
    for (auto c : p.checkpoints) os << ' ' << c;
    os << "\nburn_in: " << p.burn_in << "\ntail_min: " << p.tail_min << "\ntail_max: " << p.tail_max << '\n';
    for (std::size_t i = 0; i < p.deltas.size(); ++i) {
        os << "delta " << p.deltas[i] << ": lower " << p.lower[i] << " (" << p.lower[i].to_double() << "), upper "
           << p.upper[i] << " (" << p.upper[i].to_double() << ")\n";
    }
    return os.str();
}

inline std::string verdict_record(const PairVerdict& v) {
    auto flag = [](bool b) { return b ? "true" : "false"; };
    std::ostringstream os;
    os << "proximal: " << flag(v.proximal) << '\n'
       << "asymptotic: " << flag(v.asymptotic) << '\n'
       << "distal: " << flag(v.distal) << '\n'
       << "li_yorke: " << flag(v.li_yorke) << '\n'
       << "dc1: " << flag(v.dc1) << '\n'
       << "dc2: " << flag(v.dc2) << '\n'
       << "dc2half: " << flag(v.dc2half);
    if (v.dc2half) os << " c=" << *v.dc2half_c << " s=" << *v.dc2half_s;
    os << "\ndc3: " << flag(v.dc3);
    if (v.dc3) os << " a=" << *v.dc3_a << " b=" << *v.dc3_b;
    os << "\ntolerance: " << v.tolerance << '\n';
    return os.str();
}

}  // namespace dchaos
