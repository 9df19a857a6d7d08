#pragma once

// A converging sequence of unit fibers {1/k} x I with the fixed limit fiber
// {0} x I.  The fiber map f_k is drawn from a 7l-periodic pattern of
// contractions h_l(z) = l^{-1/l} z, expansions min(1, l^{1/l} z) and
// identities; the pattern order depends on the parity of l.
//
// Block l occupies the steps m_{l-1} <= k < m_l, so each block is a whole
// number of 7l-periods whenever 7l divides m_l - m_{l-1}.
//
// z is a double.  Thresholds are strict with a 1e-9 guard: a distance counts
// as below delta only when it is below delta - 1e-9.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dchaos/chaoscore.hpp"
#include "dchaos/rational.hpp"

namespace dchaos::fiberlab {

inline constexpr double kGuard = 1e-9;

class FiberSchedule {
  public:
    // m = (m_1, m_2, ...), strictly increasing, m_0 = 0 implied.
    explicit FiberSchedule(std::vector<std::uint64_t> m) : m_(std::move(m)) {
        if (m_.empty()) throw std::invalid_argument("FiberSchedule: no blocks");
        for (std::size_t i = 0; i < m_.size(); ++i) {
            if (m_[i] == 0 || (i > 0 && m_[i] <= m_[i - 1])) {
                throw std::invalid_argument("FiberSchedule: m_l must be positive and increasing");
            }
        }
    }

    // m_l - m_{l-1} = 7 l l^l.
    static FiberSchedule standard(std::size_t blocks = 6) {
        std::vector<std::uint64_t> m;
        std::uint64_t total = 0;
        for (std::uint64_t l = 1; l <= blocks; ++l) {
            std::uint64_t p = 1;
            for (std::uint64_t j = 0; j < l; ++j) p *= l;
            total += 7 * l * p;
            m.push_back(total);
        }
        return FiberSchedule(std::move(m));
    }

    [[nodiscard]] std::size_t blocks() const { return m_.size(); }
    [[nodiscard]] std::uint64_t m(std::size_t l) const { return l == 0 ? 0 : m_.at(l - 1); }
    [[nodiscard]] std::uint64_t limit() const { return m_.back(); }

    // Blocks whose length is not a whole number of 7l-periods.
    [[nodiscard]] std::vector<std::string> divisibility_violations() const {
        std::vector<std::string> out;
        for (std::size_t l = 1; l <= m_.size(); ++l) {
            const std::uint64_t len = m(l) - m(l - 1);
            if (len % (7 * l) != 0) {
                out.push_back("block " + std::to_string(l) + ": length " + std::to_string(len) +
                              " not divisible by " + std::to_string(7 * l));
            }
        }
        return out;
    }

    // The l with m_{l-1} <= k < m_l.
    [[nodiscard]] std::size_t block_of(std::uint64_t k) const {
        if (k == 0 || k >= limit()) throw std::out_of_range("FiberSchedule: step " + std::to_string(k) + " outside schedule");
        const auto it = std::upper_bound(m_.begin(), m_.end(), k);
        return static_cast<std::size_t>(it - m_.begin()) + 1;
    }

  private:
    std::vector<std::uint64_t> m_;
};

struct MapKind {
    enum class Type { contract, identity, expand };
    Type type = Type::identity;
    std::size_t l = 0;  // unused for identity

    friend bool operator==(const MapKind&, const MapKind&) = default;
};

inline std::string to_string(const MapKind& k) {
    switch (k.type) {
        case MapKind::Type::contract: return "contract(" + std::to_string(k.l) + ")";
        case MapKind::Type::expand: return "expand(" + std::to_string(k.l) + ")";
        case MapKind::Type::identity: break;
    }
    return "identity";
}

// odd l:  (h_l)^l (Id)^{4l} (hbar_l)^l (Id)^l
// even l: (h_l)^l (Id)^l (hbar_l)^l (Id)^{4l}
inline MapKind fiber_map_kind(std::uint64_t k, const FiberSchedule& sched) {
    const std::size_t l = sched.block_of(k);
    const std::uint64_t o = (k - sched.m(l - 1)) % (7 * l);
    const std::uint64_t expand_from = l % 2 == 1 ? 5 * l : 2 * l;
    if (o < l) return {MapKind::Type::contract, l};
    if (o >= expand_from && o < expand_from + l) return {MapKind::Type::expand, l};
    return {MapKind::Type::identity, 0};
}

inline double apply_fiber_map(const MapKind& kind, double z) {
    if (z < 0 || z > 1) throw std::invalid_argument("apply_fiber_map: z outside [0, 1]");
    const auto l = static_cast<double>(kind.l);
    switch (kind.type) {
        case MapKind::Type::contract: return std::pow(l, -1.0 / l) * z;
        case MapKind::Type::expand: return std::min(1.0, std::pow(l, 1.0 / l) * z);
        case MapKind::Type::identity: break;
    }
    return z;
}

struct FiberPoint {
    std::uint64_t k = 1;  // fiber 1/k; 0 marks the limit fiber
    double z = 0;

    [[nodiscard]] bool limit_fiber() const { return k == 0; }
    [[nodiscard]] double height() const { return k == 0 ? 0.0 : 1.0 / static_cast<double>(k); }
};

inline FiberPoint step(const FiberPoint& p, const FiberSchedule& sched) {
    if (p.limit_fiber()) return p;
    return FiberPoint{p.k + 1, apply_fiber_map(fiber_map_kind(p.k, sched), p.z)};
}

struct FiberDistance {
    double value = 0;
};

inline bool below(const FiberDistance& d, const Rational& delta) { return d.value < delta.to_double() - kGuard; }
inline double to_double(const FiberDistance& d) { return d.value; }

// max(|height difference|, |z difference|).
inline FiberDistance distance(const FiberPoint& a, const FiberPoint& b) {
    return {std::max(std::fabs(a.height() - b.height()), std::fabs(a.z - b.z))};
}

inline DistanceSeries<FiberDistance> pair_series(const FiberPoint& u, const FiberPoint& v, std::uint64_t horizon,
                                                 const FiberSchedule& sched) {
    if (horizon == 0) throw std::invalid_argument("pair_series: empty horizon");
    FiberPoint a = u;
    FiberPoint b = v;
    std::vector<FiberDistance> out;
    out.reserve(horizon);
    for (std::uint64_t i = 0; i < horizon; ++i) {
        if (i > 0) {
            a = step(a, sched);
            b = step(b, sched);
        }
        out.push_back(distance(a, b));
    }
    return DistanceSeries<FiberDistance>(std::move(out));
}

inline DistributionProfile pair_profile(const FiberPoint& u, const FiberPoint& v, const FiberSchedule& sched,
                                        std::vector<Rational> deltas, std::vector<std::uint64_t> checkpoints,
                                        std::size_t burn_in) {
    ProfileAccumulator<FiberDistance> acc(std::move(deltas), std::move(checkpoints), burn_in);
    FiberPoint a = u;
    FiberPoint b = v;
    while (!acc.done()) {
        acc.push(distance(a, b));
        a = step(a, sched);
        b = step(b, sched);
    }
    return acc.finish();
}

// Checkpoints m_1 .. m_L, the ends of blocks 1..L.
inline std::vector<std::uint64_t> block_checkpoints(std::size_t L, const FiberSchedule& sched) {
    if (L < 1 || L > sched.blocks()) throw std::out_of_range("block_checkpoints: L outside schedule");
    std::vector<std::uint64_t> c;
    for (std::size_t l = 1; l <= L; ++l) c.push_back(sched.m(l));
    return c;
}

struct BoundsCheck {
    DistributionProfile profile;
    double upper = 0;
    double lower = 0;
    bool asymptotic = false;
    bool pass = false;
};

// Envelopes over block ends m_{burn_in+1} .. m_L against [4/7, 6/7] for the
// upper and [1/7, 3/7] for the lower distribution function, widened by tol.
// Pairs whose tail distances all fall below tol are reported as asymptotic.
inline BoundsCheck dc2half_bounds_check(const FiberPoint& u, const FiberPoint& v, const Rational& delta,
                                        std::size_t L, const Rational& tolerance, const FiberSchedule& sched,
                                        std::size_t burn_in = 2) {
    if (u.limit_fiber() || v.limit_fiber()) throw std::invalid_argument("dc2half_bounds_check: points must lie on inner fibers");
    const double alpha = distance(u, v).value;
    if (delta <= Rational(0) || delta.to_double() >= alpha) {
        throw std::invalid_argument("dc2half_bounds_check: delta must lie in (0, d(u,v))");
    }
    BoundsCheck out;
    out.profile = pair_profile(u, v, sched, {delta}, block_checkpoints(L, sched), burn_in);
    out.upper = out.profile.upper[0].to_double();
    out.lower = out.profile.lower[0].to_double();
    const double tol = tolerance.to_double();
    out.asymptotic = out.profile.tail_max <= tol;
    out.pass = !out.asymptotic && out.upper >= 4.0 / 7 - tol && out.upper <= 6.0 / 7 + tol &&
               out.lower >= 1.0 / 7 - tol && out.lower <= 3.0 / 7 + tol;
    return out;
}

struct ScanEntry {
    std::size_t id = 0;
    FiberPoint u;
    FiberPoint v;
    DistributionProfile profile;
    bool asymptotic = false;
    std::optional<Rational> witness_delta;  // grid delta with upper <= 6/7 + tol
    bool dc2_candidate = false;
};

// Evidence against DC2 for each pair: a grid delta where the upper envelope
// stays at or below 6/7 + tol, or asymptotic tail behaviour.
inline std::vector<ScanEntry> dc2_absence_scan(const std::vector<std::pair<FiberPoint, FiberPoint>>& sample,
                                               std::size_t L, const std::vector<Rational>& grid,
                                               const Rational& tolerance, const FiberSchedule& sched,
                                               std::size_t burn_in = 2) {
    std::vector<ScanEntry> out;
    const Rational cap = Rational(6, 7) + tolerance;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        ScanEntry e;
        e.id = i;
        e.u = sample[i].first;
        e.v = sample[i].second;
        e.profile = pair_profile(e.u, e.v, sched, grid, block_checkpoints(L, sched), burn_in);
        e.asymptotic = e.profile.tail_max <= tolerance.to_double();
        for (std::size_t j = 0; j < grid.size(); ++j) {
            if (e.profile.upper[j] <= cap) {
                e.witness_delta = grid[j];
                break;
            }
        }
        e.dc2_candidate = !e.asymptotic && !e.witness_delta;
        out.push_back(std::move(e));
    }
    return out;
}

inline std::string scan_csv(const std::vector<ScanEntry>& entries) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(9);
    os << "pair,delta,lower,upper,verdict\n";
    for (const auto& e : entries) {
        const std::string verdict = e.dc2_candidate ? "dc2-candidate" : (e.asymptotic ? "asymptotic" : "not-dc2");
        for (std::size_t j = 0; j < e.profile.deltas.size(); ++j) {
            os << e.id << ',' << e.profile.deltas[j] << ',' << e.profile.lower[j].to_double() << ','
               << e.profile.upper[j].to_double() << ',' << verdict << '\n';
        }
    }
    return os.str();
}

inline std::string schedule_csv(const FiberSchedule& sched) {
    std::ostringstream os;
    os << "l,m_l,pattern\n";
    for (std::size_t l = 1; l <= sched.blocks(); ++l) {
        os << l << ',' << sched.m(l) << ','
           << (l % 2 == 1 ? "h^l Id^4l hbar^l Id^l" : "h^l Id^l hbar^l Id^4l") << '\n';
    }
    return os.str();
}

// sup over a z grid of |f_k(z) - z| for k in block l.
inline double block_sup_displacement(std::size_t l, const FiberSchedule& sched, std::size_t grid_points = 1001) {
    double sup = 0;
    const std::uint64_t start = std::max<std::uint64_t>(1, sched.m(l - 1));
    const std::uint64_t period = std::min<std::uint64_t>(7 * l, sched.m(l) - start);
    for (std::uint64_t k = start; k < start + period; ++k) {
        const MapKind kind = fiber_map_kind(k, sched);
        for (std::size_t i = 0; i < grid_points; ++i) {
            const double z = static_cast<double>(i) / static_cast<double>(grid_points - 1);
            sup = std::max(sup, std::fabs(apply_fiber_map(kind, z) - z));
        }
    }
    return sup;
}

}  // namespace dchaos::fiberlab
