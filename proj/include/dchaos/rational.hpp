#pragma once

// Exact rational numbers over 64-bit integers.
//
// Every intermediate product is formed in 128 bits and the result is reduced
// before narrowing; a result that does not fit in 64 bits throws
// std::overflow_error instead of wrapping.  All quantities in this library
// (dyadic angles, 1/n heights, lcm(1..9) denominators, Cantor radii of depth
// <= 20) stay far below that limit.

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <charconv>
#include <compare>

namespace dchaos {

class Rational {
  public:
    using int_type = std::int64_t;
    using wide_type = __int128;

    constexpr Rational() = default;
    constexpr Rational(int_type n) : num_(n), den_(1) {}  // NOLINT: implicit from integers is intended
    Rational(int_type n, int_type d) { assign(static_cast<wide_type>(n), static_cast<wide_type>(d)); }

    [[nodiscard]] constexpr int_type num() const { return num_; }
    [[nodiscard]] constexpr int_type den() const { return den_; }

    [[nodiscard]] double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    [[nodiscard]] long double to_long_double() const {
        return static_cast<long double>(num_) / static_cast<long double>(den_);
    }

    // Parses "a/b" or "a".
    static Rational parse(std::string_view text) {
        auto trim = [](std::string_view s) {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
            return s;
        };
        text = trim(text);
        auto parse_int = [&](std::string_view s) {
            s = trim(s);
            if (!s.empty() && s.front() == '+') s.remove_prefix(1);
            int_type v = 0;
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
                throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
            }
            return v;
        };
        const auto slash = text.find('/');
        if (slash == std::string_view::npos) return Rational(parse_int(text));
        const int_type d = parse_int(text.substr(slash + 1));
        if (d == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
        return Rational(parse_int(text.substr(0, slash)), d);
    }

    [[nodiscard]] std::string str() const {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        if (a.den_ == b.den_) return from_wide(static_cast<wide_type>(a.num_) + b.num_, a.den_);
        const int_type g = std::gcd(a.den_, b.den_);
        const wide_type n = static_cast<wide_type>(a.num_) * (b.den_ / g) + static_cast<wide_type>(b.num_) * (a.den_ / g);
        return from_wide(n, static_cast<wide_type>(a.den_ / g) * b.den_);
    }
    friend Rational operator-(const Rational& a) {
        Rational r;
        if (a.num_ == INT64_MIN) throw std::overflow_error("rational negation overflow");
        r.num_ = -a.num_;
        r.den_ = a.den_;
        return r;
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_wide(static_cast<wide_type>(a.num_) * b.num_, static_cast<wide_type>(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("rational division by zero");
        return from_wide(static_cast<wide_type>(a.num_) * b.den_, static_cast<wide_type>(a.den_) * b.num_);
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        if (a.den_ == b.den_) return a.num_ <=> b.num_;
        const wide_type l = static_cast<wide_type>(a.num_) * b.den_;
        const wide_type r = static_cast<wide_type>(b.num_) * a.den_;
        return l < r ? std::strong_ordering::less : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

  private:
    int_type num_ = 0;
    int_type den_ = 1;

    static wide_type wide_gcd(wide_type a, wide_type b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        // Narrow fast path: most operands fit in 64 bits.
        while (b != 0) {
            if (a <= INT64_MAX && b <= INT64_MAX) {
                return std::gcd(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
            }
            const wide_type t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    static Rational from_wide(wide_type n, wide_type d) {
        Rational r;
        r.assign(n, d);
        return r;
    }

    void assign(wide_type n, wide_type d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        if (n == 0) {
            num_ = 0;
            den_ = 1;
            return;
        }
        const wide_type g = wide_gcd(n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        if (n > INT64_MAX || n < -static_cast<wide_type>(INT64_MAX) || d > INT64_MAX) {
            throw std::overflow_error("rational result exceeds 64-bit range");
        }
        num_ = static_cast<int_type>(n);
        den_ = static_cast<int_type>(d);
    }
};

inline Rational abs(const Rational& r) { return r.num() < 0 ? -r : r; }

inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }

// Largest integer not exceeding r.
inline Rational::int_type floor(const Rational& r) {
    const auto q = r.num() / r.den();
    return (r.num() % r.den() != 0 && r.num() < 0) ? q - 1 : q;
}

// Representative of r in [0, 1).
inline Rational frac(const Rational& r) {
    if (r.num() >= 0 && r.num() < r.den()) return r;
    auto m = r.num() % r.den();
    if (m < 0) m += r.den();
    return Rational(m, r.den());
}

inline bool is_power_of_two(Rational::int_type v) { return v > 0 && (v & (v - 1)) == 0; }

inline double to_double(const Rational& r) { return r.to_double(); }
inline double to_double(double d) { return d; }

}  // namespace dchaos
