#pragma once

// Binary adding machine on finite prefixes of {0,1}^N with a block structure
// n_1 < n_2 < ... < n_I.  A state is stored as the little-endian evaluation of
// each block, so the carry-to-the-right of omega + 1000... is ordinary
// integer increment with carry from block to block.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dchaos/chaoscore.hpp"
#include "dchaos/rational.hpp"

namespace dchaos {

// A finite binary word, written as a string of '0'/'1'.
using Word = std::string;

inline void check_word(std::string_view w) {
    for (char c : w) {
        if (c != '0' && c != '1') throw std::invalid_argument("binary word contains '" + std::string(1, c) + "'");
    }
}

class OdometerOverflow : public std::overflow_error {
  public:
    using std::overflow_error::overflow_error;
};

class BlockStructure {
  public:
    explicit BlockStructure(std::vector<int> lengths) : lengths_(std::move(lengths)) {
        if (lengths_.empty()) throw std::invalid_argument("block structure needs at least one block");
        int total = 0;
        for (std::size_t i = 0; i < lengths_.size(); ++i) {
            if (lengths_[i] < 1 || lengths_[i] > 62) throw std::invalid_argument("block length must lie in [1, 62]");
            if (i > 0 && lengths_[i] <= lengths_[i - 1]) {
                throw std::invalid_argument("block lengths must be strictly increasing");
            }
            total += lengths_[i];
            prefix_.push_back(total);
        }
    }

    // n_i = 2i + 3, i.e. (5, 7, 9, ...).
    static BlockStructure standard(std::size_t blocks) {
        std::vector<int> n;
        for (std::size_t i = 1; i <= blocks; ++i) n.push_back(static_cast<int>(2 * i + 3));
        return BlockStructure(std::move(n));
    }

    [[nodiscard]] std::size_t blocks() const { return lengths_.size(); }
    // 1-based, as in n_i.
    [[nodiscard]] int length(std::size_t i) const { return lengths_.at(i - 1); }
    // m_i = n_1 + ... + n_i, with m_0 = 0.
    [[nodiscard]] int prefix(std::size_t i) const { return i == 0 ? 0 : prefix_.at(i - 1); }
    [[nodiscard]] int total_bits() const { return prefix_.back(); }
    [[nodiscard]] const std::vector<int>& lengths() const { return lengths_; }

    friend bool operator==(const BlockStructure& a, const BlockStructure& b) { return a.lengths_ == b.lengths_; }

  private:
    std::vector<int> lengths_;
    std::vector<int> prefix_;
};

// Little-endian evaluation x_1 + 2 x_2 + ... + 2^{q-1} x_q.
inline std::uint64_t block_eval(std::string_view word) {
    if (word.empty()) throw std::invalid_argument("block_eval: empty word");
    if (word.size() > 63) throw std::invalid_argument("block_eval: word longer than 63 bits");
    check_word(word);
    std::uint64_t v = 0;
    for (std::size_t j = word.size(); j-- > 0;) v = (v << 1) | static_cast<std::uint64_t>(word[j] - '0');
    return v;
}

// Rotation angles of the skew product: 0 or 1/2^k, exact.
class DyadicAngle {
  public:
    DyadicAngle() = default;
    explicit DyadicAngle(const Rational& v) : angle_(v) {
        if (!is_power_of_two(angle_.value().den())) {
            throw std::invalid_argument("dyadic angle with denominator " + std::to_string(angle_.value().den()));
        }
    }
    static DyadicAngle inverse_power(int k) { return DyadicAngle(Rational(1, std::int64_t{1} << k)); }

    [[nodiscard]] const Angle& angle() const { return angle_; }
    [[nodiscard]] const Rational& value() const { return angle_.value(); }
    DyadicAngle operator+(const DyadicAngle& o) const { return DyadicAngle(angle_.value() + o.value()); }
    DyadicAngle& operator+=(const DyadicAngle& o) { return *this = *this + o; }

    friend bool operator==(const DyadicAngle&, const DyadicAngle&) = default;
    friend std::ostream& operator<<(std::ostream& os, const DyadicAngle& a) { return os << a.value(); }

  private:
    Angle angle_;
};

class OdometerState {
  public:
    OdometerState(std::shared_ptr<const BlockStructure> structure, std::vector<std::uint64_t> blocks)
        : structure_(std::move(structure)), blocks_(std::move(blocks)) {
        if (!structure_) throw std::invalid_argument("odometer state without structure");
        if (blocks_.size() != structure_->blocks()) throw std::invalid_argument("block count mismatch");
        for (std::size_t i = 0; i < blocks_.size(); ++i) {
            if (blocks_[i] > full(i + 1)) throw std::invalid_argument("block value exceeds block width");
        }
    }

    static OdometerState zero(std::shared_ptr<const BlockStructure> structure) {
        const std::size_t n = structure->blocks();
        return OdometerState(std::move(structure), std::vector<std::uint64_t>(n, 0));
    }

    // Accepts "00000|0000000|000000000" or the same bits without separators.
    static OdometerState parse(std::shared_ptr<const BlockStructure> structure, std::string_view text) {
        std::string bits;
        for (char c : text) {
            if (c != '|') bits.push_back(c);
        }
        check_word(bits);
        if (static_cast<int>(bits.size()) != structure->total_bits()) {
            throw std::invalid_argument("state has " + std::to_string(bits.size()) + " bits, structure needs " +
                                        std::to_string(structure->total_bits()));
        }
        std::vector<std::uint64_t> blocks;
        for (std::size_t i = 1; i <= structure->blocks(); ++i) {
            blocks.push_back(block_eval(std::string_view(bits).substr(static_cast<std::size_t>(structure->prefix(i - 1)),
                                                                      static_cast<std::size_t>(structure->length(i)))));
        }
        return OdometerState(std::move(structure), std::move(blocks));
    }

    [[nodiscard]] const BlockStructure& structure() const { return *structure_; }
    [[nodiscard]] const std::shared_ptr<const BlockStructure>& structure_ptr() const { return structure_; }
    // Evaluation of block i (1-based).
    [[nodiscard]] std::uint64_t block(std::size_t i) const { return blocks_.at(i - 1); }
    [[nodiscard]] const std::vector<std::uint64_t>& blocks() const { return blocks_; }

    [[nodiscard]] Word bits() const {
        Word w;
        w.reserve(static_cast<std::size_t>(structure_->total_bits()));
        for (std::size_t i = 1; i <= blocks_.size(); ++i) w += block_word(i);
        return w;
    }
    [[nodiscard]] Word block_word(std::size_t i) const {
        Word w;
        const int len = structure_->length(i);
        for (int j = 0; j < len; ++j) w.push_back(((blocks_[i - 1] >> j) & 1U) ? '1' : '0');
        return w;
    }
    [[nodiscard]] std::string str() const {
        std::string s;
        for (std::size_t i = 1; i <= blocks_.size(); ++i) {
            if (i > 1) s.push_back('|');
            s += block_word(i);
        }
        return s;
    }

    [[nodiscard]] bool all_ones() const {
        for (std::size_t i = 0; i < blocks_.size(); ++i) {
            if (blocks_[i] != full(i + 1)) return false;
        }
        return true;
    }

    // In-place omega + 1000... with carry; throws OdometerOverflow when the
    // carry would leave the tracked prefix.
    void advance() {
        for (std::size_t i = 0; i < blocks_.size(); ++i) {
            if (blocks_[i] != full(i + 1)) {
                ++blocks_[i];
                for (std::size_t j = 0; j < i; ++j) blocks_[j] = 0;
                return;
            }
        }
        throw OdometerOverflow("odometer carry leaves the " + std::to_string(structure_->total_bits()) +
                               "-bit prefix");
    }

    [[nodiscard]] OdometerState successor() const {
        OdometerState next = *this;
        next.advance();
        return next;
    }

    friend bool operator==(const OdometerState& a, const OdometerState& b) {
        return *a.structure_ == *b.structure_ && a.blocks_ == b.blocks_;
    }

  private:
    std::shared_ptr<const BlockStructure> structure_;
    std::vector<std::uint64_t> blocks_;

    [[nodiscard]] std::uint64_t full(std::size_t i) const {
        return (std::uint64_t{1} << structure_->length(i)) - 1;
    }
};

inline OdometerState successor(const OdometerState& s) { return s.successor(); }

// k(omega): smallest block index whose block is not all ones, or nullopt when
// every tracked block is all ones (the omega = 1^infinity convention).
inline std::optional<std::size_t> first_incomplete_block(const OdometerState& s) {
    const auto& st = s.structure();
    for (std::size_t i = 1; i <= st.blocks(); ++i) {
        if (s.block(i) != (std::uint64_t{1} << st.length(i)) - 1) return i;
    }
    return std::nullopt;
}

// p(omega) = 0 if 2^{k-1} <= |omega^(k)| < 2^{n_k} - 2^{k-1} - 1, else 1/2^k.
inline DyadicAngle rotation_angle(const OdometerState& s) {
    const auto k = first_incomplete_block(s);
    if (!k) return DyadicAngle{};
    const std::uint64_t e = s.block(*k);
    const std::uint64_t lo = std::uint64_t{1} << (*k - 1);
    const std::uint64_t hi = (std::uint64_t{1} << s.structure().length(*k)) - lo - 1;
    if (lo <= e && e < hi) return DyadicAngle{};
    return DyadicAngle::inverse_power(static_cast<int>(*k));
}

// sigma: block i becomes 0^{n_i - 1} omega_i.
inline OdometerState spread(std::string_view omega, std::shared_ptr<const BlockStructure> structure) {
    check_word(omega);
    if (omega.size() < structure->blocks()) {
        throw std::invalid_argument("spread: word of length " + std::to_string(omega.size()) + " shorter than " +
                                    std::to_string(structure->blocks()) + " blocks");
    }
    std::vector<std::uint64_t> blocks;
    for (std::size_t i = 1; i <= structure->blocks(); ++i) {
        blocks.push_back(omega[i - 1] == '1' ? std::uint64_t{1} << (structure->length(i) - 1) : 0);
    }
    return OdometerState(std::move(structure), std::move(blocks));
}

// lambda(omega) = omega_1 omega_1omega_2 omega_1omega_2omega_3 ..., using as
// many groups as the input supports, truncated to out_len when given.
inline Word lambda_embed(std::string_view omega, std::optional<std::size_t> out_len = std::nullopt) {
    check_word(omega);
    if (omega.empty()) throw std::invalid_argument("lambda_embed: empty word");
    Word out;
    for (std::size_t g = 1; g <= omega.size(); ++g) {
        out.append(omega.substr(0, g));
        if (out_len && out.size() >= *out_len) break;
    }
    if (out_len) {
        if (out.size() < *out_len) {
            throw std::invalid_argument("lambda_embed: input too short for " + std::to_string(*out_len) + " output bits");
        }
        out.resize(*out_len);
    }
    return out;
}

// First-difference ultrametric: 0 if equal, else 2^{1-i} for the first
// differing bit index i (1-based).  Diameter exactly 1.
inline Rational omega_metric(const OdometerState& a, const OdometerState& b) {
    if (!(a.structure() == b.structure())) throw std::invalid_argument("omega_metric: structure mismatch");
    const auto& st = a.structure();
    for (std::size_t i = 1; i <= st.blocks(); ++i) {
        const std::uint64_t x = a.block(i) ^ b.block(i);
        if (x != 0) {
            const int index = st.prefix(i - 1) + __builtin_ctzll(x) + 1;
            if (index > 63) throw std::overflow_error("omega_metric: first difference beyond bit 63");
            return Rational(1, std::int64_t{1} << (index - 1));
        }
    }
    return Rational(0);
}

}  // namespace dchaos
