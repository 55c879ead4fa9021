#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace posmon {

/// A positive word over a small alphabet, packed into 128 bits.
///
/// Letters are 4-bit generator ids stored most-significant-first, so for
/// words of equal length the raw integer order is the lexicographic order
/// of the letter sequence. The low byte holds the length. Limits: at most
/// 16 generators and 30 letters per word; enough for everything this
/// library computes at desk scale, and enforced with clear errors.
class Word {
public:
    using Letter = std::uint8_t;
    using u128 = unsigned __int128;
    static constexpr std::size_t kMaxLen = 30;
    static constexpr std::size_t kMaxAlphabet = 16;

    constexpr Word() : bits_(0) {}

    static Word from_letters(const std::vector<Letter>& ls) {
        Word w;
        for (Letter l : ls) w.push_back(l);
        return w;
    }

    std::size_t size() const { return static_cast<std::size_t>(bits_ & 0xFF); }
    bool empty() const { return size() == 0; }

    Letter letter(std::size_t i) const {
        return static_cast<Letter>((bits_ >> (124 - 4 * i)) & 0xF);
    }

    void push_back(Letter l) {
        std::size_t n = size();
        if (n >= kMaxLen) throw std::length_error("posmon::Word: exceeds 30 letters");
        bits_ = (bits_ & ~u128(0xFF)) | (u128(l & 0xF) << (124 - 4 * n)) | u128(n + 1);
    }

    Word substr(std::size_t pos, std::size_t len) const {
        Word w;
        for (std::size_t i = 0; i < len; ++i) w.push_back(letter(pos + i));
        return w;
    }
    Word prefix(std::size_t len) const { return substr(0, len); }
    Word suffix_from(std::size_t pos) const { return substr(pos, size() - pos); }

    friend Word operator*(const Word& a, const Word& b) {
        if (a.size() + b.size() > kMaxLen)
            throw std::length_error("posmon::Word: concatenation exceeds 30 letters");
        Word w = a;
        for (std::size_t i = 0; i < b.size(); ++i) w.push_back(b.letter(i));
        return w;
    }

    Word pow(std::size_t k) const {
        Word w;
        for (std::size_t i = 0; i < k; ++i) w = w * *this;
        return w;
    }

    Word reversed() const {
        Word w;
        for (std::size_t i = size(); i-- > 0;) w.push_back(letter(i));
        return w;
    }

    std::size_t count(Letter l) const {
        std::size_t c = 0;
        for (std::size_t i = 0; i < size(); ++i)
            if (letter(i) == l) ++c;
        return c;
    }

    std::array<std::uint8_t, kMaxAlphabet> letter_counts() const {
        std::array<std::uint8_t, kMaxAlphabet> c{};
        for (std::size_t i = 0; i < size(); ++i) ++c[letter(i)];
        return c;
    }

    /// Letters of `p` compared against positions [pos, pos+|p|).
    bool matches_at(const Word& p, std::size_t pos) const {
        std::size_t lp = p.size();
        if (lp == 0) return pos <= size();
        if (pos + lp > size()) return false;
        u128 mine = (bits_ >> (128 - 4 * (pos + lp))) & ones(4 * lp);
        u128 theirs = p.bits_ >> (128 - 4 * lp);
        return mine == theirs;
    }

    bool contains_factor(const Word& p) const {
        if (p.size() > size()) return false;
        if (p.empty()) return true;
        for (std::size_t pos = 0; pos + p.size() <= size(); ++pos)
            if (matches_at(p, pos)) return true;
        return false;
    }

    /// Replace letters [pos, pos+len) by `repl`; requires |repl| == len.
    Word splice(std::size_t pos, std::size_t len, const Word& repl) const {
        if (len == 0) return *this;
        u128 mask = ones(4 * len) << (128 - 4 * (pos + len));
        u128 letters = (repl.bits_ >> (128 - 4 * len)) << (128 - 4 * (pos + len));
        Word w;
        w.bits_ = (bits_ & ~mask) | letters;
        return w;
    }

    friend bool operator==(const Word& a, const Word& b) { return a.bits_ == b.bits_; }
    friend bool operator!=(const Word& a, const Word& b) { return a.bits_ != b.bits_; }
    /// Length-major, then lexicographic in the generator order.
    friend bool operator<(const Word& a, const Word& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a.bits_ < b.bits_;
    }
    friend bool operator>(const Word& a, const Word& b) { return b < a; }
    friend bool operator<=(const Word& a, const Word& b) { return !(b < a); }
    friend bool operator>=(const Word& a, const Word& b) { return !(a < b); }

    u128 raw() const { return bits_; }
    static Word from_raw(u128 r) {
        Word w;
        w.bits_ = r;
        return w;
    }

    std::uint64_t hash() const {
        std::uint64_t x = static_cast<std::uint64_t>(bits_) ^
                          (static_cast<std::uint64_t>(bits_ >> 64) * 0x9E3779B97F4A7C15ULL);
        x ^= x >> 30;
        x *= 0xBF58476D1CE4E5B9ULL;
        x ^= x >> 27;
        x *= 0x94D049BB133111EBULL;
        x ^= x >> 31;
        return x;
    }

private:
    static u128 ones(unsigned nbits) { return nbits == 0 ? 0 : (~u128(0)) >> (128 - nbits); }

    u128 bits_;
};

}  // namespace posmon
