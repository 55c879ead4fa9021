#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "posmon/classes.hpp"

namespace posmon {

enum class Side { Left, Right };

inline const char* side_name(Side s) { return s == Side::Left ? "left" : "right"; }

/// Does u left-divide v? Streams class(v) and stops at the first member
/// whose prefix is equivalent to u. For short u the prefix test compares
/// words against class(u) directly; longer u goes through canonical forms.
inline bool left_divides_bool(const Monoid& m, const Word& u, const Word& v) {
    if (u.size() > v.size()) return false;
    if (u.empty()) return true;
    if (u.size() <= 8) {
        EquivClass cu = m.enumerate_class(u);
        return m.scan_class(v, [&](const Word& member) {
            return cu.contains(member.prefix(u.size()));
        });
    }
    Word cu = m.canonical(u);
    return m.scan_class(v, [&](const Word& member) {
        return m.canonical(member.prefix(u.size())) == cu;
    });
}

/// All quotient classes w with v ≐ u·w, sorted. Under cancellativity this
/// has at most one element.
inline std::vector<Word> left_quotients(const Monoid& m, const Word& u, const Word& v) {
    std::vector<Word> out;
    if (u.size() > v.size()) return out;
    if (u.empty()) {
        out.push_back(m.canonical(v));
        return out;
    }
    Word cu = m.canonical(u);
    EquivClass cv = m.enumerate_class(v);
    for (const Word& member : cv.members) {
        if (m.canonical(member.prefix(u.size())) != cu) continue;
        Word q = m.canonical(member.suffix_from(u.size()));
        if (std::find(out.begin(), out.end(), q) == out.end()) out.push_back(q);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Canonical quotient if u left-divides v (the least quotient class).
inline std::optional<Word> left_divides(const Monoid& m, const Word& u, const Word& v) {
    std::vector<Word> qs = left_quotients(m, u, v);
    if (qs.empty()) return std::nullopt;
    return qs.front();
}

inline bool right_divides_bool(const Monoid& m, const Word& u, const Word& v) {
    return left_divides_bool(m.reversed(), u.reversed(), v.reversed());
}

inline std::vector<Word> right_quotients(const Monoid& m, const Word& u, const Word& v) {
    std::vector<Word> out;
    for (const Word& q : left_quotients(m.reversed(), u.reversed(), v.reversed()))
        out.push_back(m.canonical(q.reversed()));
    std::sort(out.begin(), out.end());
    return out;
}

inline std::optional<Word> right_divides(const Monoid& m, const Word& u, const Word& v) {
    std::vector<Word> qs = right_quotients(m, u, v);
    if (qs.empty()) return std::nullopt;
    return qs.front();
}

inline bool divides_bool(const Monoid& m, Side side, const Word& u, const Word& v) {
    return side == Side::Left ? left_divides_bool(m, u, v) : right_divides_bool(m, u, v);
}

struct DivisorSet {
    Word element;  // canonical dividend
    Side side = Side::Left;
    std::vector<Word> divisors;  // canonical, sorted; always contains ε and the element

    bool contains(const Word& d) const {
        return std::binary_search(divisors.begin(), divisors.end(), d);
    }
};

/// Every class dividing v on the given side, computed from the prefixes
/// (resp. suffixes) of all members of class(v).
inline DivisorSet divisor_set(const Monoid& m, Side side, const Word& v) {
    DivisorSet out;
    out.side = side;
    const Monoid& eng = side == Side::Left ? m : m.reversed();
    Word w = side == Side::Left ? v : v.reversed();
    EquivClass cls = eng.enumerate_class(w);
    out.element = side == Side::Left ? cls.canonical : m.canonical(v);
    std::vector<Word> divs;
    for (const Word& member : cls.members)
        for (std::size_t len = 0; len <= member.size(); ++len) {
            Word d = eng.canonical(member.prefix(len));
            if (side == Side::Right) d = m.canonical(d.reversed());
            if (std::find(divs.begin(), divs.end(), d) == divs.end()) divs.push_back(d);
        }
    std::sort(divs.begin(), divs.end());
    out.divisors = std::move(divs);
    return out;
}

inline DivisorSet left_divisor_set(const Monoid& m, const Word& v) {
    return divisor_set(m, Side::Left, v);
}
inline DivisorSet right_divisor_set(const Monoid& m, const Word& v) {
    return divisor_set(m, Side::Right, v);
}

/// All classes of length <= L that every j in J divides on the given side
/// (side Right means common right-multiples, i.e. left-divisibility by J).
/// Every common right-multiple factors as J[0]·Z, so candidates are
/// enumerated as such products rather than over the whole ball.
inline std::vector<Word> common_multiples_bounded(const Monoid& m, const std::vector<Word>& J,
                                                  Side side, std::size_t L) {
    if (J.empty()) throw std::invalid_argument("common_multiples_bounded: empty J");
    const Monoid& eng = side == Side::Right ? m : m.reversed();
    std::vector<Word> base;
    for (const Word& j : J) base.push_back(side == Side::Right ? j : j.reversed());
    std::size_t longest = 0;
    for (std::size_t i = 0; i < base.size(); ++i)
        if (base[i].size() > base[longest].size()) longest = i;
    Word j0 = base[longest];
    if (L < j0.size()) return {};

    std::vector<Word> result;
    detail::FlatWordSet seen;
    for (std::size_t zlen = 0; zlen + j0.size() <= L; ++zlen) {
        eng.for_each_word(zlen, [&](const Word& z) {
            Word cand = eng.canonical(j0 * z);
            if (!seen.insert(cand)) return;
            for (std::size_t i = 0; i < base.size(); ++i) {
                if (i == longest) continue;
                if (!left_divides_bool(eng, base[i], cand)) return;
            }
            result.push_back(cand);
        });
    }
    if (side == Side::Left)
        for (Word& w : result) w = m.canonical(w.reversed());
    std::sort(result.begin(), result.end());
    return result;
}

/// Bounded minimal common multiples. `minimal` is exact within the bound:
/// a divisor of a member is itself short enough to be in the candidate set,
/// but minimal elements longer than L are missing entirely.
struct BoundedMultipleSet {
    std::vector<Word> base;
    Side side = Side::Right;
    std::size_t bound = 0;
    std::vector<Word> minimal;
};

inline BoundedMultipleSet mcm_bounded(const Monoid& m, const std::vector<Word>& J, Side side,
                                      std::size_t L) {
    BoundedMultipleSet out;
    for (const Word& j : J) out.base.push_back(m.canonical(j));
    std::sort(out.base.begin(), out.base.end());
    out.side = side;
    out.bound = L;
    std::vector<Word> cm = common_multiples_bounded(m, J, side, L);
    // Right multiples are ordered by left-division (min_r), and dually.
    Side div_side = side == Side::Right ? Side::Left : Side::Right;
    for (const Word& u : cm) {
        bool minimal = true;
        for (const Word& v : cm) {
            if (v.size() >= u.size()) break;  // cm is sorted by length
            if (divides_bool(m, div_side, v, u)) {
                minimal = false;
                break;
            }
        }
        if (minimal) out.minimal.push_back(u);
    }
    return out;
}

/// Exact maximal common divisors on the given side (divisor sets are finite).
inline std::vector<Word> mcd(const Monoid& m, const std::vector<Word>& J, Side side) {
    if (J.empty()) throw std::invalid_argument("mcd: empty J");
    std::vector<Word> common = divisor_set(m, side, J.front()).divisors;
    for (std::size_t i = 1; i < J.size(); ++i) {
        DivisorSet ds = divisor_set(m, side, J[i]);
        std::vector<Word> keep;
        for (const Word& d : common)
            if (ds.contains(d)) keep.push_back(d);
        common = std::move(keep);
    }
    std::vector<Word> out;
    for (const Word& u : common) {
        bool maximal = true;
        for (const Word& v : common)
            if (v.size() > u.size() && divides_bool(m, side, u, v)) {
                maximal = false;
                break;
            }
        if (maximal) out.push_back(u);
    }
    return out;
}

struct LcmFailureWitness {
    Word::Letter x = 0, y = 0;
    Word multiple1, multiple2;  // two incomparable minimal common right-multiples
};

/// Search letter pairs for a bounded mcm set with >= 2 incomparable members.
inline std::optional<LcmFailureWitness> lcm_failure_witness(const Monoid& m, std::size_t L) {
    const auto atoms = m.pres().atoms();
    for (std::size_t i = 0; i < atoms.size(); ++i)
        for (std::size_t j = i + 1; j < atoms.size(); ++j) {
            Word x, y;
            x.push_back(atoms[i]);
            y.push_back(atoms[j]);
            BoundedMultipleSet s = mcm_bounded(m, {x, y}, Side::Right, L);
            if (s.minimal.size() >= 2)
                return LcmFailureWitness{atoms[i], atoms[j], s.minimal[0], s.minimal[1]};
        }
    return std::nullopt;
}

}  // namespace posmon
