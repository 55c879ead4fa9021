#pragma once

#include <optional>
#include <string>
#include <vector>

#include "posmon/conjugacy.hpp"

namespace posmon {

/// Presentation of G+_{m,n}: generators s, t_1..t_m, u_1..u_n with cyclic
/// relations [s,t_1..t_m], [s,u_1..u_n] (each bracket of length k expands
/// to the k-1 rotations of its base word) and commutators [t_i, u_j].
inline Presentation gmn_presentation(std::size_t m, std::size_t n) {
    if (m < 2 || n < 2) throw std::invalid_argument("gmn_presentation: need m, n >= 2");
    if (1 + m + n > Word::kMaxAlphabet)
        throw std::invalid_argument("gmn_presentation: alphabet exceeds engine limit");
    std::vector<std::string> names{"s"};
    for (std::size_t i = 1; i <= m; ++i) names.push_back("t" + std::to_string(i));
    for (std::size_t j = 1; j <= n; ++j) names.push_back("u" + std::to_string(j));

    std::vector<std::pair<Word, Word>> rels;
    auto cyclic = [&](const std::vector<Word::Letter>& ls) {
        Word base = Word::from_letters(ls);
        for (std::size_t r = 1; r < ls.size(); ++r) {
            Word rot;
            for (std::size_t i = 0; i < ls.size(); ++i)
                rot.push_back(ls[(i + r) % ls.size()]);
            rels.push_back({base, rot});
        }
    };
    std::vector<Word::Letter> tc{0}, uc{0};
    for (std::size_t i = 1; i <= m; ++i) tc.push_back(static_cast<Word::Letter>(i));
    for (std::size_t j = 1; j <= n; ++j) uc.push_back(static_cast<Word::Letter>(m + j));
    cyclic(tc);
    cyclic(uc);
    for (std::size_t i = 1; i <= m; ++i)
        for (std::size_t j = 1; j <= n; ++j) {
            Word l, r;
            l.push_back(static_cast<Word::Letter>(i));
            l.push_back(static_cast<Word::Letter>(m + j));
            r.push_back(static_cast<Word::Letter>(m + j));
            r.push_back(static_cast<Word::Letter>(i));
            rels.push_back({l, r});
        }
    return Presentation(std::move(names), std::move(rels),
                        "gmn-" + std::to_string(m) + "-" + std::to_string(n));
}

struct GmnContext {
    std::size_t m, n;
    Monoid monoid;

    GmnContext(std::size_t m_, std::size_t n_, Limits limits = {})
        : m(m_), n(n_), monoid(gmn_presentation(m_, n_), limits) {}

    Word::Letter s() const { return 0; }
    Word::Letter t(std::size_t i) const { return static_cast<Word::Letter>(i); }
    Word::Letter u(std::size_t j) const { return static_cast<Word::Letter>(m + j); }
    bool is_s(Word::Letter l) const { return l == 0; }
    bool is_t(Word::Letter l) const { return l >= 1 && l <= m; }
    bool is_u(Word::Letter l) const { return l > m && l <= m + n; }
    /// 1-based index of a t- or u-letter within its family.
    std::size_t family_index(Word::Letter l) const { return is_t(l) ? l : l - m; }

    Word letter(Word::Letter l) const {
        Word w;
        w.push_back(l);
        return w;
    }
    /// t_{i0} t_{i0+1} … t_{j0} (side 1) or the u-analogue (side 2).
    Word cons_block(int side, std::size_t i0, std::size_t j0) const {
        Word w;
        for (std::size_t i = i0; i <= j0; ++i)
            w.push_back(side == 1 ? t(i) : u(i));
        return w;
    }
    std::size_t family_size(int side) const { return side == 1 ? m : n; }

    /// Δ1 = s·t_1⋯t_m, Δ2 = s·u_1⋯u_n, Δ = Δ1·u_1⋯u_n.
    Word delta_i(int side) const { return letter(s()) * cons_block(side, 1, family_size(side)); }
    Word delta1() const { return delta_i(1); }
    Word delta2() const { return delta_i(2); }
    Word delta() const { return delta1() * cons_block(2, 1, n); }
    /// Δ_{i,s}: the full t- (or u-) block, the quotient of Δ_i by s.
    Word delta_i_s(int side) const { return cons_block(side, 1, family_size(side)); }

    bool pure_side(int side, const Word& w) const {
        for (std::size_t i = 0; i < w.size(); ++i)
            if (side == 1 ? !is_t(w.letter(i)) : !is_u(w.letter(i))) return false;
        return true;
    }
};

/// Unique quotient of Δ_i by a left divisor v.
inline Word delta_quotient(const GmnContext& ctx, int side, const Word& v) {
    auto q = left_divides(ctx.monoid, v, ctx.delta_i(side));
    if (!q) throw std::invalid_argument("delta_quotient: v does not left-divide delta_i");
    return *q;
}

/// C_i(w_pure): the maximal consecutive-index block right-dividing a pure
/// t- (or u-) word, which is its longest ascending-run suffix. R_i is the
/// complementary prefix.
inline std::pair<Word, Word> consec_divisor_CR(const GmnContext& ctx, int side,
                                               const Word& w_pure) {
    if (w_pure.empty())
        throw std::invalid_argument("consec_divisor_C: undefined on the empty word");
    if (!ctx.pure_side(side, w_pure))
        throw std::invalid_argument("consec_divisor_C: word not over the pure alphabet");
    std::size_t pos = w_pure.size() - 1;
    while (pos > 0 &&
           ctx.family_index(w_pure.letter(pos - 1)) + 1 == ctx.family_index(w_pure.letter(pos)))
        --pos;
    return {w_pure.suffix_from(pos), w_pure.prefix(pos)};
}

inline Word consec_divisor_C(const GmnContext& ctx, int side, const Word& w_pure) {
    return consec_divisor_CR(ctx, side, w_pure).first;
}
inline Word consec_divisor_R(const GmnContext& ctx, int side, const Word& w_pure) {
    return consec_divisor_CR(ctx, side, w_pure).second;
}

/// C̃_i(w_pure·s) and its companion R̃_i: C_i(w_pure)·s when the family's
/// last letter closes the run, else bare s.
inline std::pair<Word, Word> tilde_CR(const GmnContext& ctx, int side, const Word& w_pure) {
    Word sw = ctx.letter(ctx.s());
    if (w_pure.empty()) return {sw, Word{}};
    auto [c, r] = consec_divisor_CR(ctx, side, w_pure);
    if (ctx.family_index(c.letter(c.size() - 1)) == ctx.family_size(side))
        return {c * sw, r};
    return {sw, w_pure};
}

inline Word tilde_C(const GmnContext& ctx, int side, const Word& w_pure) {
    return tilde_CR(ctx, side, w_pure).first;
}

/// Membership in W_{m,n}: no member of class(w) contains a spelling of Δ1
/// or Δ2 as a factor. If a factor spelling occurs at all, rewriting inside
/// it reaches the base spelling, so scanning for the base spellings of Δ1
/// and Δ2 across the class is complete. The left-division quick test is a
/// sufficient condition and skips the scan.
inline bool gmn_membership_W(const GmnContext& ctx, const Word& w) {
    const Monoid& m = ctx.monoid;
    if (!left_divides_bool(m, ctx.delta_i_s(1), w) && !left_divides_bool(m, ctx.delta_i_s(2), w))
        return true;
    Word d1 = ctx.delta1(), d2 = ctx.delta2();
    for (const Word& member : m.enumerate_class(w).members)
        if (member.contains_factor(d1) || member.contains_factor(d2)) return false;
    return true;
}

/// Alternating block decomposition w ≐ w_0(t)·w_0(u)·s·…·s·w_N(t)·w_N(u),
/// valid inside W_{m,n} where only the commutators apply.
struct GmnNormalForm {
    std::vector<std::pair<Word, Word>> blocks;  // (w_i(t), w_i(u))

    std::size_t N() const { return blocks.size() - 1; }
    Word block(int side, std::size_t i) const {
        return side == 1 ? blocks[i].first : blocks[i].second;
    }
    Word reassemble(const GmnContext& ctx) const {
        Word w;
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            if (i) w = w * ctx.letter(ctx.s());
            w = w * blocks[i].first * blocks[i].second;
        }
        return w;
    }
};

inline GmnNormalForm gmn_normal_form(const GmnContext& ctx, const Word& w) {
    if (!gmn_membership_W(ctx, w))
        throw std::invalid_argument("gmn_normal_form: word not in W_{m,n}");
    GmnNormalForm nf;
    Word tpart, upart;
    for (std::size_t i = 0; i < w.size(); ++i) {
        Word::Letter l = w.letter(i);
        if (ctx.is_s(l)) {
            nf.blocks.push_back({tpart, upart});
            tpart = Word{};
            upart = Word{};
        } else if (ctx.is_t(l)) {
            tpart.push_back(l);
        } else {
            upart.push_back(l);
        }
    }
    nf.blocks.push_back({tpart, upart});
    if (!ctx.monoid.words_equal(nf.reassemble(ctx), w))
        throw std::logic_error("gmn_normal_form: reassembly mismatch");
    return nf;
}

/// Greedy left extraction w ≐ Δ^k · Δ_1^λ1 · Δ_{1,s}^μ1 · … in fixed
/// precedence order; λ1·λ2 = 0 always holds.
struct GmnStrata {
    std::size_t k = 0, lambda1 = 0, lambda2 = 0, mu1 = 0, mu2 = 0;
    Word remainder;  // canonical
};

inline GmnStrata gmn_strata(const GmnContext& ctx, const Word& w) {
    const Monoid& m = ctx.monoid;
    GmnStrata st;
    auto strip = [&](const Word& d, Word cur, std::size_t& count) {
        while (true) {
            auto q = left_divides(m, d, cur);
            if (!q) break;
            cur = *q;
            ++count;
        }
        return cur;
    };
    Word cur = strip(ctx.delta(), m.canonical(w), st.k);
    std::size_t l1 = 0, l2 = 0;
    strip(ctx.delta1(), cur, l1);
    strip(ctx.delta2(), cur, l2);
    if (l1 && l2) throw std::logic_error("gmn_strata: both delta1 and delta2 divide");
    st.lambda1 = l1;
    st.lambda2 = l2;
    if (l1) {
        std::size_t dummy = 0;
        cur = strip(ctx.delta1(), cur, dummy);
        cur = strip(ctx.delta_i_s(1), cur, st.mu1);
    } else if (l2) {
        std::size_t dummy = 0;
        cur = strip(ctx.delta2(), cur, dummy);
        cur = strip(ctx.delta_i_s(2), cur, st.mu2);
    } else {
        cur = strip(ctx.delta_i_s(1), cur, st.mu1);
        cur = strip(ctx.delta_i_s(2), cur, st.mu2);
    }
    st.remainder = cur;
    return st;
}

inline std::vector<Word::Letter> initial_letters(const Monoid& m, const Word& w) {
    std::vector<Word::Letter> out;
    for (auto a : m.pres().atoms()) {
        Word la;
        la.push_back(a);
        if (left_divides_bool(m, la, w)) out.push_back(a);
    }
    return out;
}

/// mcm_r({x, w}) (x a t- or u-letter) or mcm_r({s, w·s}) in closed form:
/// either a singleton or a family indexed by the reduced words of
/// the opposite pure alphabet.
struct GmnMcmDescription {
    Word x, base;  // the pair is {x, base}
    std::string branch;
    std::optional<Word> singleton;
    struct Family {
        Word prefix;
        int middle_side = 2;  // family parameter ranges over F+_{side,rm}
        Word tail;
    };
    std::optional<Family> family;

    /// Canonical members up to length bound (family instantiated lazily).
    std::vector<Word> instantiate(const GmnContext& ctx, std::size_t bound) const {
        std::vector<Word> out;
        if (singleton) {
            if (singleton->size() <= bound) out.push_back(ctx.monoid.canonical(*singleton));
            return out;
        }
        const Word full = ctx.delta_i_s(family->middle_side);
        std::size_t fixed = family->prefix.size() + family->tail.size();
        for (std::size_t len = 0; fixed + len <= bound; ++len) {
            ctx.monoid.for_each_word(len, [&](const Word& z) {
                for (std::size_t i = 0; i < z.size(); ++i)
                    if (!(family->middle_side == 1 ? ctx.is_t(z.letter(i))
                                                   : ctx.is_u(z.letter(i))))
                        return;
                if (z.size() >= full.size() && z.suffix_from(z.size() - full.size()) == full)
                    return;  // not in F+_{i,rm}
                out.push_back(ctx.monoid.canonical(family->prefix * z * family->tail));
            });
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
};

inline GmnMcmDescription gmn_mcm_letter(const GmnContext& ctx, Word::Letter x, const Word& w) {
    const Monoid& mo = ctx.monoid;
    if (!gmn_membership_W(ctx, w)) throw std::invalid_argument("gmn_mcm_letter: w not in W_{m,n}");
    GmnMcmDescription out;
    out.x = ctx.letter(x);
    GmnNormalForm nf = gmn_normal_form(ctx, mo.canonical(w));
    if (ctx.is_s(x)) {
        if (left_divides_bool(mo, ctx.letter(x), w))
            throw std::invalid_argument("gmn_mcm_letter: requires s not dividing w from the left");
        out.base = w * ctx.letter(ctx.s());
        std::size_t N = nf.N();
        Word d1 = delta_quotient(ctx, 1, tilde_C(ctx, 1, nf.block(1, N)));
        Word d2 = delta_quotient(ctx, 2, tilde_C(ctx, 2, nf.block(2, N)));
        bool t0 = !nf.block(1, 0).empty(), u0 = !nf.block(2, 0).empty();
        if (t0 && !u0) {
            out.branch = "t-lead";
            out.singleton = out.base * d1;
        } else if (!t0 && u0) {
            out.branch = "u-lead";
            out.singleton = out.base * d2;
        } else if (t0 && u0) {
            out.branch = "both-lead";
            out.singleton = out.base * d1 * d2;
        } else {
            throw std::logic_error("gmn_mcm_letter: s divides w despite precondition");
        }
        return out;
    }
    int side = ctx.is_t(x) ? 1 : 2;
    int other = 3 - side;
    if (left_divides_bool(mo, ctx.letter(x), w))
        throw std::invalid_argument("gmn_mcm_letter: requires x not dividing w from the left");
    bool has_s = false;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (ctx.is_s(w.letter(i))) has_s = true;
    if (!has_s) throw std::invalid_argument("gmn_mcm_letter: requires w to contain s");
    out.base = w;
    std::size_t N = nf.N();
    Word ctil = tilde_C(ctx, side, nf.block(side, N - 1));
    Word dtil = delta_quotient(ctx, side, ctil);
    if (left_divides_bool(mo, nf.block(side, N), dtil)) {
        out.branch = "block-divides";
        out.singleton = w * delta_quotient(ctx, side, ctil * nf.block(side, N));
    } else {
        out.branch = "family";
        GmnMcmDescription::Family fam;
        fam.prefix = w;
        fam.middle_side = other;
        fam.tail = delta_quotient(ctx, side, consec_divisor_C(ctx, side, nf.block(side, N)));
        out.family = fam;
    }
    return out;
}

}  // namespace posmon

#include "posmon/gmn_property_p.hpp"
