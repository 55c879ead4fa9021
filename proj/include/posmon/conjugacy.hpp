#pragma once

#include <algorithm>
#include <optional>
#include <thread>
#include <string>
#include <vector>

#include "posmon/garside.hpp"

namespace posmon {

/// The growing orbit O^(1) ⊆ O^(2) ⊆ … of w under conjugation by left
/// divisors of a fundamental element, with parent links so that each
/// member's conjugator can be reassembled from its step divisors.
struct OrbitState {
    Word seed;   // canonical
    Word delta;  // canonical
    std::vector<std::vector<Word>> levels;
    std::optional<std::size_t> stabilized_at;

    struct Step {
        Word element;  // reached class
        Word from;     // previous class
        Word divisor;  // A with A·element ≐ from·A
    };
    std::vector<Step> steps;  // seed excluded

    const std::vector<Word>& final_set() const { return levels.back(); }
    bool contains(const Word& v) const {
        return std::binary_search(final_set().begin(), final_set().end(), v);
    }

    /// Concatenated divisor chain δ1·δ2⋯δk conjugating seed to target.
    std::optional<std::vector<Word>> chain_to(const Word& target) const {
        if (target == seed) return std::vector<Word>{};
        std::vector<Word> rev;
        Word cur = target;
        while (cur != seed) {
            bool found = false;
            for (const auto& s : steps)
                if (s.element == cur) {
                    rev.push_back(s.divisor);
                    cur = s.from;
                    found = true;
                    break;
                }
            if (!found) return std::nullopt;
        }
        std::reverse(rev.begin(), rev.end());
        return rev;
    }
};

/// Non-trivial left divisors of delta, the conjugating alphabet of one
/// orbit step.
inline std::vector<Word> orbit_divisors(const Monoid& m, const Word& delta) {
    std::vector<Word> out;
    for (const Word& d : left_divisor_set(m, delta).divisors)
        if (!d.empty()) out.push_back(d);
    return out;
}

/// One orbit expansion: every solution V of A·V ≐ U·A over current U and
/// divisor A. Output contains the input.
inline std::vector<Word> orbit_step(const Monoid& m, const std::vector<Word>& current,
                                    const Word& delta) {
    std::vector<Word> out = current;
    std::vector<Word> divisors = orbit_divisors(m, delta);
    for (const Word& u : current)
        for (const Word& a : divisors)
            for (const Word& v : left_quotients(m, a, u * a))
                if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline OrbitState orbit_closure(const Monoid& m, const Word& w, const Word& delta) {
    OrbitState orbit;
    orbit.seed = m.canonical(w);
    orbit.delta = m.canonical(delta);
    std::vector<Word> divisors = orbit_divisors(m, delta);

    std::vector<Word> known{orbit.seed};
    std::vector<Word> frontier{orbit.seed};
    while (true) {
        std::vector<Word> next;
        for (const Word& u : frontier)
            for (const Word& a : divisors)
                for (const Word& v : left_quotients(m, a, u * a)) {
                    if (std::binary_search(known.begin(), known.end(), v)) continue;
                    if (std::find(next.begin(), next.end(), v) == next.end()) {
                        next.push_back(v);
                        orbit.steps.push_back({v, u, a});
                    }
                }
        std::vector<Word> level = known;
        level.insert(level.end(), next.begin(), next.end());
        std::sort(level.begin(), level.end());
        orbit.levels.push_back(level);
        if (next.empty()) {
            if (orbit.levels.size() == 1) orbit.levels.push_back(level);
            orbit.stabilized_at = orbit.levels.size() - 1;
            break;
        }
        frontier = std::move(next);
        known = std::move(level);
    }
    return orbit;
}

namespace detail {

/// Run fn over every canonical candidate of the given length, slicing the
/// index space across jobs threads. Per-slice outputs come back separately
/// so callers can merge deterministically. The word cache takes concurrent
/// readers with exclusive writers, so workers share the monoid directly.
template <typename Fn>
std::vector<std::vector<Word>> sliced_scan(const Monoid& m, std::size_t len, std::size_t jobs,
                                           Fn&& fn) {
    std::uint64_t count = m.word_count(len);
    std::size_t nthreads = jobs > 1 ? jobs : 1;
    std::vector<std::vector<Word>> locals(nthreads);
    auto worker = [&](std::size_t t) {
        std::uint64_t lo = count * t / nthreads, hi = count * (t + 1) / nthreads;
        for (std::uint64_t i = lo; i < hi; ++i) {
            Word a = m.word_at(len, i);
            if (m.canonical(a) == a) fn(a, locals[t]);
        }
    };
    if (nthreads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> threads;
        std::vector<std::exception_ptr> errors(nthreads);
        for (std::size_t t = 0; t < nthreads; ++t)
            threads.emplace_back([&, t] {
                try {
                    worker(t);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        for (auto& th : threads) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    return locals;
}

inline void guard_scan(const Monoid& m, std::size_t L, const char* who) {
    std::uint64_t total = 0;
    for (std::size_t len = 1; len <= L; ++len) {
        total += m.word_count(len);
        if (total > m.limits().scan_word_ceiling)
            throw CeilingExceeded(std::string(who) + ": scan ceiling at bound " +
                                  std::to_string(L));
    }
}

}  // namespace detail

/// Exhaustive lower bound for Conj⁺(w): targets of every conjugator A with
/// 1 ≤ |A| ≤ L, plus class(w) itself. A ranges over canonical class
/// representatives, which covers the same set of equations. The result is
/// identical for any jobs count.
inline std::vector<Word> conj_oracle_bounded(const Monoid& m, const Word& w, std::size_t L,
                                             std::size_t jobs = 1) {
    detail::guard_scan(m, L, "conj_oracle_bounded");
    std::vector<Word> out{m.canonical(w)};
    for (std::size_t len = 1; len <= L; ++len)
        for (auto& local : detail::sliced_scan(m, len, jobs, [&](const Word& a,
                                                                 std::vector<Word>& sink) {
                 for (const Word& v : left_quotients(m, a, w * a)) sink.push_back(v);
             }))
            out.insert(out.end(), local.begin(), local.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// All transit classes A (1 ≤ |A| ≤ L with A |_l w·A), by length then lex.
inline std::vector<Word> transit_elements_bounded(const Monoid& m, const Word& w, std::size_t L,
                                                  std::size_t jobs = 1) {
    detail::guard_scan(m, L, "transit_elements_bounded");
    std::vector<Word> out;
    for (std::size_t len = 1; len <= L; ++len) {
        std::vector<Word> level;
        for (auto& local : detail::sliced_scan(m, len, jobs, [&](const Word& a,
                                                                 std::vector<Word>& sink) {
                 if (left_divides_bool(m, a, w * a)) sink.push_back(a);
             }))
            level.insert(level.end(), local.begin(), local.end());
        std::sort(level.begin(), level.end());
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;  // length-major, lexicographic within each length
}

/// Members of the bounded transit set with no proper left-dividing transit
/// inside the same set. A truncation of Trans^min(w): minimal transits
/// longer than L are absent.
inline std::vector<Word> trans_min_bounded(const Monoid& m, const Word& w, std::size_t L,
                                           std::size_t jobs = 1) {
    std::vector<Word> all = transit_elements_bounded(m, w, L, jobs);
    std::vector<Word> out;
    for (const Word& a : all) {
        bool minimal = true;
        for (const Word& b : all) {
            if (b.size() >= a.size()) break;
            if (left_divides_bool(m, b, a)) {
                minimal = false;
                break;
            }
        }
        if (minimal) out.push_back(a);
    }
    return out;
}

struct PropertyPVerdict {
    bool holds_at_bound = true;
    std::optional<Word> counterexample;  // first minimal transit not dividing delta
    std::size_t bound = 0;
};

/// Check that every bounded-minimal transit of w left-divides delta. For a
/// minimal transit the property-P witness condition collapses to exactly
/// this test. Divisor-set membership is checked first; minimality is only
/// settled for the transits that fail it, which keeps the scan linear.
inline PropertyPVerdict property_P_probe(const Monoid& m, const Word& w, const Word& delta,
                                         std::size_t L, std::size_t jobs = 1) {
    PropertyPVerdict v;
    v.bound = L;
    DivisorSet delta_divs = left_divisor_set(m, delta);
    std::vector<Word> transits = transit_elements_bounded(m, w, L, jobs);
    for (std::size_t i = 0; i < transits.size(); ++i) {
        const Word& a = transits[i];
        if (delta_divs.contains(a)) continue;
        bool minimal = true;
        for (const Word& b : transits) {
            if (b.size() >= a.size()) break;
            if (left_divides_bool(m, b, a)) {
                minimal = false;
                break;
            }
        }
        if (minimal) {
            v.holds_at_bound = false;
            v.counterexample = a;
            return v;
        }
    }
    return v;
}

enum class ConjVerdict { Yes, No, NotFoundInOrbit };

struct ConjugacyResult {
    ConjVerdict verdict = ConjVerdict::NotFoundInOrbit;
    std::string reason;
    std::vector<Word> chain;            // per-step divisors for a yes
    std::optional<Word> conjugator;     // their concatenation, when it fits the engine
    std::optional<OrbitState> orbit;
};

/// Decide conjugacy via the orbit of u under delta. A miss is definitive
/// ("no") only when the caller certifies property P for the inputs; else it
/// is reported as not-found-in-orbit. Letter-count conservation gives cheap
/// definitive separations first.
inline ConjugacyResult are_conjugate(const Monoid& m, const Word& u, const Word& v,
                                     const Word& delta, bool p_certified = false) {
    ConjugacyResult r;
    if (u.size() != v.size()) {
        r.verdict = ConjVerdict::No;
        r.reason = "length differs (homogeneity)";
        return r;
    }
    auto cu = u.letter_counts(), cv = v.letter_counts();
    for (auto letter : m.pres().conserved_letters())
        if (cu[letter] != cv[letter]) {
            r.verdict = ConjVerdict::No;
            r.reason = std::string("count of conserved letter '") +
                       m.pres().alphabet()[letter].name + "' differs";
            return r;
        }
    OrbitState orbit = orbit_closure(m, u, delta);
    Word target = m.canonical(v);
    if (orbit.contains(target)) {
        r.verdict = ConjVerdict::Yes;
        r.chain = *orbit.chain_to(target);
        if (r.chain.empty()) {
            // u ≐ v; delta itself conjugates when it commutes with u.
            if (u.size() + delta.size() <= Word::kMaxLen &&
                m.words_equal(delta * target, u * delta))
                r.conjugator = orbit.delta;
        } else {
            Word a;
            bool fits = true;
            for (const Word& d : r.chain) {
                if (a.size() + d.size() > Word::kMaxLen) {
                    fits = false;
                    break;
                }
                a = a * d;
            }
            if (fits && u.size() + a.size() <= Word::kMaxLen) {
                if (!m.words_equal(a * target, u * a))
                    throw std::logic_error("are_conjugate: conjugator replay failed");
                r.conjugator = a;
            }
        }
        r.reason = "found in orbit";
    } else {
        r.verdict = p_certified ? ConjVerdict::No : ConjVerdict::NotFoundInOrbit;
        r.reason = p_certified ? "orbit is all of Conj+ (property P)" : "not found in orbit at stabilization";
    }
    r.orbit = std::move(orbit);
    return r;
}

/// A finite transit set together with single-parameter word templates, the
/// shape of the minimal-transit tables.
struct TransitFamily {
    std::vector<Word> finite;

    struct Template {
        struct Block {
            Word base;
            bool powered = false;  // repeated i times when set
        };
        std::vector<Block> blocks;
        std::size_t i_min = 0;
        std::optional<std::size_t> i_max;  // inclusive; empty = unbounded

        Word instantiate(std::size_t i) const {
            Word w;
            for (const auto& b : blocks) {
                std::size_t reps = b.powered ? i : 1;
                for (std::size_t r = 0; r < reps; ++r) w = w * b.base;
            }
            return w;
        }
        std::size_t length_at(std::size_t i) const {
            std::size_t fixed = 0, per = 0;
            for (const auto& b : blocks) (b.powered ? per : fixed) += b.base.size();
            return fixed + per * i;
        }
    };
    std::vector<Template> templates;

    /// Finite part plus every template instance of length ≤ maxlen.
    std::vector<Word> instantiate_up_to_length(std::size_t maxlen) const {
        std::vector<Word> out;
        for (const Word& w : finite)
            if (w.size() <= maxlen) out.push_back(w);
        for (const auto& t : templates)
            for (std::size_t i = t.i_min;; ++i) {
                if (t.i_max && i > *t.i_max) break;
                if (t.length_at(i) > maxlen) break;
                out.push_back(t.instantiate(i));
                if (t.length_at(i + 1) == t.length_at(i)) break;  // no powered block
            }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    /// Finite part plus instances with parameter i ≤ i_cap (and any i_max).
    /// Instances beyond the engine's word length are skipped.
    std::vector<Word> instantiate_parameter_up_to(std::size_t i_cap) const {
        std::vector<Word> out = finite;
        for (const auto& t : templates) {
            std::size_t hi = t.i_max ? std::min(*t.i_max, i_cap) : i_cap;
            for (std::size_t i = t.i_min; i <= hi; ++i) {
                if (t.length_at(i) > Word::kMaxLen) break;
                out.push_back(t.instantiate(i));
                if (t.length_at(i + 1) == t.length_at(i)) break;
            }
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    std::string render(const Presentation& p) const {
        std::string out = "{";
        bool first = true;
        for (const Word& w : finite) {
            if (!first) out += ", ";
            out += p.format_word(w);
            first = false;
        }
        out += "}";
        for (const auto& t : templates) {
            out += " u {";
            for (std::size_t bi = 0; bi < t.blocks.size(); ++bi) {
                if (bi) out += " ";
                out += p.format_word(t.blocks[bi].base);
                if (t.blocks[bi].powered) out += "^i";
            }
            out += " [i>=" + std::to_string(t.i_min);
            if (t.i_max) out += ", i<=" + std::to_string(*t.i_max);
            out += "]}";
        }
        return out;
    }
};

/// A word in the free group: letters with exponent +1 or -1.
struct GroupLetter {
    Word::Letter gen = 0;
    int exp = 1;
};
using GroupWord = std::vector<GroupLetter>;

inline GroupWord parse_group_word(const Presentation& p, const std::string& text) {
    std::istringstream in(text);
    std::string tok;
    GroupWord g;
    std::vector<std::string> toks;
    while (in >> tok) toks.push_back(tok);
    if (toks.size() == 1 && toks[0] == "e" && !p.find_generator("e")) return g;
    for (const auto& t : toks) {
        int exp = 1;
        std::string name = t;
        if (name.size() > 3 && name.substr(name.size() - 3) == "^-1") {
            exp = -1;
            name = name.substr(0, name.size() - 3);
        }
        auto id = p.find_generator(name);
        if (!id) throw ParseError("unknown generator name: " + name);
        g.push_back({*id, exp});
    }
    return g;
}

inline std::string format_group_word(const Presentation& p, const GroupWord& g) {
    if (g.empty()) return "e";
    std::string out;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (i) out += ' ';
        out += p.alphabet()[g[i].gen].name;
        if (g[i].exp < 0) out += "^-1";
    }
    return out;
}

/// g written as Λ^{-k}·pos with Λ the central power of the fundamental
/// element: each inverse letter s^{-1} becomes Δ_s·Δ^{ord-1} and one Λ^{-1}
/// is pulled to the front.
struct GroupNormalization {
    std::size_t k = 0;
    Word pos;
};

inline GroupNormalization group_normalize(const Monoid& m, const GroupWord& g,
                                          const QuasiCentralCert& fund) {
    if (fund.kind != QuasiCentralCert::Kind::Fundamental)
        throw std::invalid_argument("group_normalize: certificate is not fundamental");
    GroupNormalization out;
    Word delta_pow = fund.element.pow(fund.sigma.order - 1);
    for (const auto& gl : g) {
        if (gl.exp > 0) {
            out.pos.push_back(gl.gen);
        } else {
            out.pos = out.pos * fund.quotient_for(gl.gen) * delta_pow;
            ++out.k;
        }
    }
    (void)m;
    return out;
}

inline bool group_equal(const Monoid& m, const GroupWord& g1, const GroupWord& g2,
                        const QuasiCentralCert& fund) {
    Word lambda = central_power(m, fund);
    GroupNormalization n1 = group_normalize(m, g1, fund);
    GroupNormalization n2 = group_normalize(m, g2, fund);
    return m.words_equal(lambda.pow(n2.k) * n1.pos, lambda.pow(n1.k) * n2.pos);
}

inline ConjugacyResult group_conjugate(const Monoid& m, const GroupWord& g1, const GroupWord& g2,
                                       const QuasiCentralCert& fund, bool p_certified = false) {
    Word lambda = central_power(m, fund);
    GroupNormalization n1 = group_normalize(m, g1, fund);
    GroupNormalization n2 = group_normalize(m, g2, fund);
    return are_conjugate(m, lambda.pow(n2.k) * n1.pos, lambda.pow(n1.k) * n2.pos, fund.element,
                         p_certified);
}

}  // namespace posmon
