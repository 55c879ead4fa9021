#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "posmon/divisibility.hpp"

namespace posmon {

/// The permutation sigma attached to a quasi-central element, as a map on
/// atom ids, with its order in the symmetric group.
struct PermutationSigma {
    std::vector<std::pair<Word::Letter, Word::Letter>> mapping;  // sorted by source
    std::size_t order = 1;

    Word::Letter apply(Word::Letter s) const {
        for (const auto& [a, b] : mapping)
            if (a == s) return b;
        return s;
    }
    bool is_identity() const {
        for (const auto& [a, b] : mapping)
            if (a != b) return false;
        return true;
    }

    static std::size_t compute_order(const std::vector<std::pair<Word::Letter, Word::Letter>>& m) {
        std::size_t ord = 1;
        for (const auto& [start, unused] : m) {
            (void)unused;
            std::size_t len = 0;
            Word::Letter x = start;
            do {
                for (const auto& [a, b] : m)
                    if (a == x) {
                        x = b;
                        break;
                    }
                ++len;
            } while (x != start);
            ord = std::lcm(ord, len);
        }
        return ord;
    }

    /// Cycle notation over generator names, e.g. "(a c)(b)".
    std::string cycles(const Presentation& p) const {
        std::string out;
        std::vector<bool> done(Word::kMaxAlphabet, false);
        for (const auto& [start, unused] : mapping) {
            (void)unused;
            if (done[start]) continue;
            out += "(";
            Word::Letter x = start;
            bool first = true;
            do {
                done[x] = true;
                if (!first) out += " ";
                out += p.alphabet()[x].name;
                first = false;
                x = apply(x);
            } while (x != start);
            out += ")";
        }
        return out;
    }
};

/// Certificate that d is quasi-central (s·d ≐ d·σ(s) for all atoms) and,
/// when kind is Fundamental, that additionally d ≐ s·d_s ≐ d_s·σ(s) with
/// the per-atom quotients recorded. Witness pairs replay without re-search.
struct QuasiCentralCert {
    enum class Kind { QuasiCentral, Fundamental };

    Word element;  // canonical
    PermutationSigma sigma;
    Kind kind = Kind::QuasiCentral;

    struct AtomWitness {
        Word::Letter atom = 0;
        Word::Letter image = 0;  // sigma(atom)
        Word lhs, rhs;           // the equivalent pair s·d, d·σ(s)
    };
    std::vector<AtomWitness> witnesses;
    std::vector<std::pair<Word::Letter, Word>> quotients;  // (s, d_s), fundamental only

    Word quotient_for(Word::Letter s) const {
        for (const auto& [a, q] : quotients)
            if (a == s) return q;
        throw std::logic_error("no quotient recorded for atom");
    }

    bool replay(const Monoid& m) const {
        for (const auto& w : witnesses)
            if (!m.words_equal(w.lhs, w.rhs)) return false;
        for (const auto& [s, q] : quotients) {
            Word letter;
            letter.push_back(s);
            if (!m.words_equal(letter * q, element)) return false;
            Word img;
            img.push_back(sigma.apply(s));
            if (!m.words_equal(q * img, element)) return false;
        }
        return true;
    }
};

namespace detail {

/// Choose sigma as the lexicographically least perfect matching among the
/// per-atom candidate images. Under cancellativity candidates are unique,
/// so this is just assembling the map.
inline bool match_sigma(const std::vector<std::uint8_t>& atoms,
                        const std::vector<std::vector<Word::Letter>>& candidates, std::size_t i,
                        std::vector<Word::Letter>& chosen, std::vector<bool>& used) {
    if (i == atoms.size()) return true;
    for (Word::Letter t : candidates[i]) {
        if (used[t]) continue;
        used[t] = true;
        chosen[i] = t;
        if (match_sigma(atoms, candidates, i + 1, chosen, used)) return true;
        used[t] = false;
    }
    return false;
}

}  // namespace detail

/// Certify s·d ≐ d·σ(s) for all atoms s. ε gets the trivial certificate.
/// The test for each atom runs one class enumeration of s·d and probes the
/// literal words d·t for membership; a letter-count filter prunes t first.
inline std::optional<QuasiCentralCert> quasi_central_cert(const Monoid& m, const Word& d) {
    const auto atoms = m.pres().atoms();
    QuasiCentralCert cert;
    cert.element = d.empty() ? Word{} : m.canonical(d);
    if (d.empty()) {
        for (auto a : atoms) cert.sigma.mapping.push_back({a, a});
        return cert;
    }
    const auto conserved = m.pres().conserved_letters();
    std::vector<std::vector<Word::Letter>> candidates(atoms.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        Word s;
        s.push_back(atoms[i]);
        EquivClass cls = m.enumerate_class(s * d);
        for (auto t : atoms) {
            bool compatible = true;
            for (auto v : conserved)
                if ((v == atoms[i]) != (v == t)) compatible = false;
            if (!compatible) continue;
            Word tw;
            tw.push_back(t);
            if (cls.contains(d * tw)) candidates[i].push_back(t);
        }
        if (candidates[i].empty()) return std::nullopt;
    }
    std::vector<Word::Letter> chosen(atoms.size());
    std::vector<bool> used(Word::kMaxAlphabet, false);
    if (!detail::match_sigma(atoms, candidates, 0, chosen, used)) return std::nullopt;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        cert.sigma.mapping.push_back({atoms[i], chosen[i]});
        Word s, t;
        s.push_back(atoms[i]);
        t.push_back(chosen[i]);
        cert.witnesses.push_back({atoms[i], chosen[i], s * d, d * t});
    }
    cert.sigma.order = PermutationSigma::compute_order(cert.sigma.mapping);
    return cert;
}

/// Certify d ≐ s·d_s ≐ d_s·σ(s) for all atoms. Implies quasi-centrality
/// with the same sigma; ε is never fundamental.
inline std::optional<QuasiCentralCert> fundamental_cert(const Monoid& m, const Word& d) {
    if (d.empty()) return std::nullopt;
    const auto atoms = m.pres().atoms();
    EquivClass cls = m.enumerate_class(d);
    Word cd = cls.canonical;
    std::vector<std::vector<Word::Letter>> candidates(atoms.size());
    std::vector<std::vector<std::pair<Word::Letter, Word>>> quot_for(atoms.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        for (const Word& member : cls.members) {
            if (member.letter(0) != atoms[i]) continue;
            Word q = member.suffix_from(1);
            for (auto t : atoms) {
                bool seen = false;
                for (auto c : candidates[i])
                    if (c == t) seen = true;
                if (seen) continue;
                Word tw;
                tw.push_back(t);
                if (cls.contains(q * tw)) {
                    candidates[i].push_back(t);
                    quot_for[i].push_back({t, q});
                }
            }
        }
        if (candidates[i].empty()) return std::nullopt;
    }
    std::vector<Word::Letter> chosen(atoms.size());
    std::vector<bool> used(Word::kMaxAlphabet, false);
    if (!detail::match_sigma(atoms, candidates, 0, chosen, used)) return std::nullopt;

    QuasiCentralCert cert;
    cert.element = cd;
    cert.kind = QuasiCentralCert::Kind::Fundamental;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        cert.sigma.mapping.push_back({atoms[i], chosen[i]});
        Word s, t;
        s.push_back(atoms[i]);
        t.push_back(chosen[i]);
        cert.witnesses.push_back({atoms[i], chosen[i], s * d, d * t});
        for (const auto& [img, q] : quot_for[i])
            if (img == chosen[i]) {
                cert.quotients.push_back({atoms[i], q});
                break;
            }
    }
    cert.sigma.order = PermutationSigma::compute_order(cert.sigma.mapping);
    return cert;
}

/// Garside test: left- and right-divisor sets coincide, are finite (always
/// true here) and contain every atom, which generates an atomic monoid.
inline bool garside_check(const Monoid& m, const Word& d) {
    if (d.empty()) return false;
    DivisorSet L = left_divisor_set(m, d);
    DivisorSet R = right_divisor_set(m, d);
    if (L.divisors != R.divisors) return false;
    for (auto a : m.pres().atoms()) {
        Word s;
        s.push_back(a);
        if (!L.contains(m.canonical(s))) return false;
    }
    return true;
}

/// Λ = d^ord(σ), verified central atom by atom.
inline Word central_power(const Monoid& m, const QuasiCentralCert& cert) {
    Word lambda = cert.element.pow(cert.sigma.order);
    for (auto a : m.pres().atoms()) {
        Word s;
        s.push_back(a);
        if (!m.words_equal(s * lambda, lambda * s))
            throw std::runtime_error("central_power: d^ord is not central (cancellativity anomaly)");
    }
    return lambda;
}

/// True iff no proper divisor of d, on either side, is fundamental.
/// Divisor sets are finite, so the check is exact.
inline bool minimal_fundamental_check(const Monoid& m, const Word& d) {
    if (!fundamental_cert(m, d)) throw std::invalid_argument("minimal_fundamental_check: not fundamental");
    detail::FlatWordSet seen;
    std::vector<Word> divs;
    for (Side side : {Side::Left, Side::Right})
        for (const Word& u : divisor_set(m, side, d).divisors)
            if (!u.empty() && u.size() < d.size() && seen.insert(u)) divs.push_back(u);
    for (const Word& u : divs)
        if (fundamental_cert(m, u)) return false;
    return true;
}

/// True iff d is not a product of two non-trivial quasi-central elements.
inline bool indecomposable_qz_check(const Monoid& m, const Word& d) {
    if (!quasi_central_cert(m, d)) throw std::invalid_argument("indecomposable_qz_check: not quasi-central");
    if (d.empty()) return false;  // ε is not indecomposable by convention
    DivisorSet L = left_divisor_set(m, d);
    for (const Word& u : L.divisors) {
        if (u.empty() || u.size() >= d.size()) continue;
        if (!quasi_central_cert(m, u)) continue;
        for (const Word& v : left_quotients(m, u, d))
            if (!v.empty() && quasi_central_cert(m, v)) return false;
    }
    return true;
}

struct QzSearchHit {
    QuasiCentralCert cert;
    bool fundamental = false;
    bool minimal_fundamental = false;
    bool indecomposable = false;
};

/// All quasi-central classes of length 1..L with certificates and flags.
inline std::vector<QzSearchHit> search_quasi_central(const Monoid& m, std::size_t L) {
    std::vector<QzSearchHit> out;
    for (std::size_t n = 1; n <= L; ++n) {
        for (const EquivClass& c : m.all_classes(n)) {
            auto qc = quasi_central_cert(m, c.canonical);
            if (!qc) continue;
            QzSearchHit hit;
            hit.cert = *qc;
            if (auto f = fundamental_cert(m, c.canonical)) {
                hit.cert = *f;
                hit.fundamental = true;
                hit.minimal_fundamental = minimal_fundamental_check(m, c.canonical);
            }
            hit.indecomposable = indecomposable_qz_check(m, c.canonical);
            out.push_back(std::move(hit));
        }
    }
    return out;
}

/// Tameness probe: for each indecomposable quasi-central element up to L,
/// look for a minimal fundamental element up to fund_bound that it divides
/// from both sides. Exhausting the bound is inconclusive, not a refutation.
struct TamenessReport {
    std::size_t bound = 0, fund_bound = 0;
    struct Entry {
        Word indecomposable;
        std::optional<Word> witness;  // minimal fundamental element, when found
    };
    std::vector<Entry> entries;

    bool tame_at_bound() const {
        for (const auto& e : entries)
            if (!e.witness) return false;
        return true;
    }
};

inline TamenessReport tameness_probe(const Monoid& m, std::size_t L, std::size_t fund_bound) {
    TamenessReport report;
    report.bound = L;
    report.fund_bound = fund_bound;
    std::vector<QzSearchHit> hits = search_quasi_central(m, std::max(L, fund_bound));
    std::vector<Word> min_fund;
    for (const auto& hit : hits)
        if (hit.fundamental && hit.minimal_fundamental && hit.cert.element.size() <= fund_bound)
            min_fund.push_back(hit.cert.element);
    for (const auto& hit : hits) {
        if (!hit.indecomposable || hit.cert.element.size() > L) continue;
        TamenessReport::Entry e;
        e.indecomposable = hit.cert.element;
        for (const Word& f : min_fund)
            if (left_divides_bool(m, e.indecomposable, f) &&
                right_divides_bool(m, e.indecomposable, f)) {
                e.witness = f;
                break;
            }
        report.entries.push_back(std::move(e));
    }
    return report;
}

}  // namespace posmon
