#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "posmon/word.hpp"

namespace posmon {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Generator {
    std::uint8_t id = 0;
    std::string name;
};

/// Undirected homogeneous relation; both orientations apply when rewriting.
struct Relation {
    Word lhs;
    Word rhs;
};

/// A positive homogeneous presentation. Validated on construction:
/// relations are length-preserving, length-1 relations are merged into
/// generator aliases, and every word is over the declared alphabet.
class Presentation {
public:
    Presentation(std::vector<std::string> names, std::vector<std::pair<Word, Word>> rels,
                 std::string label = {})
        : name_(std::move(label)) {
        if (names.empty()) throw ParseError("empty alphabet");
        if (names.size() > Word::kMaxAlphabet)
            throw ParseError("alphabet exceeds the 16-generator engine limit");
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i].empty()) throw ParseError("empty generator name");
            for (std::size_t j = 0; j < i; ++j)
                if (names[j] == names[i])
                    throw ParseError("duplicate generator name: " + names[i]);
            alphabet_.push_back({static_cast<std::uint8_t>(i), names[i]});
        }
        alias_.resize(alphabet_.size());
        for (std::size_t i = 0; i < alias_.size(); ++i) alias_[i] = static_cast<std::uint8_t>(i);

        // Merge length-1 relations (x = y) into aliases first, then rewrite
        // the remaining relations through the alias map.
        for (auto& [l, r] : rels) {
            if (l.empty() || r.empty()) throw ParseError("relation with an empty side");
            if (l.size() != r.size()) {
                throw ParseError("non-homogeneous relation: " + format_word(l) + " = " +
                                 format_word(r));
            }
            if (l.size() == 1) merge_alias(l.letter(0), r.letter(0));
        }
        for (auto& [l, r] : rels) {
            if (l.size() == 1) continue;
            Word ln = apply_alias(l), rn = apply_alias(r);
            if (ln == rn) continue;
            bool dup = false;
            for (const auto& rel : relations_)
                if ((rel.lhs == ln && rel.rhs == rn) || (rel.lhs == rn && rel.rhs == ln))
                    dup = true;
            if (!dup) relations_.push_back({ln, rn});
        }
    }

    const std::vector<Generator>& alphabet() const { return alphabet_; }
    const std::vector<Relation>& relations() const { return relations_; }
    const std::string& name() const { return name_; }

    /// Representative id after alias normalization.
    std::uint8_t canonical_id(std::uint8_t id) const { return alias_[id]; }

    Word apply_alias(const Word& w) const {
        Word out;
        for (std::size_t i = 0; i < w.size(); ++i) out.push_back(alias_[w.letter(i)]);
        return out;
    }

    /// The atoms: alias representatives. For a validated homogeneous
    /// presentation these are exactly the non-dummy generators.
    std::vector<std::uint8_t> atoms() const {
        std::vector<std::uint8_t> out;
        for (const auto& g : alphabet_)
            if (alias_[g.id] == g.id) out.push_back(g.id);
        return out;
    }

    std::optional<std::uint8_t> find_generator(const std::string& name) const {
        for (const auto& g : alphabet_)
            if (g.name == name) return alias_[g.id];
        return std::nullopt;
    }

    /// Parse a whitespace-separated word; the single token `e` denotes the
    /// empty word unless a generator is literally named "e".
    Word parse_word(const std::string& text) const {
        std::istringstream in(text);
        std::vector<std::string> toks;
        std::string t;
        while (in >> t) toks.push_back(t);
        if (toks.size() == 1 && toks[0] == "e" && !find_generator("e")) return Word{};
        Word w;
        for (const auto& tok : toks) {
            auto id = find_generator(tok);
            if (!id) throw ParseError("unknown generator name: " + tok);
            if (w.size() >= Word::kMaxLen)
                throw ParseError("word exceeds the 30-letter engine limit");
            w.push_back(*id);
        }
        return w;
    }

    std::string format_word(const Word& w) const {
        if (w.empty()) return "e";
        std::string out;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (i) out += ' ';
            out += alphabet_[w.letter(i)].name;
        }
        return out;
    }

    /// Same alphabet, every relation side reversed. Right-divisibility here
    /// equals left-divisibility there.
    Presentation reversed() const {
        std::vector<std::string> names;
        for (const auto& g : alphabet_) names.push_back(g.name);
        std::vector<std::pair<Word, Word>> rels;
        for (const auto& r : relations_) rels.push_back({r.lhs.reversed(), r.rhs.reversed()});
        return Presentation(std::move(names), std::move(rels),
                            name_.empty() ? std::string{} : name_ + "-rev");
    }

    /// Letters whose count is the same on both sides of every relation;
    /// their counts are invariant across an equivalence class.
    std::vector<std::uint8_t> conserved_letters() const {
        std::vector<std::uint8_t> out;
        for (auto a : atoms()) {
            bool ok = true;
            for (const auto& r : relations_)
                if (r.lhs.count(a) != r.rhs.count(a)) ok = false;
            if (ok) out.push_back(a);
        }
        return out;
    }

    std::string to_text() const {
        std::string out;
        if (!name_.empty()) out += "name: " + name_ + "\n";
        out += "generators:";
        for (const auto& g : alphabet_)
            if (alias_[g.id] == g.id) out += " " + g.name;
        out += "\n";
        for (const auto& r : relations_)
            out += "relation: " + format_word(r.lhs) + " = " + format_word(r.rhs) + "\n";
        return out;
    }

private:
    void merge_alias(std::uint8_t a, std::uint8_t b) {
        std::uint8_t ra = root(a), rb = root(b);
        if (ra == rb) return;
        if (rb < ra) std::swap(ra, rb);
        alias_[rb] = ra;
        for (auto& x : alias_) x = root(x);
    }
    std::uint8_t root(std::uint8_t x) const {
        while (alias_[x] != x) x = alias_[x];
        return x;
    }

    std::vector<Generator> alphabet_;
    std::vector<std::uint8_t> alias_;
    std::vector<Relation> relations_;
    std::string name_;
};

/// Parse the presentation file format:
///   generators: a b c
///   relation: c b b = b b a
/// `#` starts a comment, blank lines are skipped, `name:` is optional.
inline Presentation parse_presentation(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> names;
    std::vector<std::pair<std::string, std::string>> raw_rels;
    std::string label;
    bool saw_generators = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        auto fail = [&](const std::string& msg) {
            throw ParseError("line " + std::to_string(lineno) + ": " + msg);
        };
        auto colon = line.find(':');
        if (colon == std::string::npos) fail("expected 'generators:', 'relation:' or 'name:'");
        std::string key = line.substr(b, colon - b);
        std::string rest = line.substr(colon + 1);
        if (key == "generators") {
            if (saw_generators) fail("duplicate generators line");
            saw_generators = true;
            std::istringstream gs(rest);
            std::string g;
            while (gs >> g) names.push_back(g);
            if (names.empty()) fail("empty alphabet");
        } else if (key == "relation") {
            auto eq = rest.find('=');
            if (eq == std::string::npos) fail("relation without '='");
            raw_rels.push_back({rest.substr(0, eq), rest.substr(eq + 1)});
        } else if (key == "name") {
            std::istringstream ns(rest);
            ns >> label;
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    if (!saw_generators) throw ParseError("missing generators line");

    // Two-phase: build a name-only presentation to parse relation words,
    // then construct the validated presentation.
    Presentation lookup(names, {});
    std::vector<std::pair<Word, Word>> rels;
    for (auto& [l, r] : raw_rels) rels.push_back({lookup.parse_word(l), lookup.parse_word(r)});
    return Presentation(std::move(names), std::move(rels), std::move(label));
}

}  // namespace posmon
