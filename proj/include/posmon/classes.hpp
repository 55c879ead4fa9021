#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <cstdint>
#include <istream>
#include <memory>
#include <mutex>
#include <ostream>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "posmon/presentation.hpp"
#include "posmon/word.hpp"

namespace posmon {

/// Thrown when a class enumeration or exhaustive scan outgrows its ceiling.
/// Signals an intractable input, never a wrong answer.
struct CeilingExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Limits {
    std::size_t class_member_ceiling = 5'000'000;
    std::size_t scan_word_ceiling = 400'000'000;  // words visited by one exhaustive scan
    std::size_t cache_max_entries = 8'000'000;
    std::size_t cache_class_insert_max = 250'000;  // larger classes cache only the query
};

namespace detail {

/// Open-addressing hash set of packed words. The all-ones pattern is never a
/// valid word (length byte 0xFF), so it serves as the empty slot.
class FlatWordSet {
public:
    FlatWordSet() { reset(1024); }

    bool insert(Word w) {
        if (count_ * 10 >= slots_.size() * 7) grow();
        std::size_t i = probe(w);
        if (slots_[i] != kEmpty) return false;
        slots_[i] = w.raw();
        ++count_;
        return true;
    }
    bool contains(Word w) const {
        return slots_[probe(w)] != kEmpty;
    }
    std::size_t size() const { return count_; }
    void clear() { reset(1024); }
    /// Empty the set without releasing its table.
    void clear_keep_capacity() {
        std::fill(slots_.begin(), slots_.end(), kEmpty);
        count_ = 0;
    }

private:
    static constexpr Word::u128 kEmpty = ~Word::u128(0);

    std::size_t probe(Word w) const {
        std::size_t mask = slots_.size() - 1;
        std::size_t i = w.hash() & mask;
        while (slots_[i] != kEmpty && slots_[i] != w.raw()) i = (i + 1) & mask;
        return i;
    }
    void grow() {
        std::vector<Word::u128> old = std::move(slots_);
        reset(old.size() * 2);
        for (auto b : old)
            if (b != kEmpty) {
                std::size_t i = probe(Word::from_raw(b));
                slots_[i] = b;
                ++count_;
            }
    }
    void reset(std::size_t n) {
        slots_.assign(n, kEmpty);
        count_ = 0;
    }

    std::vector<Word::u128> slots_;
    std::size_t count_ = 0;
};

/// Open-addressing word-to-word map used for the canonical-form cache.
class FlatWordMap {
public:
    FlatWordMap() { reset(1024); }

    void insert(Word k, Word v) {
        if (count_ * 10 >= keys_.size() * 7) grow();
        std::size_t i = probe(k);
        if (keys_[i] == kEmpty) {
            keys_[i] = k.raw();
            vals_[i] = v.raw();
            ++count_;
        }
    }
    std::optional<Word> find(Word k) const {
        std::size_t i = probe(k);
        if (keys_[i] == kEmpty) return std::nullopt;
        return Word::from_raw(vals_[i]);
    }
    std::size_t size() const { return count_; }
    void clear() { reset(1024); }

    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t i = 0; i < keys_.size(); ++i)
            if (keys_[i] != kEmpty) f(Word::from_raw(keys_[i]), Word::from_raw(vals_[i]));
    }

private:
    static constexpr Word::u128 kEmpty = ~Word::u128(0);

    std::size_t probe(Word k) const {
        std::size_t mask = keys_.size() - 1;
        std::size_t i = k.hash() & mask;
        while (keys_[i] != kEmpty && keys_[i] != k.raw()) i = (i + 1) & mask;
        return i;
    }
    void grow() {
        std::vector<Word::u128> ok = std::move(keys_), ov = std::move(vals_);
        reset(ok.size() * 2);
        for (std::size_t i = 0; i < ok.size(); ++i)
            if (ok[i] != kEmpty) {
                std::size_t j = probe(Word::from_raw(ok[i]));
                keys_[j] = ok[i];
                vals_[j] = ov[i];
                ++count_;
            }
    }
    void reset(std::size_t n) {
        keys_.assign(n, kEmpty);
        vals_.assign(n, kEmpty);
        count_ = 0;
    }

    std::vector<Word::u128> keys_, vals_;
    std::size_t count_ = 0;
};

}  // namespace detail

/// The finite set of words equivalent to a seed, with its canonical
/// (lexicographically least) representative. Members are sorted ascending.
struct EquivClass {
    Word canonical;
    std::vector<Word> members;

    bool contains(const Word& w) const {
        return std::binary_search(members.begin(), members.end(), w);
    }
};

/// A validated presentation bundled with the rewriting engine and a
/// canonical-form cache. Immutable apart from the cache, which tolerates
/// concurrent reads with exclusive writes.
class Monoid {
public:
    explicit Monoid(Presentation pres, Limits limits = {})
        : pres_(std::move(pres)), limits_(limits), conserved_(pres_.conserved_letters()) {
        for (const auto& r : pres_.relations()) {
            oriented_.push_back({r.lhs, r.rhs});
            oriented_.push_back({r.rhs, r.lhs});
        }
        // bucket oriented sides by first letter so rewriting scans touch
        // only the relations that can match at a position
        for (const auto& [from, to] : oriented_)
            buckets_[from.letter(0)].push_back({from, to});
    }

    const Presentation& pres() const { return pres_; }
    const Limits& limits() const { return limits_; }
    Limits& limits() { return limits_; }
    const std::vector<std::uint8_t>& conserved() const { return conserved_; }

    /// All words one elementary substitution away (either orientation, any
    /// position). Contains the input only if some substitution reproduces it.
    std::vector<Word> elementary_neighbors(const Word& w) const {
        std::vector<Word> out;
        for_each_neighbor(w, [&](Word v) {
            if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
        });
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Breadth-first closure under elementary substitutions.
    EquivClass enumerate_class(const Word& w) const {
        EquivClass c;
        c.members = closure(w);
        std::sort(c.members.begin(), c.members.end());
        c.canonical = c.members.front();
        cache_class(c);
        return c;
    }

    Word canonical(const Word& w) const {
        {
            std::shared_lock lk(cache_mutex_);
            if (auto hit = cache_.find(w)) return *hit;
        }
        std::vector<Word> members = closure(w);
        Word least = members.front();
        for (const Word& m : members)
            if (m < least) least = m;
        cache_members(members, least, w);
        return least;
    }

    bool words_equal(const Word& u, const Word& v) const {
        if (u.size() != v.size()) return false;
        if (u == v) return true;
        return canonical(u) == canonical(v);
    }

    std::size_t class_size(const Word& w) const { return closure(w).size(); }

    /// Partition of all |alphabet|^n words of length n into classes, ordered
    /// by canonical representative.
    std::vector<EquivClass> all_classes(std::size_t n) const {
        std::vector<EquivClass> out;
        detail::FlatWordSet seen;
        std::size_t visited = 0;
        for_each_word(n, [&](const Word& w) {
            if (++visited > limits_.scan_word_ceiling)
                throw CeilingExceeded("all_classes: scan ceiling at length " + std::to_string(n));
            if (seen.contains(w)) return;
            EquivClass c;
            c.members = closure(w);
            std::sort(c.members.begin(), c.members.end());
            c.canonical = c.members.front();
            for (const Word& m : c.members) seen.insert(m);
            cache_class(c);
            out.push_back(std::move(c));
        });
        return out;
    }

    /// Iterate all words of length n over the atom alphabet, lexicographically.
    template <typename F>
    void for_each_word(std::size_t n, F&& f) const {
        std::vector<std::uint8_t> atoms = pres_.atoms();
        std::vector<std::size_t> digits(n, 0);
        if (n == 0) {
            f(Word{});
            return;
        }
        for (;;) {
            Word w;
            for (std::size_t i = 0; i < n; ++i) w.push_back(atoms[digits[i]]);
            f(w);
            std::size_t i = n;
            while (i > 0) {
                if (++digits[i - 1] < atoms.size()) break;
                digits[i - 1] = 0;
                --i;
            }
            if (i == 0) return;
        }
    }

    /// Number of words of length n, saturating at the scan ceiling.
    std::uint64_t word_count(std::size_t n) const {
        std::uint64_t total = 1, base = pres_.atoms().size();
        for (std::size_t i = 0; i < n; ++i) {
            if (total > limits_.scan_word_ceiling) return total;
            total *= base;
        }
        return total;
    }

    /// The index-th word of length n in lexicographic order.
    Word word_at(std::size_t n, std::uint64_t index) const {
        const std::vector<std::uint8_t> atoms = pres_.atoms();
        Word w;
        std::uint64_t base = atoms.size();
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t place = 1;
            for (std::size_t k = i + 1; k < n; ++k) place *= base;
            w.push_back(atoms[(index / place) % base]);
        }
        return w;
    }

    /// Pre-enumerate every class of each length up to n into the cache.
    void warm(std::size_t n) const {
        for (std::size_t k = 0; k <= n; ++k) (void)all_classes(k);
    }

    /// Lazily built twin over the reversed presentation.
    const Monoid& reversed() const {
        std::call_once(rev_once_, [this] {
            rev_ = std::unique_ptr<Monoid>(new Monoid(pres_.reversed(), limits_));
        });
        return *rev_;
    }

    void clear_cache() const {
        std::unique_lock lk(cache_mutex_);
        cache_.clear();
    }
    std::size_t cache_size() const {
        std::shared_lock lk(cache_mutex_);
        return cache_.size();
    }

    /// Persist the canonical-form cache as class blocks.
    void save_cache(std::ostream& os) const {
        std::shared_lock lk(cache_mutex_);
        os << "presentation-hash: " << std::hash<std::string>{}(pres_.to_text()) << "\n";
        std::vector<std::pair<Word, Word>> entries;
        cache_.for_each([&](Word k, Word v) { entries.push_back({v, k}); });
        std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first < b.first;
            return a.second < b.second;
        });
        Word cur;
        bool open = false;
        for (const auto& [canon, member] : entries) {
            if (!open || canon != cur) {
                if (open) os << "class-end\n";
                os << "class-begin\n";
                cur = canon;
                open = true;
            }
            os << pres_.format_word(member) << "\n";
        }
        if (open) os << "class-end\n";
    }

    /// Load a persisted cache; silently ignores files written for a
    /// different presentation.
    void load_cache(std::istream& is) const {
        std::string line;
        if (!std::getline(is, line)) return;
        std::string expect =
            "presentation-hash: " + std::to_string(std::hash<std::string>{}(pres_.to_text()));
        if (line != expect) return;
        std::vector<Word> block;
        std::unique_lock lk(cache_mutex_);
        while (std::getline(is, line)) {
            if (line == "class-begin") {
                block.clear();
            } else if (line == "class-end") {
                if (block.empty()) continue;
                Word least = block.front();
                for (const Word& w : block)
                    if (w < least) least = w;
                for (const Word& w : block)
                    if (cache_.size() < limits_.cache_max_entries) cache_.insert(w, least);
            } else if (!line.empty()) {
                block.push_back(pres_.parse_word(line));
            }
        }
    }

public:
    /// Stream the class of w during its breadth-first enumeration; stop
    /// early when visit returns true. On a full (unstopped) enumeration the
    /// class is recorded in the cache. Returns whether visiting stopped.
    template <typename F>
    bool scan_class(const Word& w, F&& visit) const {
        ScratchLease scratch(scratch_pool());
        detail::FlatWordSet& visited = scratch.set();
        std::vector<Word> queue;
        visited.insert(w);
        queue.push_back(w);
        if (visit(w)) return true;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            Word cur = queue[head];
            bool stopped = false;
            for_each_neighbor(cur, [&](Word v) {
                if (stopped) return;
                if (visited.insert(v)) {
                    if (visited.size() > limits_.class_member_ceiling)
                        throw CeilingExceeded("class member ceiling exceeded");
                    queue.push_back(v);
                    if (visit(v)) stopped = true;
                }
            });
            if (stopped) return true;
        }
        Word least = queue.front();
        for (const Word& m : queue)
            if (m < least) least = m;
        cache_members(queue, least, w);
        return false;
    }

private:
    /// Thread-local pool of visited-set scratch buffers; nested scans (a
    /// canonical() inside a scan_class callback) each lease their own.
    struct ScratchLease {
        explicit ScratchLease(std::vector<std::unique_ptr<detail::FlatWordSet>>& pool)
            : pool_(pool) {
            if (pool_.empty()) {
                set_ = std::make_unique<detail::FlatWordSet>();
            } else {
                set_ = std::move(pool_.back());
                pool_.pop_back();
                set_->clear_keep_capacity();
            }
        }
        ~ScratchLease() { pool_.push_back(std::move(set_)); }
        detail::FlatWordSet& set() { return *set_; }

        std::vector<std::unique_ptr<detail::FlatWordSet>>& pool_;
        std::unique_ptr<detail::FlatWordSet> set_;
    };

    static std::vector<std::unique_ptr<detail::FlatWordSet>>& scratch_pool() {
        thread_local std::vector<std::unique_ptr<detail::FlatWordSet>> pool;
        return pool;
    }

    template <typename F>
    void for_each_neighbor(const Word& w, F&& f) const {
        std::size_t n = w.size();
        for (std::size_t pos = 0; pos < n; ++pos) {
            for (const auto& [from, to] : buckets_[w.letter(pos)]) {
                std::size_t ls = from.size();
                if (pos + ls > n) continue;
                if (w.matches_at(from, pos)) f(w.splice(pos, ls, to));
            }
        }
    }

    std::vector<Word> closure(const Word& w) const {
        ScratchLease scratch(scratch_pool());
        detail::FlatWordSet& visited = scratch.set();
        std::vector<Word> queue;
        visited.insert(w);
        queue.push_back(w);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            Word cur = queue[head];
            for_each_neighbor(cur, [&](Word v) {
                if (visited.insert(v)) {
                    if (visited.size() > limits_.class_member_ceiling)
                        throw CeilingExceeded("class member ceiling exceeded");
                    queue.push_back(v);
                }
            });
        }
        return queue;
    }

    void cache_class(const EquivClass& c) const {
        cache_members(c.members, c.canonical, c.canonical);
    }
    void cache_members(const std::vector<Word>& members, Word least, Word queried) const {
        std::unique_lock lk(cache_mutex_);
        if (members.size() <= limits_.cache_class_insert_max) {
            for (const Word& m : members) {
                if (cache_.size() >= limits_.cache_max_entries) break;
                cache_.insert(m, least);
            }
        } else if (cache_.size() < limits_.cache_max_entries) {
            cache_.insert(queried, least);
        }
    }

    Presentation pres_;
    Limits limits_;
    std::vector<std::uint8_t> conserved_;
    std::vector<std::pair<Word, Word>> oriented_;
    std::array<std::vector<std::pair<Word, Word>>, Word::kMaxAlphabet> buckets_;
    mutable detail::FlatWordMap cache_;
    mutable std::shared_mutex cache_mutex_;
    mutable std::unique_ptr<Monoid> rev_;
    mutable std::once_flag rev_once_;
};

inline bool words_equal(const Monoid& m, const Word& u, const Word& v) {
    return m.words_equal(u, v);
}

}  // namespace posmon
