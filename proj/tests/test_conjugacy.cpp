#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "posmon/bii.hpp"
#include "posmon/conjugacy.hpp"
#include "posmon/gmn.hpp"

using namespace posmon;

struct Fixtures {
    BiiContext bii;
    GmnContext g22{2, 2};
};
static Fixtures& fx() {
    static Fixtures f;
    return f;
}

TEST_CASE("conjugacy oracle contains the seed and known conjugates") {
    const Monoid& m = fx().bii.monoid;
    const Presentation& p = m.pres();
    auto set = conj_oracle_bounded(m, p.parse_word("a"), 4);
    CHECK(std::binary_search(set.begin(), set.end(), p.parse_word("a")));
    // b·c ≐ a·b, so c is a conjugate of a via A = b
    CHECK(std::binary_search(set.begin(), set.end(), p.parse_word("c")));
    CHECK(set.size() == 2);
}

TEST_CASE("orbit closure: monotone levels, stabilization, certificates") {
    const Monoid& m = fx().bii.monoid;
    const Presentation& p = m.pres();
    Word delta = fx().bii.delta_k(1);

    OrbitState orbit = orbit_closure(m, p.parse_word("a"), delta);
    CHECK(orbit.final_set() ==
          std::vector<Word>{p.parse_word("a"), p.parse_word("c")});
    REQUIRE(orbit.stabilized_at.has_value());
    for (std::size_t i = 1; i < orbit.levels.size(); ++i) {
        // monotone nesting
        CHECK(std::includes(orbit.levels[i].begin(), orbit.levels[i].end(),
                            orbit.levels[i - 1].begin(), orbit.levels[i - 1].end()));
    }
    // stabilization index bounded by the number of classes of this length
    CHECK(*orbit.stabilized_at <= m.all_classes(1).size());

    // a central-like seed stays alone: orbit of bbb is {bbb}
    OrbitState fixed = orbit_closure(m, fx().bii.delta0(), delta);
    CHECK(fixed.final_set() == std::vector<Word>{fx().bii.delta0()});

    // certificate chains replay
    auto chain = orbit.chain_to(p.parse_word("c"));
    REQUIRE(chain.has_value());
    Word a;
    for (const Word& d : *chain) a = a * d;
    CHECK(m.words_equal(a * p.parse_word("c"), p.parse_word("a") * a));
}

TEST_CASE("orbit_step is a superset of its input") {
    const Monoid& m = fx().g22.monoid;
    const Presentation& p = m.pres();
    std::vector<Word> start{m.canonical(p.parse_word("s t1"))};
    auto next = orbit_step(m, start, fx().g22.delta());
    CHECK(std::includes(next.begin(), next.end(), start.begin(), start.end()));
    CHECK(std::binary_search(next.begin(), next.end(), m.canonical(p.parse_word("t1 s"))));
}

TEST_CASE("soundness: orbit members appear in the bounded oracle") {
    const Monoid& m = fx().g22.monoid;
    for (std::size_t n = 1; n <= 2; ++n)
        for (const auto& c : m.all_classes(n)) {
            OrbitState orbit = orbit_closure(m, c.canonical, fx().g22.delta());
            auto oracle = conj_oracle_bounded(m, c.canonical, 6);
            // property P holds for these seeds, so orbit and oracle agree
            CHECK(orbit.final_set() == oracle);
        }
}

TEST_CASE("transit elements and bounded minimality") {
    const Monoid& m = fx().bii.monoid;
    const Presentation& p = m.pres();

    auto tr = transit_elements_bounded(m, p.parse_word("c"), 3);
    // a, c, bb are transits of c; b is not (class(cb) = {cb})
    auto has = [&](const char* s) {
        Word w = m.canonical(p.parse_word(s));
        return std::find(tr.begin(), tr.end(), w) != tr.end();
    };
    CHECK(has("a"));
    CHECK(has("c"));
    CHECK(has("b b"));
    CHECK_FALSE(has("b"));

    auto tm = trans_min_bounded(m, p.parse_word("c"), 4);
    CHECK(tm == std::vector<Word>{p.parse_word("a"), p.parse_word("c"), p.parse_word("b b")});

    // a central element is a transit of everything
    Word lambda = fx().bii.delta0();
    auto tr2 = transit_elements_bounded(m, p.parse_word("a c"), 3);
    CHECK(std::find(tr2.begin(), tr2.end(), m.canonical(lambda)) != tr2.end());
}

TEST_CASE("property P probe") {
    const Monoid& bm = fx().bii.monoid;
    const Presentation& bp = bm.pres();
    // B_ii, w in the bbc^i b row with Δ = Δ_1: the family instance at i=0
    // is bbb, which divides Δ_0 but no Δ_k with k >= 1, so the probe finds
    // a genuine counterexample.
    Word w = bp.parse_word("a c");
    auto verdict = property_P_probe(bm, w, fx().bii.delta_k(1), 5);
    CHECK_FALSE(verdict.holds_at_bound);
    REQUIRE(verdict.counterexample.has_value());
    CHECK(*verdict.counterexample == fx().bii.delta0());

    // G_{2,2}: P holds for every small w
    const Monoid& gm = fx().g22.monoid;
    for (std::size_t n = 1; n <= 2; ++n)
        for (const auto& c : gm.all_classes(n))
            CHECK(property_P_probe(gm, c.canonical, fx().g22.delta(), 4).holds_at_bound);
}

TEST_CASE("are_conjugate verdicts") {
    const Monoid& m = fx().g22.monoid;
    const Presentation& p = m.pres();
    Word delta = fx().g22.delta();

    auto eq = are_conjugate(m, p.parse_word("s t1"), p.parse_word("s t1"), delta);
    CHECK(eq.verdict == ConjVerdict::Yes);

    auto yes = are_conjugate(m, p.parse_word("s t1"), p.parse_word("t1 s"), delta);
    CHECK(yes.verdict == ConjVerdict::Yes);
    REQUIRE(yes.conjugator.has_value());
    CHECK(m.words_equal(*yes.conjugator * m.canonical(p.parse_word("t1 s")),
                        p.parse_word("s t1") * *yes.conjugator));

    // different conserved-letter counts: definitive no without property P
    auto no = are_conjugate(m, p.parse_word("t1"), p.parse_word("u1"), delta);
    CHECK(no.verdict == ConjVerdict::No);

    // same counts, not conjugate: inconclusive unless P is certified
    auto maybe = are_conjugate(m, p.parse_word("s t1 t2"), p.parse_word("s t2 t1"), delta, false);
    CHECK(maybe.verdict == ConjVerdict::NotFoundInOrbit);
    auto firm = are_conjugate(m, p.parse_word("s t1 t2"), p.parse_word("s t2 t1"), delta, true);
    CHECK(firm.verdict == ConjVerdict::No);
    // and t1t2 ~ t2t1 genuinely holds, witnessed through the s-rotations
    auto tw = are_conjugate(m, p.parse_word("t1 t2"), p.parse_word("t2 t1"), delta, false);
    CHECK(tw.verdict == ConjVerdict::Yes);

    auto diff = are_conjugate(m, p.parse_word("t1"), p.parse_word("t1 t1"), delta);
    CHECK(diff.verdict == ConjVerdict::No);  // lengths differ
}

TEST_CASE("conjugation preserves conserved letter counts on yes verdicts") {
    const Monoid& m = fx().g22.monoid;
    for (std::size_t n = 1; n <= 3; ++n)
        for (const auto& c : m.all_classes(n)) {
            OrbitState orbit = orbit_closure(m, c.canonical, fx().g22.delta());
            for (const Word& v : orbit.final_set())
                CHECK(v.letter_counts() == c.canonical.letter_counts());
        }
}

TEST_CASE("monoid conjugacy is symmetric where P holds") {
    const Monoid& m = fx().g22.monoid;
    Word delta = fx().g22.delta();
    for (std::size_t n = 1; n <= 2; ++n) {
        auto classes = m.all_classes(n);
        for (const auto& cu : classes)
            for (const auto& cv : classes) {
                bool uv = are_conjugate(m, cu.canonical, cv.canonical, delta, true).verdict ==
                          ConjVerdict::Yes;
                bool vu = are_conjugate(m, cv.canonical, cu.canonical, delta, true).verdict ==
                          ConjVerdict::Yes;
                CHECK(uv == vu);
            }
    }
}

TEST_CASE("transit family templates instantiate correctly") {
    const Presentation& p = fx().bii.monoid.pres();
    TransitFamily fam;
    fam.finite = {p.parse_word("a")};
    TransitFamily::Template t;
    t.blocks = {{p.parse_word("b b"), false}, {p.parse_word("c"), true}, {p.parse_word("b"), false}};
    t.i_min = 0;
    fam.templates.push_back(t);

    auto upto7 = fam.instantiate_up_to_length(7);
    // bb c^i b for i = 0..4 has lengths 3..7
    CHECK(upto7.size() == 6);
    CHECK(std::find(upto7.begin(), upto7.end(), p.parse_word("b b c c b")) != upto7.end());
    auto upto_i2 = fam.instantiate_parameter_up_to(2);
    CHECK(upto_i2.size() == 4);
    CHECK(fam.render(p) == "{a} u {b b c^i b [i>=0]}");
}

TEST_CASE("group words: parsing, normalization, equality") {
    const GmnContext& g = fx().g22;
    const Monoid& m = g.monoid;
    const Presentation& p = m.pres();
    auto fund = fundamental_cert(m, g.delta());
    REQUIRE(fund.has_value());

    GroupWord pos = parse_group_word(p, "s t1 t2");
    auto n0 = group_normalize(m, pos, *fund);
    CHECK(n0.k == 0);
    CHECK(n0.pos == p.parse_word("s t1 t2"));

    GroupWord ss = parse_group_word(p, "s s^-1");
    auto n1 = group_normalize(m, ss, *fund);
    CHECK(n1.k == 1);
    CHECK(group_equal(m, ss, parse_group_word(p, "e"), *fund));

    CHECK(group_equal(m, parse_group_word(p, "s t1 t2"), parse_group_word(p, "t1 t2 s"), *fund));
    CHECK_FALSE(group_equal(m, parse_group_word(p, "t1"), parse_group_word(p, "t2"), *fund));
    CHECK(format_group_word(p, parse_group_word(p, "s^-1 t1 s")) == "s^-1 t1 s");

    // B_ii: ab and ba are distinct in the group
    const BiiContext& bii = fx().bii;
    auto bf = fundamental_cert(bii.monoid, bii.delta_k(1));
    REQUIRE(bf.has_value());
    CHECK_FALSE(group_equal(bii.monoid, parse_group_word(bii.monoid.pres(), "a b"),
                            parse_group_word(bii.monoid.pres(), "b a"), *bf));
    // a^{-1} normalizes to (1, Δ_{1,a}·Δ_1^{ord-1}) with a·Δ_{1,a} ≐ Δ_1
    auto an = group_normalize(bii.monoid, parse_group_word(bii.monoid.pres(), "a^-1"), *bf);
    CHECK(an.k == 1);
    Word lam = central_power(bii.monoid, *bf);
    CHECK(bii.monoid.words_equal(bii.monoid.pres().parse_word("a") * an.pos, lam));
}

TEST_CASE("group conjugacy bridge") {
    const GmnContext& g = fx().g22;
    const Monoid& m = g.monoid;
    const Presentation& p = m.pres();
    auto fund = fundamental_cert(m, g.delta());

    auto self = group_conjugate(m, parse_group_word(p, "t1"), parse_group_word(p, "t1"), *fund);
    CHECK(self.verdict == ConjVerdict::Yes);

    auto twist = group_conjugate(m, parse_group_word(p, "s^-1 t1 s"),
                                 parse_group_word(p, "t1"), *fund);
    CHECK(twist.verdict == ConjVerdict::Yes);

    auto no = group_conjugate(m, parse_group_word(p, "t1"), parse_group_word(p, "u1"), *fund);
    CHECK(no.verdict == ConjVerdict::No);  // letter counts separate
}
