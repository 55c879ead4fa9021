#pragma once

#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "posmon/bii.hpp"
#include "posmon/gmn.hpp"

namespace posmon::cli {

/// Exit statuses: 0 decided-true/success, 1 decided-false,
/// 2 inconclusive-at-bound (including resource ceilings), 3 usage/error.
enum Status : int { kTrue = 0, kFalse = 1, kInconclusive = 2, kError = 3 };

struct Invocation {
    std::string builtin;  // "bii" | "gmn" | ""
    std::size_t m = 2, n = 2;
    std::string file;
    bool machine = false;
    std::size_t ceiling = Limits{}.class_member_ceiling;
    std::size_t jobs = 1;
    std::string cache_path;
};

namespace detail {

struct Session {
    Invocation inv;
    std::unique_ptr<BiiContext> bii;
    std::unique_ptr<GmnContext> gmn;
    std::unique_ptr<Monoid> file_monoid;
    std::ostream* out = nullptr;

    const Monoid& monoid() const {
        if (bii) return bii->monoid;
        if (gmn) return gmn->monoid;
        return *file_monoid;
    }
    const Presentation& pres() const { return monoid().pres(); }

    /// Default fundamental element for orbit-based subcommands.
    Word default_delta() const {
        if (bii) return bii->delta_k(1);
        if (gmn) return gmn->delta();
        throw ParseError("--delta is required for file presentations");
    }

    void kv(const std::string& key, const std::string& value) const {
        *out << key << ": " << value << "\n";
    }
    void dump_class(const EquivClass& c) const {
        kv("canonical", pres().format_word(c.canonical));
        kv("count", std::to_string(c.members.size()));
        *out << "class-begin\n";
        for (const Word& w : c.members) *out << pres().format_word(w) << "\n";
        *out << "class-end\n";
    }
    void print_cert(const QuasiCentralCert& cert) const {
        kv("element", pres().format_word(cert.element));
        kv("kind", cert.kind == QuasiCentralCert::Kind::Fundamental ? "fundamental"
                                                                    : "quasi-central");
        kv("sigma", cert.sigma.cycles(pres()));
        kv("ord", std::to_string(cert.sigma.order));
        for (const auto& [s, q] : cert.quotients)
            kv("delta_s[" + pres().alphabet()[s].name + "]", pres().format_word(q));
    }
    void print_conj(const ConjugacyResult& r, const Word& u, const Word& v) const {
        switch (r.verdict) {
            case ConjVerdict::Yes: kv("verdict", "yes"); break;
            case ConjVerdict::No: kv("verdict", "no"); break;
            case ConjVerdict::NotFoundInOrbit: kv("verdict", "inconclusive"); break;
        }
        kv("reason", r.reason);
        if (r.verdict == ConjVerdict::Yes) {
            std::string chain;
            for (const Word& d : r.chain) {
                if (!chain.empty()) chain += " . ";
                chain += pres().format_word(d);
            }
            kv("chain", chain.empty() ? "e" : chain);
            if (r.conjugator) {
                kv("conjugator", pres().format_word(*r.conjugator));
                kv("equation-lhs", pres().format_word(*r.conjugator) + " . " +
                                       pres().format_word(monoid().canonical(v)));
                kv("equation-rhs",
                   pres().format_word(u) + " . " + pres().format_word(*r.conjugator));
            }
        }
    }
    int conj_status(const ConjugacyResult& r) const {
        switch (r.verdict) {
            case ConjVerdict::Yes: return kTrue;
            case ConjVerdict::No: return kFalse;
            default: return kInconclusive;
        }
    }
};

inline Side parse_side(const std::string& s) {
    if (s == "L" || s == "l" || s == "left") return Side::Left;
    if (s == "R" || s == "r" || s == "right") return Side::Right;
    throw ParseError("side must be L or R");
}

}  // namespace detail

/// Run one invocation; output goes to `out`, diagnostics to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    detail::Session ses;
    ses.out = &out;
    int status = kTrue;

    CLI::App app{"decision procedures for positive homogeneously presented monoids"};
    app.set_help_all_flag("--help-all");
    Invocation& inv = ses.inv;
    app.add_option("--builtin", inv.builtin, "built-in presentation: bii or gmn")
        ->check(CLI::IsMember({"bii", "gmn"}));
    app.add_option("--m", inv.m, "t-family size for --builtin gmn");
    app.add_option("--n", inv.n, "u-family size for --builtin gmn");
    app.add_option("--file", inv.file, "presentation file");
    app.add_flag("--machine", inv.machine, "line-oriented machine output");
    app.add_option("--ceiling", inv.ceiling, "class member ceiling");
    app.add_option("--jobs", inv.jobs, "worker threads for exhaustive scans");
    app.add_option("--cache", inv.cache_path, "persisted class cache path");
    app.require_subcommand(1);

    std::string w1, w2, side_s = "L", delta_s;
    std::vector<std::string> multi;
    std::size_t bound = 6, bound2 = 6;
    bool assume_p = false;

    auto add_word = [&](CLI::App* c, std::string& slot, const char* name) {
        c->add_option(name, slot, "word (space-separated generator names, e for empty)")
            ->required();
    };

    CLI::App* c_eq = app.add_subcommand("eq", "word problem: are U and V equal");
    add_word(c_eq, w1, "U");
    add_word(c_eq, w2, "V");

    CLI::App* c_class = app.add_subcommand("class", "enumerate the equivalence class of W");
    add_word(c_class, w1, "W");

    CLI::App* c_div = app.add_subcommand("div", "does U divide V on the given side");
    c_div->add_option("--side", side_s, "L or R");
    add_word(c_div, w1, "U");
    add_word(c_div, w2, "V");

    CLI::App* c_mcm = app.add_subcommand("mcm", "bounded minimal common multiples of J...");
    c_mcm->add_option("--side", side_s, "L or R");
    c_mcm->add_option("--bound", bound, "max multiple length")->required();
    c_mcm->add_option("J", multi, "words")->required()->expected(-1);

    CLI::App* c_mcd = app.add_subcommand("mcd", "maximal common divisors of J...");
    c_mcd->add_option("--side", side_s, "L or R");
    c_mcd->add_option("J", multi, "words")->required()->expected(-1);

    CLI::App* c_qz = app.add_subcommand("qz", "quasi-central certificate for D");
    add_word(c_qz, w1, "D");
    CLI::App* c_fund = app.add_subcommand("fund", "fundamental certificate for D");
    add_word(c_fund, w1, "D");
    CLI::App* c_gar = app.add_subcommand("garside", "Garside check for D");
    add_word(c_gar, w1, "D");
    CLI::App* c_minf = app.add_subcommand("minfund", "minimal-fundamental check for D");
    add_word(c_minf, w1, "D");
    CLI::App* c_indec = app.add_subcommand("indec", "indecomposable quasi-central check for D");
    add_word(c_indec, w1, "D");

    CLI::App* c_sqz = app.add_subcommand("searchqz", "census of quasi-central elements");
    c_sqz->add_option("--bound", bound, "max element length")->required();

    CLI::App* c_tame = app.add_subcommand("tame", "tameness probe");
    c_tame->add_option("--bound", bound, "indecomposable search bound")->required();
    c_tame->add_option("--fund-bound", bound2, "minimal fundamental search bound")->required();

    CLI::App* c_lcm = app.add_subcommand("lcmfail", "search for an LCM-failure letter pair");
    c_lcm->add_option("--bound", bound, "max multiple length")->required();

    CLI::App* c_tm = app.add_subcommand("transmin", "bounded minimal transit elements of W");
    add_word(c_tm, w1, "W");
    c_tm->add_option("--bound", bound, "max transit length")->required();

    CLI::App* c_orbit = app.add_subcommand("orbit", "conjugacy orbit of W under divisors of Δ");
    add_word(c_orbit, w1, "W");
    c_orbit->add_option("--delta", delta_s, "fundamental element");

    CLI::App* c_conj = app.add_subcommand("conj", "conjugacy of U and V");
    add_word(c_conj, w1, "U");
    add_word(c_conj, w2, "V");
    c_conj->add_option("--delta", delta_s, "fundamental element");
    c_conj->add_flag("--assume-p", assume_p, "treat orbit misses as definitive no");

    CLI::App* c_pp = app.add_subcommand("propP", "property P probe for W");
    add_word(c_pp, w1, "W");
    c_pp->add_option("--delta", delta_s, "fundamental element");
    c_pp->add_option("--bound", bound, "transit scan bound")->required();

    CLI::App* c_geq = app.add_subcommand("group-eq", "word problem in the group of fractions");
    add_word(c_geq, w1, "G1");
    add_word(c_geq, w2, "G2");
    c_geq->add_option("--delta", delta_s, "fundamental element");

    CLI::App* c_gconj = app.add_subcommand("group-conj", "conjugacy in the group of fractions");
    add_word(c_gconj, w1, "G1");
    add_word(c_gconj, w2, "G2");
    c_gconj->add_option("--delta", delta_s, "fundamental element");
    c_gconj->add_flag("--assume-p", assume_p, "treat orbit misses as definitive no");

    CLI::App* c_bii = app.add_subcommand("bii", "B_ii-specific operations");
    c_bii->require_subcommand(1);
    CLI::App* b_nf = c_bii->add_subcommand("nf", "normal form");
    add_word(b_nf, w1, "W");
    CLI::App* b_tm = c_bii->add_subcommand("transmin", "minimal transit table");
    add_word(b_tm, w1, "W");
    CLI::App* b_conj = c_bii->add_subcommand("conj", "decide conjugacy");
    add_word(b_conj, w1, "U");
    add_word(b_conj, w2, "V");

    CLI::App* c_gmn = app.add_subcommand("gmn", "G+_{m,n}-specific operations");
    c_gmn->require_subcommand(1);
    CLI::App* g_nf = c_gmn->add_subcommand("nf", "alternating-block normal form");
    add_word(g_nf, w1, "W");
    CLI::App* g_st = c_gmn->add_subcommand("strata", "greedy Δ-power extraction");
    add_word(g_st, w1, "W");
    CLI::App* g_mcm = c_gmn->add_subcommand("mcm", "mcm_r({x,w}) in closed form");
    add_word(g_mcm, w1, "X");
    add_word(g_mcm, w2, "W");
    g_mcm->add_option("--bound", bound, "instantiation bound")->required();
    CLI::App* g_pp = c_gmn->add_subcommand("propP", "property P case analysis");
    add_word(g_pp, w1, "W");
    CLI::App* g_conj = c_gmn->add_subcommand("conj", "decide conjugacy");
    add_word(g_conj, w1, "U");
    add_word(g_conj, w2, "V");
    CLI::App* g_exp = c_gmn->add_subcommand("export", "presentation in file format");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return kTrue;
        }
        err << "error: " << e.what() << "\n";
        return kError;
    }

    try {
        Limits limits;
        limits.class_member_ceiling = inv.ceiling;
        bool wants_bii = c_bii->parsed(), wants_gmn = c_gmn->parsed();
        if (inv.builtin == "bii" || (wants_bii && inv.builtin.empty() && inv.file.empty()))
            ses.bii = std::make_unique<BiiContext>(limits);
        else if (inv.builtin == "gmn" || (wants_gmn && inv.builtin.empty() && inv.file.empty()))
            ses.gmn = std::make_unique<GmnContext>(inv.m, inv.n, limits);
        else if (!inv.file.empty()) {
            std::ifstream f(inv.file);
            if (!f) throw ParseError("cannot open presentation file: " + inv.file);
            std::stringstream buf;
            buf << f.rdbuf();
            ses.file_monoid = std::make_unique<Monoid>(parse_presentation(buf.str()), limits);
        } else {
            throw ParseError("no presentation: use --builtin or --file");
        }
        if (wants_bii && !ses.bii) throw ParseError("bii subcommands need --builtin bii");
        if (wants_gmn && !ses.gmn) throw ParseError("gmn subcommands need --builtin gmn");

        const Monoid& m = ses.monoid();
        const Presentation& p = ses.pres();
        if (!inv.cache_path.empty()) {
            std::ifstream f(inv.cache_path);
            if (f) m.load_cache(f);
        }
        auto word = [&](const std::string& s) { return p.parse_word(s); };
        auto delta_or_default = [&] {
            return delta_s.empty() ? ses.default_delta() : word(delta_s);
        };

        if (c_eq->parsed()) {
            bool equal = m.words_equal(word(w1), word(w2));
            ses.kv("equal", equal ? "true" : "false");
            status = equal ? kTrue : kFalse;
        } else if (c_class->parsed()) {
            ses.dump_class(m.enumerate_class(word(w1)));
        } else if (c_div->parsed()) {
            Side side = detail::parse_side(side_s);
            auto q = side == Side::Left ? left_divides(m, word(w1), word(w2))
                                        : right_divides(m, word(w1), word(w2));
            ses.kv("divides", q ? "true" : "false");
            if (q) ses.kv("quotient", p.format_word(*q));
            status = q ? kTrue : kFalse;
        } else if (c_mcm->parsed()) {
            std::vector<Word> J;
            for (const auto& s : multi) J.push_back(word(s));
            auto res = mcm_bounded(m, J, detail::parse_side(side_s) == Side::Left ? Side::Left
                                                                                  : Side::Right,
                                   bound);
            ses.kv("side", side_name(res.side));
            ses.kv("bound", std::to_string(res.bound));
            ses.kv("minimal-count", std::to_string(res.minimal.size()));
            for (const Word& w : res.minimal) ses.kv("multiple", p.format_word(w));
        } else if (c_mcd->parsed()) {
            std::vector<Word> J;
            for (const auto& s : multi) J.push_back(word(s));
            auto res = mcd(m, J, detail::parse_side(side_s));
            ses.kv("maximal-count", std::to_string(res.size()));
            for (const Word& w : res) ses.kv("divisor", p.format_word(w));
        } else if (c_qz->parsed()) {
            auto cert = quasi_central_cert(m, word(w1));
            ses.kv("quasi-central", cert ? "true" : "false");
            if (cert) ses.print_cert(*cert);
            status = cert ? kTrue : kFalse;
        } else if (c_fund->parsed()) {
            auto cert = fundamental_cert(m, word(w1));
            ses.kv("fundamental", cert ? "true" : "false");
            if (cert) ses.print_cert(*cert);
            status = cert ? kTrue : kFalse;
        } else if (c_gar->parsed()) {
            bool ok = garside_check(m, word(w1));
            ses.kv("garside", ok ? "true" : "false");
            status = ok ? kTrue : kFalse;
        } else if (c_minf->parsed()) {
            bool ok = minimal_fundamental_check(m, word(w1));
            ses.kv("minimal-fundamental", ok ? "true" : "false");
            status = ok ? kTrue : kFalse;
        } else if (c_indec->parsed()) {
            bool ok = indecomposable_qz_check(m, word(w1));
            ses.kv("indecomposable", ok ? "true" : "false");
            status = ok ? kTrue : kFalse;
        } else if (c_sqz->parsed()) {
            auto hits = search_quasi_central(m, bound);
            ses.kv("count", std::to_string(hits.size()));
            for (const auto& h : hits) {
                ses.print_cert(h.cert);
                ses.kv("fundamental", h.fundamental ? "true" : "false");
                ses.kv("minimal-fundamental", h.minimal_fundamental ? "true" : "false");
                ses.kv("indecomposable", h.indecomposable ? "true" : "false");
            }
        } else if (c_tame->parsed()) {
            auto rep = tameness_probe(m, bound, bound2);
            ses.kv("indecomposable-count", std::to_string(rep.entries.size()));
            for (const auto& e : rep.entries) {
                ses.kv("indecomposable", p.format_word(e.indecomposable));
                ses.kv("witness", e.witness ? p.format_word(*e.witness) : "none-at-bound");
            }
            status = rep.tame_at_bound() ? kTrue : kInconclusive;
        } else if (c_lcm->parsed()) {
            auto wit = lcm_failure_witness(m, bound);
            ses.kv("found", wit ? "true" : "false");
            if (wit) {
                ses.kv("pair", p.alphabet()[wit->x].name + " " + p.alphabet()[wit->y].name);
                ses.kv("multiple", p.format_word(wit->multiple1));
                ses.kv("multiple", p.format_word(wit->multiple2));
                status = kTrue;
            } else {
                status = kInconclusive;
            }
        } else if (c_tm->parsed()) {
            auto tm = trans_min_bounded(m, word(w1), bound, inv.jobs);
            ses.kv("bound", std::to_string(bound));
            ses.kv("count", std::to_string(tm.size()));
            for (const Word& a : tm) ses.kv("transit", p.format_word(a));
        } else if (c_orbit->parsed()) {
            auto orbit = orbit_closure(m, word(w1), delta_or_default());
            ses.kv("seed", p.format_word(orbit.seed));
            ses.kv("delta", p.format_word(orbit.delta));
            ses.kv("stabilized-at", std::to_string(*orbit.stabilized_at));
            ses.kv("size", std::to_string(orbit.final_set().size()));
            for (const Word& w : orbit.final_set()) ses.kv("member", p.format_word(w));
        } else if (c_conj->parsed()) {
            auto r = are_conjugate(m, word(w1), word(w2), delta_or_default(), assume_p);
            ses.print_conj(r, m.canonical(word(w1)), m.canonical(word(w2)));
            status = ses.conj_status(r);
        } else if (c_pp->parsed()) {
            auto v = property_P_probe(m, word(w1), delta_or_default(), bound);
            ses.kv("holds-at-bound", v.holds_at_bound ? "true" : "false");
            if (v.counterexample) ses.kv("counterexample", p.format_word(*v.counterexample));
            status = v.holds_at_bound ? kTrue : kFalse;
        } else if (c_geq->parsed() || c_gconj->parsed()) {
            Word d = delta_or_default();
            auto cert = fundamental_cert(m, d);
            if (!cert) throw ParseError("--delta is not a fundamental element");
            GroupWord g1 = parse_group_word(p, w1), g2 = parse_group_word(p, w2);
            if (c_geq->parsed()) {
                bool equal = group_equal(m, g1, g2, *cert);
                ses.kv("equal", equal ? "true" : "false");
                status = equal ? kTrue : kFalse;
            } else {
                auto r = group_conjugate(m, g1, g2, *cert, assume_p || ses.gmn != nullptr);
                GroupNormalization n1 = group_normalize(m, g1, *cert);
                GroupNormalization n2 = group_normalize(m, g2, *cert);
                Word lambda = central_power(m, *cert);
                ses.print_conj(r, m.canonical(lambda.pow(n2.k) * n1.pos),
                               m.canonical(lambda.pow(n1.k) * n2.pos));
                status = ses.conj_status(r);
            }
        } else if (c_bii->parsed()) {
            BiiContext& ctx = *ses.bii;
            if (b_nf->parsed()) {
                auto nf = bii_normal_form(ctx, word(w1));
                ses.kv("k", std::to_string(nf.k));
                ses.kv("j", std::to_string(nf.j));
                ses.kv("p", std::to_string(nf.p));
                ses.kv("q", std::to_string(nf.q));
                if (nf.j >= 1) ses.kv("r", std::to_string(nf.r));
                ses.kv("normal-form", p.format_word(nf.reassemble(ctx)));
            } else if (b_tm->parsed()) {
                ses.kv("table", bii_trans_min_table(ctx, word(w1)).render(p));
            } else {
                auto r = bii_conjugate(ctx, word(w1), word(w2));
                ses.print_conj(r, m.canonical(word(w1)), m.canonical(word(w2)));
                status = ses.conj_status(r);
            }
        } else if (c_gmn->parsed()) {
            GmnContext& ctx = *ses.gmn;
            if (g_nf->parsed()) {
                auto nf = gmn_normal_form(ctx, word(w1));
                ses.kv("N", std::to_string(nf.N()));
                for (std::size_t i = 0; i < nf.blocks.size(); ++i) {
                    ses.kv("t-block[" + std::to_string(i) + "]",
                           p.format_word(nf.blocks[i].first));
                    ses.kv("u-block[" + std::to_string(i) + "]",
                           p.format_word(nf.blocks[i].second));
                }
            } else if (g_st->parsed()) {
                auto st = gmn_strata(ctx, word(w1));
                ses.kv("k", std::to_string(st.k));
                ses.kv("lambda1", std::to_string(st.lambda1));
                ses.kv("lambda2", std::to_string(st.lambda2));
                ses.kv("mu1", std::to_string(st.mu1));
                ses.kv("mu2", std::to_string(st.mu2));
                ses.kv("remainder", p.format_word(st.remainder));
            } else if (g_mcm->parsed()) {
                Word x = word(w1);
                if (x.size() != 1) throw ParseError("gmn mcm: X must be a single letter");
                auto desc = gmn_mcm_letter(ctx, x.letter(0), word(w2));
                ses.kv("branch", desc.branch);
                ses.kv("pair", p.format_word(desc.x) + " , " + p.format_word(desc.base));
                if (desc.singleton) ses.kv("singleton", p.format_word(*desc.singleton));
                for (const Word& w : desc.instantiate(ctx, bound))
                    ses.kv("multiple", p.format_word(w));
            } else if (g_pp->parsed()) {
                auto rep = gmn_property_P(ctx, word(w1));
                ses.kv("case", rep.case_label);
                ses.kv("verified", rep.verified ? "true" : "false");
                for (const auto& wl : rep.letters) {
                    std::string line = p.alphabet()[wl.first_letter].name;
                    if (wl.in_Lw) line += " in-L(w)";
                    if (!wl.branch.empty()) line += " [" + wl.branch + "]";
                    for (const auto& c : wl.candidates)
                        if (c.is_transit && c.divides_delta)
                            line += " witness=" + p.format_word(c.element);
                    ses.kv("letter", line);
                }
                status = rep.verified ? kTrue : kFalse;
            } else if (g_conj->parsed()) {
                auto r = gmn_conjugate(ctx, word(w1), word(w2));
                ses.print_conj(r, m.canonical(word(w1)), m.canonical(word(w2)));
                status = ses.conj_status(r);
            } else if (g_exp->parsed()) {
                out << p.to_text();
            }
        }

        if (!inv.cache_path.empty()) {
            std::ofstream f(inv.cache_path, std::ios::trunc);
            if (f) m.save_cache(f);
        }
    } catch (const CeilingExceeded& e) {
        err << "inconclusive: " << e.what() << "\n";
        return kInconclusive;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kError;
    }
    return status;
}

inline int run_main(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.push_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace posmon::cli
