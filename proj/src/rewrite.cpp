//
// Copyright (c) 2026-present rodeo contributors
//
// Permission is hereby granted, free of charge, to any person obtaining a copy
// of this software and associated documentation files (the "Software"), to
// deal in the Software without restriction, including without limitation the
// rights to use, copy, modify, merge, publish, distribute, sublicense, and/or
// sell copies of the Software, and to permit persons to whom the Software is
// furnished to do so, subject to the following conditions:
//
// The above copyright notice and this permission notice shall be included in
// all copies or substantial portions of the Software.
//
// THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
// IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
// FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
// AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
// LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING
// FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER
// DEALINGS IN THE SOFTWARE.
//
#include "rodeo/rewrite.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <string_view>

#include "rodeo/ground.hpp"

namespace rodeo {

namespace {

constexpr std::string_view kC1 = "rw_c1_";
constexpr std::string_view kC1Bar = "rw_c1b_";
constexpr std::string_view kC2 = "rw_c2_";
constexpr std::string_view kPhi = "rw_phi_";
constexpr std::string_view kRuleChoice = "rw_rule_";

Atom renamed(std::string_view stem, const Atom& a) {
    Atom out;
    out.pred.reserve(stem.size() + a.pred.size());
    out.pred.append(stem);
    out.pred.append(a.pred);
    out.args = a.args;
    return out;
}

Atom indexed(const char* pred, std::size_t i) {
    return {pred, {Term::integer(static_cast<long long>(i))}};
}

Atom appended(std::string_view stem, const Atom& a, std::size_t v) {
    Atom out = renamed(stem, a);
    out.args.push_back(Term::integer(static_cast<long long>(v)));
    return out;
}

//! Strips a mangling stem; nullopt when the predicate does not carry it.
std::optional<Atom> stripped(std::string_view stem, const Atom& a) {
    if (a.pred.size() <= stem.size() || a.pred.compare(0, stem.size(), stem) != 0) {
        return std::nullopt;
    }
    return Atom{a.pred.substr(stem.size()), a.args};
}

//! Positive index payload of a one-argument flag atom, 0 when malformed.
std::size_t flagIndex(const Atom& a) {
    if (a.args.size() != 1 || a.args[0].kind != Term::Kind::Integer || a.args[0].value < 1) {
        return 0;
    }
    return static_cast<std::size_t>(a.args[0].value);
}

//! Shared input validation: basic mode, no weak constraints, singleton rule
//! heads, no atom using the reserved prefix anywhere in the pair.
void requireRewritable(const RuleObservationPair& pair, const char* what) {
    if (pair.mode != ObsMode::Basic) {
        throwError(Error::Kind::Input, std::string(what) + " requires a basic pair");
    }
    for (const Rule& r : pair.rules.rules()) {
        if (!r.weak && r.head.size() != 1) {
            throwError(Error::Kind::Input, std::string(what) +
                                               " requires singleton rule heads, got '" + r.str() +
                                               "'");
        }
    }
    constexpr std::string_view pfx = "rw_";
    auto check = [&](const Atom& a) {
        if (std::string_view(a.pred).substr(0, pfx.size()) == pfx) {
            throwError(Error::Kind::Input,
                       "atom '" + a.str() + "' uses the reserved predicate prefix 'rw_'");
        }
    };
    auto checkRule = [&](const Rule& r) {
        if (r.weak) {
            throwError(Error::Kind::Input,
                       std::string(what) + " rejects weak constraints in the rule component");
        }
        for (const Atom& h : r.head) check(h);
        for (const BodyLiteral& lit : r.body) {
            if (lit.isAtom()) check(lit.atom);
        }
    };
    for (const Rule& r : pair.rules.rules()) checkRule(r);
    for (const Rule& r : pair.observations) checkRule(r);
}

std::vector<Atom> observationAtoms(const RuleObservationPair& g) {
    std::vector<Atom> out;
    out.reserve(g.observations.size());
    for (const Rule& item : g.observations) out.push_back(item.head[0]);
    return out;
}

Rule normalRule(Atom head, std::vector<BodyLiteral> body) {
    return {{std::move(head)}, std::move(body), false};
}

//! Renames every atom of a ground normal rule into the given copy.
Rule copiedRule(std::string_view stem, const Rule& r) {
    Rule out;
    out.head.push_back(renamed(stem, r.head[0]));
    out.body.reserve(r.body.size());
    for (const BodyLiteral& lit : r.body) {
        out.body.push_back(lit.negated ? BodyLiteral::neg(renamed(stem, lit.atom))
                                       : BodyLiteral::pos(renamed(stem, lit.atom)));
    }
    return out;
}

//! Guess rules for all observation flags: the witness pairs first so that the
//! solver settles witness candidates before outlier candidates.
void emitGuesses(std::size_t n, std::vector<Rule>& out) {
    for (std::size_t i = 1; i <= n; ++i) {
        out.push_back(normalRule(RewriteNames::w(i), {BodyLiteral::neg(RewriteNames::wBar(i))}));
        out.push_back(normalRule(RewriteNames::wBar(i), {BodyLiteral::neg(RewriteNames::w(i))}));
    }
    for (std::size_t i = 1; i <= n; ++i) {
        out.push_back(normalRule(RewriteNames::o(i), {BodyLiteral::neg(RewriteNames::oBar(i))}));
        out.push_back(normalRule(RewriteNames::oBar(i), {BodyLiteral::neg(RewriteNames::o(i))}));
    }
}

}  // namespace

Atom RewriteNames::c1(const Atom& a) { return renamed(kC1, a); }
Atom RewriteNames::c1Bar(const Atom& a) { return renamed(kC1Bar, a); }
Atom RewriteNames::c2(const Atom& a) { return renamed(kC2, a); }
Atom RewriteNames::o(std::size_t i) { return indexed("rw_o", i); }
Atom RewriteNames::oBar(std::size_t i) { return indexed("rw_on", i); }
Atom RewriteNames::w(std::size_t i) { return indexed("rw_w", i); }
Atom RewriteNames::wBar(std::size_t i) { return indexed("rw_wn", i); }
Atom RewriteNames::phi(const Atom& a, std::size_t value) { return appended(kPhi, a, value); }
Atom RewriteNames::ruleChoice(const Atom& a, std::size_t index) {
    return appended(kRuleChoice, a, index);
}
Atom RewriteNames::satC1() { return {"rw_satc1", {}}; }
Atom RewriteNames::satC1At(std::size_t i) { return indexed("rw_satc1i", i); }
Atom RewriteNames::satC2() { return {"rw_satc2", {}}; }
Atom RewriteNames::badC1() { return {"rw_badc1", {}}; }
Atom RewriteNames::s1() { return {"rw_s1", {}}; }
Atom RewriteNames::s2() { return {"rw_s2", {}}; }
Atom RewriteNames::s3() { return {"rw_s3", {}}; }
Atom RewriteNames::s() { return {"rw_s", {}}; }

std::optional<DemangledAtom> demangle(const Atom& a) {
    using Kind = DemangledAtom::Kind;
    struct Flag {
        std::string_view pred;
        Kind kind;
        bool hasIndex;
    };
    static constexpr Flag flags[] = {
        {"rw_o", Kind::Outlier, true},      {"rw_on", Kind::OutlierBar, true},
        {"rw_w", Kind::Witness, true},      {"rw_wn", Kind::WitnessBar, true},
        {"rw_satc1i", Kind::SatC1At, true}, {"rw_satc1", Kind::SatC1, false},
        {"rw_satc2", Kind::SatC2, false},   {"rw_badc1", Kind::BadC1, false},
        {"rw_s1", Kind::S1, false},         {"rw_s2", Kind::S2, false},
        {"rw_s3", Kind::S3, false},         {"rw_s", Kind::S, false},
    };
    for (const Flag& f : flags) {
        if (a.pred != f.pred) continue;
        if (!f.hasIndex) {
            if (!a.args.empty()) return std::nullopt;
            return DemangledAtom{f.kind, std::nullopt, 0};
        }
        std::size_t i = flagIndex(a);
        if (i == 0) return std::nullopt;
        return DemangledAtom{f.kind, std::nullopt, i};
    }
    struct Copy {
        std::string_view stem;
        Kind kind;
    };
    static constexpr Copy copies[] = {
        {kC1, Kind::CopyC1},
        {kC1Bar, Kind::CopyC1Bar},
        {kC2, Kind::CopyC2},
    };
    for (const Copy& c : copies) {
        if (auto orig = stripped(c.stem, a)) {
            return DemangledAtom{c.kind, std::move(orig), 0};
        }
    }
    static constexpr Copy tagged[] = {
        {kPhi, Kind::Phi},
        {kRuleChoice, Kind::RuleChoice},
    };
    for (const Copy& c : tagged) {
        auto orig = stripped(c.stem, a);
        if (!orig) continue;
        if (orig->args.empty()) return std::nullopt;
        Term last = orig->args.back();
        if (last.kind != Term::Kind::Integer || last.value < 1) return std::nullopt;
        orig->args.pop_back();
        return DemangledAtom{c.kind, std::move(orig), static_cast<std::size_t>(last.value)};
    }
    return std::nullopt;
}

Program rewriteStratified(const RuleObservationPair& pair) {
    requireRewritable(pair, "stratified rewriting");
    RuleObservationPair g = groundPair(pair);
    // The stratification requirement covers the whole program the pair
    // denotes: observation facts can make otherwise inert rules live.
    std::vector<Rule> combined = g.rules.rules();
    combined.insert(combined.end(), g.observations.begin(), g.observations.end());
    ProgramClass cls = Program(std::move(combined)).classification();
    if (cls != ProgramClass::Positive && cls != ProgramClass::Stratified) {
        throwError(Error::Kind::Input,
                   std::string("stratified rewriting requires a stratified program, got a ") +
                       programClassText(cls) + " program");
    }
    std::vector<Atom> obs = observationAtoms(g);
    std::size_t n = obs.size();

    std::vector<Rule> out;
    emitGuesses(n, out);
    for (std::size_t i = 1; i <= n; ++i) {
        out.push_back(normalRule(RewriteNames::c2(obs[i - 1]),
                                 {BodyLiteral::neg(RewriteNames::o(i)),
                                  BodyLiteral::neg(RewriteNames::w(i))}));
    }
    for (std::size_t i = 1; i <= n; ++i) {
        out.push_back(
            normalRule(RewriteNames::c1(obs[i - 1]), {BodyLiteral::neg(RewriteNames::w(i))}));
    }
    for (const Rule& r : g.rules.rules()) out.push_back(copiedRule(kC1, r));
    for (const Rule& r : g.rules.rules()) out.push_back(copiedRule(kC2, r));
    for (std::size_t i = 1; i <= n; ++i) {
        out.push_back(normalRule(RewriteNames::badC1(),
                                 {BodyLiteral::pos(RewriteNames::w(i)),
                                  BodyLiteral::pos(RewriteNames::c1(obs[i - 1]))}));
    }
    for (std::size_t i = 1; i <= n; ++i) {
        out.push_back(normalRule(RewriteNames::satC2(),
                                 {BodyLiteral::pos(RewriteNames::w(i)),
                                  BodyLiteral::pos(RewriteNames::c2(obs[i - 1]))}));
    }
    for (std::size_t i = 1; i <= n; ++i) {
        out.push_back(normalRule(RewriteNames::s1(),
                                 {BodyLiteral::pos(RewriteNames::o(i)),
                                  BodyLiteral::pos(RewriteNames::w(i)),
                                  BodyLiteral::neg(RewriteNames::s1())}));
    }
    out.push_back(normalRule(RewriteNames::s2(), {BodyLiteral::neg(RewriteNames::satC2()),
                                                  BodyLiteral::neg(RewriteNames::s2())}));
    out.push_back(normalRule(RewriteNames::s3(), {BodyLiteral::pos(RewriteNames::badC1()),
                                                  BodyLiteral::neg(RewriteNames::s3())}));
    return Program(std::move(out));
}

Program rewriteGeneralCautious(const RuleObservationPair& pair) {
    requireRewritable(pair, "general rewriting");
    RuleObservationPair g = groundPair(pair);
    const std::vector<Rule>& rules = g.rules.rules();
    std::vector<Atom> obs = observationAtoms(g);
    std::size_t n = obs.size();

    std::set<Atom> atomSet;
    for (const Rule& r : rules) {
        atomSet.insert(r.head[0]);
        for (const BodyLiteral& lit : r.body) atomSet.insert(lit.atom);
    }
    for (const Atom& a : obs) atomSet.insert(a);
    std::vector<Atom> atoms(atomSet.begin(), atomSet.end());
    std::size_t s = atoms.size();

    // Defining entries per atom: rule-component rules in program order, then
    // observation facts.  An entry's 1-based position is its choice index.
    struct Def {
        const Rule* rule;
        std::size_t obsIndex;
    };
    std::map<Atom, std::vector<Def>> defs;
    for (const Rule& r : rules) defs[r.head[0]].push_back({&r, 0});
    for (std::size_t j = 1; j <= n; ++j) defs[obs[j - 1]].push_back({nullptr, j});

    std::vector<Rule> out;
    emitGuesses(n, out);
    for (std::size_t i = 1; i <= n; ++i) {
        out.push_back(normalRule(RewriteNames::c2(obs[i - 1]),
                                 {BodyLiteral::neg(RewriteNames::o(i)),
                                  BodyLiteral::neg(RewriteNames::w(i))}));
    }
    for (const Rule& r : rules) out.push_back(copiedRule(kC2, r));
    for (const Rule& r : rules) {
        std::vector<BodyLiteral> body;
        body.push_back(BodyLiteral::pos(RewriteNames::c1Bar(r.head[0])));
        for (const BodyLiteral& lit : r.body) {
            if (!lit.negated) body.push_back(BodyLiteral::pos(RewriteNames::c1(lit.atom)));
        }
        for (const BodyLiteral& lit : r.body) {
            if (lit.negated) body.push_back(BodyLiteral::pos(RewriteNames::c1Bar(lit.atom)));
        }
        out.push_back(normalRule(RewriteNames::satC1(), std::move(body)));
    }
    for (std::size_t i = 1; i <= n; ++i) {
        out.push_back(normalRule(RewriteNames::satC1(),
                                 {BodyLiteral::pos(RewriteNames::c1Bar(obs[i - 1])),
                                  BodyLiteral::pos(RewriteNames::wBar(i))}));
    }
    for (std::size_t i = 1; i <= n; ++i) {
        out.push_back(
            normalRule(RewriteNames::satC1At(i), {BodyLiteral::pos(RewriteNames::wBar(i))}));
        out.push_back(normalRule(RewriteNames::satC1At(i),
                                 {BodyLiteral::pos(RewriteNames::w(i)),
                                  BodyLiteral::pos(RewriteNames::c1Bar(obs[i - 1]))}));
    }
    for (std::size_t i = 1; i <= n; ++i) {
        out.push_back(normalRule(RewriteNames::satC2(),
                                 {BodyLiteral::pos(RewriteNames::w(i)),
                                  BodyLiteral::pos(RewriteNames::c2(obs[i - 1]))}));
    }
    {
        std::vector<BodyLiteral> body;
        for (std::size_t i = 1; i <= n; ++i) {
            body.push_back(BodyLiteral::pos(RewriteNames::satC1At(i)));
        }
        out.push_back(normalRule(RewriteNames::satC1(), std::move(body)));
    }
    out.push_back(
        normalRule(RewriteNames::satC1(), {BodyLiteral::neg(RewriteNames::satC1())}));
    out.push_back(
        normalRule(RewriteNames::satC2(), {BodyLiteral::neg(RewriteNames::satC2())}));
    for (std::size_t i = 1; i <= n; ++i) {
        out.push_back(normalRule(RewriteNames::s(), {BodyLiteral::pos(RewriteNames::o(i)),
                                                     BodyLiteral::pos(RewriteNames::w(i)),
                                                     BodyLiteral::neg(RewriteNames::s())}));
    }
    for (const Atom& p : atoms) {
        out.push_back(
            {{RewriteNames::c1(p), RewriteNames::c1Bar(p)}, {}, false});
    }
    for (const Atom& p : atoms) {
        Rule r;
        for (std::size_t v = 1; v <= s; ++v) r.head.push_back(RewriteNames::phi(p, v));
        r.body.push_back(BodyLiteral::pos(RewriteNames::c1(p)));
        out.push_back(std::move(r));
    }
    for (const Atom& p : atoms) {
        std::size_t count = defs.count(p) ? defs[p].size() : 0;
        if (count == 0) {
            out.push_back(
                normalRule(RewriteNames::satC1(), {BodyLiteral::pos(RewriteNames::c1(p))}));
            continue;
        }
        Rule r;
        for (std::size_t k = 1; k <= count; ++k) r.head.push_back(RewriteNames::ruleChoice(p, k));
        r.body.push_back(BodyLiteral::pos(RewriteNames::c1(p)));
        out.push_back(std::move(r));
    }
    for (const Atom& p : atoms) {
        out.push_back(normalRule(RewriteNames::satC1(),
                                 {BodyLiteral::pos(RewriteNames::c1(p)),
                                  BodyLiteral::pos(RewriteNames::c1Bar(p))}));
    }
    for (const Atom& p : atoms) {
        for (std::size_t i = 1; i <= s; ++i) {
            for (std::size_t j = i + 1; j <= s; ++j) {
                out.push_back(normalRule(RewriteNames::satC1(),
                                         {BodyLiteral::pos(RewriteNames::phi(p, i)),
                                          BodyLiteral::pos(RewriteNames::phi(p, j)),
                                          BodyLiteral::pos(RewriteNames::c1(p))}));
            }
        }
    }
    for (const Atom& p : atoms) {
        std::size_t count = defs.count(p) ? defs[p].size() : 0;
        for (std::size_t i = 1; i <= count; ++i) {
            for (std::size_t j = i + 1; j <= count; ++j) {
                out.push_back(normalRule(RewriteNames::satC1(),
                                         {BodyLiteral::pos(RewriteNames::ruleChoice(p, i)),
                                          BodyLiteral::pos(RewriteNames::ruleChoice(p, j)),
                                          BodyLiteral::pos(RewriteNames::c1(p))}));
            }
        }
    }
    for (const Atom& p : atoms) {
        if (!defs.count(p)) continue;
        const std::vector<Def>& list = defs[p];
        for (std::size_t k = 1; k <= list.size(); ++k) {
            const Def& d = list[k - 1];
            if (d.rule == nullptr) {
                out.push_back(normalRule(RewriteNames::satC1(),
                                         {BodyLiteral::pos(RewriteNames::ruleChoice(p, k)),
                                          BodyLiteral::pos(RewriteNames::w(d.obsIndex)),
                                          BodyLiteral::pos(RewriteNames::c1(p))}));
                continue;
            }
            std::set<Atom> negAtoms, posAtoms;
            for (const BodyLiteral& lit : d.rule->body) {
                (lit.negated ? negAtoms : posAtoms).insert(lit.atom);
            }
            for (const Atom& c : negAtoms) {
                out.push_back(normalRule(RewriteNames::satC1(),
                                         {BodyLiteral::pos(RewriteNames::ruleChoice(p, k)),
                                          BodyLiteral::pos(RewriteNames::c1(c)),
                                          BodyLiteral::pos(RewriteNames::c1(p))}));
            }
            for (const Atom& b : posAtoms) {
                out.push_back(normalRule(RewriteNames::satC1(),
                                         {BodyLiteral::pos(RewriteNames::ruleChoice(p, k)),
                                          BodyLiteral::pos(RewriteNames::c1Bar(b)),
                                          BodyLiteral::pos(RewriteNames::c1(p))}));
            }
            for (const Atom& q : posAtoms) {
                for (std::size_t h = 1; h <= s; ++h) {
                    for (std::size_t k2 = h; k2 <= s; ++k2) {
                        std::vector<BodyLiteral> body;
                        body.push_back(BodyLiteral::pos(RewriteNames::ruleChoice(p, k)));
                        body.push_back(BodyLiteral::pos(RewriteNames::phi(p, h)));
                        BodyLiteral second = BodyLiteral::pos(RewriteNames::phi(q, k2));
                        if (second != body.back()) body.push_back(std::move(second));
                        body.push_back(BodyLiteral::pos(RewriteNames::c1(p)));
                        out.push_back(normalRule(RewriteNames::satC1(), std::move(body)));
                    }
                }
            }
        }
    }
    for (const Atom& p : atoms) {
        out.push_back(
            normalRule(RewriteNames::c1(p), {BodyLiteral::pos(RewriteNames::satC1())}));
        out.push_back(
            normalRule(RewriteNames::c1Bar(p), {BodyLiteral::pos(RewriteNames::satC1())}));
    }
    for (const Atom& p : atoms) {
        for (std::size_t v = 1; v <= s; ++v) {
            out.push_back(normalRule(RewriteNames::phi(p, v),
                                     {BodyLiteral::pos(RewriteNames::satC1())}));
        }
    }
    for (const Atom& p : atoms) {
        std::size_t count = defs.count(p) ? defs[p].size() : 0;
        for (std::size_t k = 1; k <= count; ++k) {
            out.push_back(normalRule(RewriteNames::ruleChoice(p, k),
                                     {BodyLiteral::pos(RewriteNames::satC1())}));
        }
    }
    for (std::size_t i = 1; i <= n; ++i) {
        out.push_back(
            normalRule(RewriteNames::satC1At(i), {BodyLiteral::pos(RewriteNames::satC1())}));
    }
    return Program(std::move(out));
}

Program addMinConstraints(const Program& rewritten, const RuleObservationPair& pair) {
    std::vector<Rule> rules = rewritten.rules();
    for (std::size_t i = 1; i <= pair.observations.size(); ++i) {
        rules.push_back({{}, {BodyLiteral::pos(RewriteNames::o(i))}, true});
    }
    return Program(std::move(rules));
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> decodeModel(
    const Interpretation& m, const RuleObservationPair& pair) {
    std::pair<std::vector<std::size_t>, std::vector<std::size_t>> out;
    for (std::size_t i = 1; i <= pair.observations.size(); ++i) {
        if (m.count(RewriteNames::o(i))) out.first.push_back(i - 1);
        if (m.count(RewriteNames::w(i))) out.second.push_back(i - 1);
    }
    return out;
}

bool checkMinimalityCertificate(const Program& p, const Interpretation& m,
                                const MinimalityCertificate& cert) {
    std::set<Atom> atomsOfP;
    for (const Rule& r : p.rules()) {
        if (r.weak || r.head.size() != 1 || !r.ground()) {
            throwError(Error::Kind::Input,
                       "certificate check requires a positive normal ground program, got '" +
                           r.str() + "'");
        }
        atomsOfP.insert(r.head[0]);
        for (const BodyLiteral& lit : r.body) {
            if (lit.isBuiltin() || lit.negated) {
                throwError(Error::Kind::Input,
                           "certificate check requires a positive normal ground program, got '" +
                               r.str() + "'");
            }
            atomsOfP.insert(lit.atom);
        }
    }
    std::size_t s = atomsOfP.size();
    for (const Atom& a : atomsOfP) {
        auto it = cert.phi.find(a);
        if (it == cert.phi.end() || it->second < 1 || it->second > s) return false;
    }
    const std::vector<Rule>& rules = p.rules();
    for (const Atom& a : m) {
        auto it = cert.ruleChoice.find(a);
        if (it == cert.ruleChoice.end()) return false;
        const Rule& r = it->second;
        if (std::find(rules.begin(), rules.end(), r) == rules.end()) return false;
        if (r.head.size() != 1 || r.head[0] != a) return false;
        for (const BodyLiteral& lit : r.body) {
            if (!m.count(lit.atom)) return false;
            if (cert.phi.at(lit.atom) >= cert.phi.at(a)) return false;
        }
    }
    return true;
}

}  // namespace rodeo
