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
#include "rodeo/ground.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace rodeo {

namespace {

using Binding = std::map<std::string, Term>;

Term substTerm(const Term& t, const Binding& b) {
    if (!t.isVar()) { return t; }
    auto it = b.find(t.text);
    return it == b.end() ? t : it->second;
}

Atom substAtom(const Atom& a, const Binding& b) {
    Atom out;
    out.pred = a.pred;
    out.args.reserve(a.args.size());
    for (const auto& t : a.args) { out.args.push_back(substTerm(t, b)); }
    return out;
}

bool matchAtom(const Atom& pattern, const Atom& fact, Binding& b) {
    if (pattern.pred != fact.pred || pattern.args.size() != fact.args.size()) { return false; }
    for (size_t i = 0; i < pattern.args.size(); ++i) {
        const Term& p = pattern.args[i];
        if (!p.isVar()) {
            if (p != fact.args[i]) { return false; }
            continue;
        }
        auto [it, fresh] = b.emplace(p.text, fact.args[i]);
        if (!fresh && it->second != fact.args[i]) { return false; }
    }
    return true;
}

void collectVars(const Term& t, std::set<std::string>& vars) {
    if (t.isVar()) { vars.insert(t.text); }
}

void collectVars(const Atom& a, std::set<std::string>& vars) {
    for (const auto& t : a.args) { collectVars(t, vars); }
}

void checkRuleSafety(const Rule& r) {
    std::set<std::string> bound;
    for (const auto& lit : r.body) {
        if (lit.kind == BodyLiteral::Kind::Atom && !lit.negated) { collectVars(lit.atom, bound); }
    }
    std::set<std::string> used;
    for (const auto& a : r.head) { collectVars(a, used); }
    for (const auto& lit : r.body) {
        if (lit.kind == BodyLiteral::Kind::Atom) {
            if (lit.negated) { collectVars(lit.atom, used); }
        } else {
            collectVars(lit.lhs, used);
            collectVars(lit.rhs, used);
        }
    }
    for (const auto& v : used) {
        if (!bound.count(v)) {
            throwError(Error::Kind::Input,
                       "unsafe variable " + v + " in rule '" + r.str() + "'");
        }
    }
}

// Derivable-atom index keyed by predicate and arity.
class AtomIndex {
public:
    bool insert(const Atom& a) {
        if (!all_.insert(a).second) { return false; }
        byPred_[{a.pred, a.args.size()}].push_back(a);
        return true;
    }

    bool contains(const Atom& a) const { return all_.count(a) != 0; }

    const std::vector<Atom>& candidates(const Atom& pattern) const {
        static const std::vector<Atom> kEmpty;
        auto it = byPred_.find({pattern.pred, pattern.args.size()});
        return it == byPred_.end() ? kEmpty : it->second;
    }

private:
    std::set<Atom> all_;
    std::map<std::pair<std::string, size_t>, std::vector<Atom>> byPred_;
};

// Enumerates bindings matching the positive atom literals of `r` against the
// index, invoking `emit` for each complete one.
template <typename Fn>
void forEachMatch(const Rule& r, const AtomIndex& index, Fn&& emit) {
    std::vector<const Atom*> goals;
    for (const auto& lit : r.body) {
        if (lit.kind == BodyLiteral::Kind::Atom && !lit.negated) { goals.push_back(&lit.atom); }
    }
    Binding binding;
    auto step = [&](auto&& self, size_t i) -> void {
        if (i == goals.size()) {
            emit(binding);
            return;
        }
        for (const Atom& fact : index.candidates(*goals[i])) {
            Binding saved = binding;
            if (matchAtom(*goals[i], fact, binding)) { self(self, i + 1); }
            binding = std::move(saved);
        }
    };
    step(step, 0);
}

// Applies a binding to a rule. Returns false when some builtin evaluates to
// false; satisfied builtins are dropped from the instance.
bool instantiate(const Rule& r, const Binding& b, Rule& out) {
    out = Rule{};
    out.weak = r.weak;
    for (const auto& a : r.head) { out.head.push_back(substAtom(a, b)); }
    for (const auto& lit : r.body) {
        if (lit.kind == BodyLiteral::Kind::Builtin) {
            if (!evalBuiltin(lit.cmp, substTerm(lit.lhs, b), substTerm(lit.rhs, b))) {
                return false;
            }
            continue;
        }
        BodyLiteral inst = lit;
        inst.atom = substAtom(lit.atom, b);
        out.body.push_back(std::move(inst));
    }
    return true;
}

// True when the positive part of a ground rule holds under the index: every
// positive atom is derivable and every builtin evaluates to true.
bool groundRuleFires(const Rule& r, const AtomIndex& index) {
    for (const auto& lit : r.body) {
        if (lit.kind == BodyLiteral::Kind::Builtin) {
            if (!evalBuiltin(lit.cmp, lit.lhs, lit.rhs)) { return false; }
        } else if (!lit.negated && !index.contains(lit.atom)) {
            return false;
        }
    }
    return true;
}

// Resolves the builtins of a ground rule. Returns false when one of them
// evaluates to false, meaning the rule can be dropped entirely.
bool resolveBuiltins(const Rule& r, Rule& out) {
    out = Rule{};
    out.weak = r.weak;
    out.head = r.head;
    for (const auto& lit : r.body) {
        if (lit.kind == BodyLiteral::Kind::Builtin) {
            if (!evalBuiltin(lit.cmp, lit.lhs, lit.rhs)) { return false; }
            continue;
        }
        out.body.push_back(lit);
    }
    return true;
}

bool hasBuiltin(const Program& p) {
    for (const auto& r : p.rules()) {
        for (const auto& lit : r.body) {
            if (lit.kind == BodyLiteral::Kind::Builtin) { return true; }
        }
    }
    return false;
}

}  // namespace

bool evalBuiltin(Cmp cmp, const Term& lhs, const Term& rhs) {
    if (lhs.isVar() || rhs.isVar()) {
        throwError(Error::Kind::Input,
                   "comparison on non-ground terms: " + lhs.str() + " " + cmpText(cmp) + " " +
                       rhs.str());
    }
    switch (cmp) {
        case Cmp::Eq: return lhs == rhs;
        case Cmp::Ne: return lhs != rhs;
        default: break;
    }
    if (lhs.kind != Term::Kind::Integer || rhs.kind != Term::Kind::Integer) {
        throwError(Error::Kind::Input,
                   "ordering comparison requires integer operands: " + lhs.str() + " " +
                       cmpText(cmp) + " " + rhs.str());
    }
    switch (cmp) {
        case Cmp::Lt: return lhs.value < rhs.value;
        case Cmp::Gt: return lhs.value > rhs.value;
        case Cmp::Le: return lhs.value <= rhs.value;
        case Cmp::Ge: return lhs.value >= rhs.value;
        default: return false;
    }
}

void checkSafety(const Program& p) {
    for (const auto& r : p.rules()) { checkRuleSafety(r); }
}

Program ground(const Program& p, const std::vector<Atom>& seeds) {
    checkSafety(p);
    if (p.ground() && !hasBuiltin(p)) { return p; }

    AtomIndex derived;
    for (const auto& a : seeds) { derived.insert(a); }

    const auto& rules = p.rules();
    std::vector<std::set<Rule>> instances(rules.size());
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < rules.size(); ++i) {
            const Rule& r = rules[i];
            if (r.ground()) {
                if (!r.weak && groundRuleFires(r, derived)) {
                    for (const auto& a : r.head) { changed = derived.insert(a) || changed; }
                }
                continue;
            }
            forEachMatch(r, derived, [&](const Binding& b) {
                Rule inst;
                if (!instantiate(r, b, inst)) { return; }
                if (instances[i].insert(inst).second) {
                    changed = true;
                    if (!inst.weak) {
                        for (const auto& a : inst.head) { derived.insert(a); }
                    }
                }
            });
        }
    }

    std::vector<Rule> out;
    for (size_t i = 0; i < rules.size(); ++i) {
        if (rules[i].ground()) {
            Rule resolved;
            if (resolveBuiltins(rules[i], resolved)) { out.push_back(std::move(resolved)); }
        } else {
            out.insert(out.end(), instances[i].begin(), instances[i].end());
        }
    }
    return Program(std::move(out));
}

RuleObservationPair groundPair(const RuleObservationPair& pair) {
    std::vector<Atom> seeds;
    for (const auto& obs : pair.observations) {
        for (const auto& a : obs.head) { seeds.push_back(a); }
    }
    return attachObservations(ground(pair.rules, seeds), pair.observations, pair.mode);
}

}  // namespace rodeo
