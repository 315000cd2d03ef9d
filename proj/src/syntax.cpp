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
#include "rodeo/syntax.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace rodeo {

std::string Term::str() const {
    switch (kind) {
        case Kind::Constant:
        case Kind::Variable: return text;
        case Kind::Integer: return std::to_string(value);
    }
    return {};
}

bool Atom::ground() const {
    for (const auto& t : args) {
        if (t.isVar()) { return false; }
    }
    return true;
}

std::string Atom::str() const {
    std::string out = pred;
    if (!args.empty()) {
        out += '(';
        for (size_t i = 0; i != args.size(); ++i) {
            if (i) { out += ','; }
            out += args[i].str();
        }
        out += ')';
    }
    return out;
}

const char* cmpText(Cmp c) {
    switch (c) {
        case Cmp::Eq: return "=";
        case Cmp::Ne: return "!=";
        case Cmp::Lt: return "<";
        case Cmp::Gt: return ">";
        case Cmp::Le: return "<=";
        case Cmp::Ge: return ">=";
    }
    return "=";
}

bool BodyLiteral::ground() const {
    if (isAtom()) { return atom.ground(); }
    return !lhs.isVar() && !rhs.isVar();
}

std::string BodyLiteral::str() const {
    if (isBuiltin()) { return lhs.str() + " " + cmpText(cmp) + " " + rhs.str(); }
    return negated ? "not " + atom.str() : atom.str();
}

bool Rule::ground() const {
    for (const auto& a : head) {
        if (!a.ground()) { return false; }
    }
    for (const auto& b : body) {
        if (!b.ground()) { return false; }
    }
    return true;
}

bool Rule::hasNegation() const {
    for (const auto& b : body) {
        if (b.isAtom() && b.negated) { return true; }
    }
    return false;
}

std::string Rule::str() const {
    std::string out;
    if (weak) {
        out = ":~";
    } else {
        for (size_t i = 0; i != head.size(); ++i) {
            if (i) { out += " v "; }
            out += head[i].str();
        }
        if (!body.empty()) { out += " :-"; }
    }
    for (size_t i = 0; i != body.size(); ++i) {
        out += i ? ", " : " ";
        out += body[i].str();
    }
    out += '.';
    return out;
}

const char* programClassText(ProgramClass c) {
    switch (c) {
        case ProgramClass::Positive: return "positive";
        case ProgramClass::Stratified: return "stratified";
        case ProgramClass::Normal: return "normal";
        case ProgramClass::Disjunctive: return "disjunctive";
    }
    return "?";
}

namespace {

void collectTerms(const Rule& r, std::set<Term>& constants, bool& hasVars) {
    auto visit = [&](const Term& t) {
        if (t.isVar()) {
            hasVars = true;
        } else {
            constants.insert(t);
        }
    };
    for (const auto& a : r.head) {
        for (const auto& t : a.args) { visit(t); }
    }
    for (const auto& b : r.body) {
        if (b.isAtom()) {
            for (const auto& t : b.atom.args) { visit(t); }
        } else {
            visit(b.lhs);
            visit(b.rhs);
        }
    }
}

void checkRuleShape(const Rule& r) {
    if (r.weak) {
        if (!r.head.empty()) { throwError(Error::Kind::Input, "weak constraint with a head"); }
    } else if (r.head.empty()) {
        throwError(Error::Kind::Input, "rule without a head");
    }
    for (const auto& b : r.body) {
        if (b.isBuiltin() && b.negated) {
            throwError(Error::Kind::Input, "negated builtin in rule body");
        }
    }
}

void checkArities(const std::vector<Rule>& rules) {
    std::map<std::string, size_t> arity;
    auto note = [&](const Atom& a) {
        auto [it, fresh] = arity.emplace(a.pred, a.arity());
        if (!fresh && it->second != a.arity()) {
            throwError(Error::Kind::Input, "predicate " + a.pred + " used with arity " +
                                               std::to_string(a.arity()) + " and " +
                                               std::to_string(it->second));
        }
    };
    for (const auto& r : rules) {
        for (const auto& a : r.head) { note(a); }
        for (const auto& b : r.body) {
            if (b.isAtom()) { note(b.atom); }
        }
    }
}

// Drops ground instances whose positive body mentions an atom no remaining
// rule can derive. Such instances never fire in any stable model, but they
// would pollute the atom dependency graph used for stratification.
std::vector<const Rule*> liveGroundRules(const std::vector<Rule>& rules) {
    std::vector<const Rule*> live;
    for (const auto& r : rules) {
        if (!r.weak) { live.push_back(&r); }
    }
    for (;;) {
        std::set<Atom> heads;
        for (const Rule* r : live) {
            for (const auto& a : r->head) { heads.insert(a); }
        }
        std::vector<const Rule*> next;
        for (const Rule* r : live) {
            bool ok = true;
            for (const auto& b : r->body) {
                if (b.isAtom() && !b.negated && !heads.count(b.atom)) {
                    ok = false;
                    break;
                }
            }
            if (ok) { next.push_back(r); }
        }
        if (next.size() == live.size()) { return live; }
        live.swap(next);
    }
}

// A stratification assignment exists iff no dependency cycle crosses a
// negative edge; checked per strongly connected component.
template <typename Node>
bool stratifiable(const std::map<Node, std::vector<std::pair<Node, bool>>>& deps) {
    std::map<Node, int> index, low, comp;
    std::vector<Node> stack;
    std::map<Node, bool> onStack;
    int counter = 0, comps = 0;

    struct Frame {
        Node node;
        size_t edge = 0;
    };
    for (const auto& [start, ignored] : deps) {
        (void)ignored;
        if (index.count(start)) { continue; }
        std::vector<Frame> work{{start}};
        index[start] = low[start] = counter++;
        stack.push_back(start);
        onStack[start] = true;
        while (!work.empty()) {
            Frame& f = work.back();
            const auto& edges = deps.at(f.node);
            if (f.edge < edges.size()) {
                Node to = edges[f.edge++].first;
                if (!index.count(to)) {
                    index[to] = low[to] = counter++;
                    stack.push_back(to);
                    onStack[to] = true;
                    work.push_back({to});
                } else if (onStack[to]) {
                    low[f.node] = std::min(low[f.node], index[to]);
                }
            } else {
                if (low[f.node] == index[f.node]) {
                    for (;;) {
                        Node n = stack.back();
                        stack.pop_back();
                        onStack[n] = false;
                        comp[n] = comps;
                        if (n == f.node) { break; }
                    }
                    ++comps;
                }
                Node done = f.node;
                work.pop_back();
                if (!work.empty()) { low[work.back().node] = std::min(low[work.back().node], low[done]); }
            }
        }
    }
    for (const auto& [from, edges] : deps) {
        for (const auto& [to, negative] : edges) {
            if (negative && comp[from] == comp[to]) { return false; }
        }
    }
    return true;
}

}  // namespace

ProgramClass classifyRules(const std::vector<Rule>& rules) {
    bool negation = false, singleHeads = true, isGround = true;
    for (const auto& r : rules) {
        if (r.weak) { continue; }
        negation = negation || r.hasNegation();
        singleHeads = singleHeads && r.head.size() == 1;
        isGround = isGround && r.ground();
    }
    if (!negation) { return ProgramClass::Positive; }
    if (singleHeads) {
        bool strat;
        if (isGround) {
            std::map<Atom, std::vector<std::pair<Atom, bool>>> deps;
            for (const Rule* r : liveGroundRules(rules)) {
                auto& edges = deps[r->head.front()];
                for (const auto& b : r->body) {
                    if (!b.isAtom()) { continue; }
                    edges.emplace_back(b.atom, b.negated);
                    deps.try_emplace(b.atom);
                }
            }
            strat = stratifiable(deps);
        } else {
            std::map<std::string, std::vector<std::pair<std::string, bool>>> deps;
            for (const auto& r : rules) {
                if (r.weak) { continue; }
                for (const auto& h : r.head) {
                    auto& edges = deps[h.pred];
                    for (const auto& b : r.body) {
                        if (!b.isAtom()) { continue; }
                        edges.emplace_back(b.atom.pred, b.negated);
                        deps.try_emplace(b.atom.pred);
                    }
                }
            }
            strat = stratifiable(deps);
        }
        if (strat) { return ProgramClass::Stratified; }
        return ProgramClass::Normal;
    }
    return ProgramClass::Disjunctive;
}

Program::Program(std::vector<Rule> rules) : rules_(std::move(rules)) {
    std::set<Term> constants;
    bool hasVars = false;
    for (const auto& r : rules_) {
        checkRuleShape(r);
        collectTerms(r, constants, hasVars);
        ground_ = ground_ && r.ground();
    }
    checkArities(rules_);
    if (constants.empty() && hasVars) { constants.insert(Term::constant("u0")); }
    universe_.assign(constants.begin(), constants.end());
    class_ = classifyRules(rules_);
}

bool Program::operator==(const Program& other) const { return rules_ == other.rules_; }

RuleObservationPair attachObservations(Program rules, std::vector<Rule> observations,
                                       ObsMode mode) {
    for (const auto& r : rules.rules()) {
        if (r.weak) {
            throwError(Error::Kind::Input, "weak constraint in rule component: " + r.str());
        }
    }
    std::set<Rule> seen;
    for (const auto& item : observations) {
        if (item.weak) { throwError(Error::Kind::Input, "weak constraint as observation"); }
        if (!item.ground()) {
            throwError(Error::Kind::Input, "non-ground observation item: " + item.str());
        }
        if (mode == ObsMode::Basic && !item.isFact()) {
            throwError(Error::Kind::Input, "non-fact observation in basic mode: " + item.str());
        }
        for (const auto& b : item.body) {
            if (b.isBuiltin()) {
                throwError(Error::Kind::Input, "builtin in observation item: " + item.str());
            }
        }
        if (!seen.insert(item).second) {
            throwError(Error::Kind::Input, "duplicate observation item: " + item.str());
        }
    }
    // Rebuilding the union validates arity consistency across components.
    std::vector<Rule> merged = rules.rules();
    merged.insert(merged.end(), observations.begin(), observations.end());
    checkArities(merged);
    return {std::move(rules), std::move(observations), mode};
}

OutlierReport makeReport(const RuleObservationPair& pair, std::vector<size_t> outlier,
                         std::vector<size_t> witness, Semantics sem, ReportSource source) {
    auto checkIndices = [&](std::vector<size_t>& xs, const char* what) {
        std::sort(xs.begin(), xs.end());
        if (std::adjacent_find(xs.begin(), xs.end()) != xs.end()) {
            throwError(Error::Kind::Input, std::string("duplicate ") + what + " item");
        }
        for (size_t i : xs) {
            if (i >= pair.observations.size()) {
                throwError(Error::Kind::Input, std::string(what) + " index out of range");
            }
        }
    };
    checkIndices(outlier, "outlier");
    checkIndices(witness, "witness");
    if (witness.empty()) { throwError(Error::Kind::Input, "empty witness"); }
    std::vector<size_t> both;
    std::set_intersection(outlier.begin(), outlier.end(), witness.begin(), witness.end(),
                          std::back_inserter(both));
    if (!both.empty()) { throwError(Error::Kind::Input, "outlier and witness overlap"); }
    return {std::move(outlier), std::move(witness), sem, source, false};
}

std::vector<std::string> renderItems(const RuleObservationPair& pair,
                                     const std::vector<size_t>& indices) {
    std::vector<std::string> out;
    out.reserve(indices.size());
    for (size_t i : indices) {
        const Rule& item = pair.observations.at(i);
        out.push_back(item.isFact() ? item.head.front().str() : item.str());
    }
    return out;
}

}  // namespace rodeo
