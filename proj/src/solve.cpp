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
#include "rodeo/solve.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <map>
#include <utility>

#include "rodeo/ground.hpp"

namespace rodeo {

namespace {

constexpr int8_t kUnknown = -1;

void requireGroundPlain(const std::vector<Rule>& rules, const char* what) {
    for (const auto& r : rules) {
        if (!r.ground()) {
            throwError(Error::Kind::Input, std::string(what) + " requires a ground program, got '" +
                                               r.str() + "'");
        }
        for (const auto& lit : r.body) {
            if (lit.isBuiltin()) {
                throwError(Error::Kind::Input, std::string(what) +
                                                   " requires a builtin-free program, got '" +
                                                   r.str() + "'");
            }
        }
    }
}

bool bodyHolds(const Rule& r, const Interpretation& i) {
    for (const auto& lit : r.body) {
        bool in = i.count(lit.atom) > 0;
        if (lit.negated ? in : !in) return false;
    }
    return true;
}

bool headHolds(const Rule& r, const Interpretation& i) {
    for (const auto& a : r.head) {
        if (i.count(a)) return true;
    }
    return false;
}

bool isModelOf(const std::vector<Rule>& rules, const Interpretation& i) {
    for (const auto& r : rules) {
        if (r.weak) continue;
        if (bodyHolds(r, i) && !headHolds(r, i)) return false;
    }
    return true;
}

// Tarjan over an explicit adjacency list; components come out numbered so
// that every edge u -> v has comp[u] >= comp[v], i.e. ascending component
// order visits dependencies first.
struct SccResult {
    std::vector<int> comp;
    int count = 0;
};

SccResult tarjan(int n, const std::vector<std::vector<int>>& adj) {
    SccResult res;
    res.comp.assign(n, -1);
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<char> onStack(n, 0);
    std::vector<int> stack;
    struct Frame {
        int node;
        size_t next;
    };
    std::vector<Frame> frames;
    int counter = 0;
    for (int root = 0; root < n; ++root) {
        if (index[root] >= 0) continue;
        frames.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        onStack[root] = 1;
        while (!frames.empty()) {
            Frame& f = frames.back();
            int u = f.node;
            if (f.next < adj[u].size()) {
                int v = adj[u][f.next++];
                if (index[v] < 0) {
                    index[v] = low[v] = counter++;
                    stack.push_back(v);
                    onStack[v] = 1;
                    frames.push_back({v, 0});
                } else if (onStack[v]) {
                    low[u] = std::min(low[u], index[v]);
                }
            } else {
                if (low[u] == index[u]) {
                    while (true) {
                        int w = stack.back();
                        stack.pop_back();
                        onStack[w] = 0;
                        res.comp[w] = res.count;
                        if (w == u) break;
                    }
                    ++res.count;
                }
                frames.pop_back();
                if (!frames.empty()) {
                    Frame& p = frames.back();
                    low[p.node] = std::min(low[p.node], low[u]);
                }
            }
        }
    }
    return res;
}

// Searches for a model strictly below the all-true assignment of a positive
// residual instance: atoms are 0..n-1, every rule head is nonempty, and rules
// whose head meets their own body have been dropped. This is the minimality
// core shared by is_stable, minimal model enumeration, and the engine's
// disjunctive leaf check.
class SubmodelSearch {
public:
    SubmodelSearch(int n, const std::vector<std::vector<int>>& heads,
                   const std::vector<std::vector<int>>& poss, uint64_t& nodesLeft)
        : n_(n), heads_(heads), poss_(poss), nodesLeft_(nodesLeft) {
        val_.assign(n_, kUnknown);
        posOcc_.assign(n_, {});
        headOcc_.assign(n_, {});
        size_t m = heads_.size();
        posUnknown_.resize(m);
        posFalse_.assign(m, 0);
        headTrue_.assign(m, 0);
        headUnknown_.resize(m);
        for (size_t r = 0; r < m; ++r) {
            posUnknown_[r] = static_cast<int>(poss_[r].size());
            headUnknown_[r] = static_cast<int>(heads_[r].size());
            for (int a : poss_[r]) posOcc_[a].push_back(static_cast<int>(r));
            for (int a : heads_[r]) headOcc_[a].push_back(static_cast<int>(r));
        }
        unknownCnt_ = n_;
    }

    bool run() {
        if (n_ == 0) return false;
        for (size_t r = 0; r < heads_.size() && !conflict_; ++r) {
            checkRule(static_cast<int>(r));
        }
        if (!drain()) return false;
        return dfs(0);
    }

private:
    bool dfs(int hint) {
        int a = hint;
        while (a < n_ && val_[a] != kUnknown) ++a;
        if (a == n_) return falseCnt_ > 0;
        for (int v = 0; v < 2; ++v) {
            if (nodesLeft_ == 0) {
                throwError(Error::Kind::Budget, "node budget exhausted");
            }
            --nodesLeft_;
            size_t mark = trail_.size();
            assign(a, static_cast<int8_t>(v));
            if (drain() && dfs(a + 1)) return true;
            undoTo(mark);
        }
        return false;
    }

    void assign(int a, int8_t v) {
        if (val_[a] != kUnknown) {
            if (val_[a] != v) conflict_ = true;
            return;
        }
        val_[a] = v;
        trail_.push_back(a);
        --unknownCnt_;
        if (v == 0) ++falseCnt_;
        if (falseCnt_ == 0 && unknownCnt_ == 0) conflict_ = true;
    }

    // Applies the pending trail suffix; an atom's counter updates always run
    // to completion so that undoTo can reverse exactly the applied prefix.
    bool drain() {
        while (propagated_ < trail_.size() && !conflict_) {
            int a = trail_[propagated_++];
            int8_t v = val_[a];
            for (int r : posOcc_[a]) {
                --posUnknown_[r];
                if (v == 0) ++posFalse_[r];
            }
            for (int r : headOcc_[a]) {
                --headUnknown_[r];
                if (v == 1) ++headTrue_[r];
            }
            if (conflict_) break;
            for (int r : posOcc_[a]) {
                checkRule(r);
                if (conflict_) break;
            }
            for (int r : headOcc_[a]) {
                if (conflict_) break;
                checkRule(r);
            }
            if (!conflict_) forceLastFalse();
        }
        return !conflict_;
    }

    void checkRule(int r) {
        if (posFalse_[r] > 0 || headTrue_[r] > 0) return;
        if (posUnknown_[r] == 0) {
            if (headUnknown_[r] == 0) {
                conflict_ = true;
            } else if (headUnknown_[r] == 1) {
                for (int a : heads_[r]) {
                    if (val_[a] == kUnknown) {
                        assign(a, 1);
                        break;
                    }
                }
            }
            return;
        }
        if (headUnknown_[r] == 0 && posUnknown_[r] == 1) {
            for (int a : poss_[r]) {
                if (val_[a] == kUnknown) {
                    assign(a, 0);
                    break;
                }
            }
        }
    }

    void forceLastFalse() {
        if (falseCnt_ > 0 || unknownCnt_ != 1) return;
        for (int a = 0; a < n_; ++a) {
            if (val_[a] == kUnknown) {
                assign(a, 0);
                break;
            }
        }
    }

    void undoTo(size_t mark) {
        while (trail_.size() > mark) {
            int a = trail_.back();
            trail_.pop_back();
            int8_t v = val_[a];
            if (propagated_ > trail_.size()) {
                propagated_ = trail_.size();
                for (int r : posOcc_[a]) {
                    ++posUnknown_[r];
                    if (v == 0) --posFalse_[r];
                }
                for (int r : headOcc_[a]) {
                    ++headUnknown_[r];
                    if (v == 1) --headTrue_[r];
                }
            }
            ++unknownCnt_;
            if (v == 0) --falseCnt_;
            val_[a] = kUnknown;
        }
        conflict_ = false;
    }

    int n_;
    const std::vector<std::vector<int>>& heads_;
    const std::vector<std::vector<int>>& poss_;
    uint64_t& nodesLeft_;
    std::vector<int8_t> val_;
    std::vector<std::vector<int>> posOcc_, headOcc_;
    std::vector<int> posUnknown_, posFalse_, headTrue_, headUnknown_;
    std::vector<int> trail_;
    size_t propagated_ = 0;
    int unknownCnt_ = 0;
    int falseCnt_ = 0;
    bool conflict_ = false;
};

// Residual of a reduct against a total model: rules restricted to the true
// atoms, localized to dense indices, inert rules dropped.
struct Residual {
    int n = 0;
    std::vector<std::vector<int>> heads, poss;
};

bool hasProperSubmodel(const Residual& res, uint64_t& nodesLeft,
                       std::map<std::vector<int>, bool>* memo) {
    std::vector<int> key;
    if (memo) {
        std::vector<std::vector<int>> encoded;
        encoded.reserve(res.heads.size());
        for (size_t r = 0; r < res.heads.size(); ++r) {
            std::vector<int> e;
            e.push_back(static_cast<int>(res.heads[r].size()));
            e.insert(e.end(), res.heads[r].begin(), res.heads[r].end());
            e.insert(e.end(), res.poss[r].begin(), res.poss[r].end());
            encoded.push_back(std::move(e));
        }
        std::sort(encoded.begin(), encoded.end());
        key.push_back(res.n);
        for (const auto& e : encoded) {
            key.push_back(static_cast<int>(e.size()));
            key.insert(key.end(), e.begin(), e.end());
        }
        auto it = memo->find(key);
        if (it != memo->end()) return it->second;
    }
    SubmodelSearch search(res.n, res.heads, res.poss, nodesLeft);
    bool found = search.run();
    if (memo) (*memo)[key] = found;
    return found;
}

// Least model of a set of positive normal ground rules, naive iteration.
Interpretation leastModel(const std::vector<Rule>& rules) {
    Interpretation m;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& r : rules) {
            if (r.weak) continue;
            if (m.count(r.head.front())) continue;
            bool fire = true;
            for (const auto& lit : r.body) {
                if (!m.count(lit.atom)) {
                    fire = false;
                    break;
                }
            }
            if (fire) {
                m.insert(r.head.front());
                changed = true;
            }
        }
    }
    return m;
}

void sortModels(ModelSet& ms) { std::sort(ms.begin(), ms.end()); }

}  // namespace

// ---------------------------------------------------------------------------
// StableEngine
// ---------------------------------------------------------------------------

struct StableEngine::Impl {
    struct CRule {
        std::vector<int> head, pos, neg;
        bool weak = false;
        int opt = -1;  // optional bit index, -1 for core rules
    };
    struct Lit {
        int atom;
        bool want;
    };
    struct Occ {
        int idx;
    };

    SolveLimits limits;
    size_t optionalCount = 0;

    // compiled program
    std::vector<Atom> atomOf;
    std::map<Atom, int> idOf;
    std::vector<CRule> rules;
    bool normal = true;
    bool stratified = false;

    // clause machinery, one clause per non-weak rule
    std::vector<std::vector<Lit>> clauseLits;
    std::vector<int> clauseOpt;
    std::vector<std::vector<int>> occMatchT, occMatchF;  // lits satisfied by True / by False

    // support slots: (rule, target head atom) with target not in pos or neg
    std::vector<int> slotRule, slotTarget, slotOpt;
    std::vector<std::vector<int>> slotsOfAtom;
    std::vector<std::vector<int>> slotPosOcc, slotNegOcc, slotHeadOcc;

    // unfounded-set propagation domain: atoms on positive cycles
    std::vector<char> inCycle;
    std::vector<int> cycleSlots;                // slot indices targeting cycle atoms
    std::vector<int> cycleSlotInternal;         // per cycleSlots entry: #pos atoms in cycle
    std::vector<std::vector<int>> cycPosOcc;    // atom -> cycleSlots positions using it
    std::vector<int> cycleAtoms;

    // weak machinery
    std::vector<int> weakRule;  // rule index per weak id
    std::vector<std::vector<int>> weakPosOcc, weakNegOcc;
    std::vector<int> weakPosSize, weakNegSize;

    // stratified fast path
    std::vector<int> sccOf;
    int sccCount = 0;
    std::vector<std::vector<int>> rulesOfScc;

    // working state
    std::vector<int8_t> val;
    std::vector<int> trail;
    size_t propagated = 0;
    std::vector<int> clauseSat, clauseUnassigned;
    std::vector<int> slotDead, aliveCnt;
    std::vector<int> weakPosTrue, weakNegFalse;
    std::vector<char> weakEnabled;
    uint64_t violatedNow = 0;
    bool conflict = false;
    uint64_t nodesLeft = 0;

    // gus scratch
    std::vector<int> foundedEpoch, missing;
    std::vector<int> gusStack;
    int epoch = 0;

    // results
    bool bestMode = false;
    uint64_t bestScore = 0;
    std::vector<std::vector<int>> found;
    std::map<std::vector<int>, bool> submodelMemo;

    Impl(const Program& core, const std::vector<Rule>& optional, const SolveLimits& lim)
        : limits(lim), optionalCount(optional.size()) {
        if (optional.size() > 64) {
            throwError(Error::Kind::Input, "at most 64 optional rules are supported");
        }
        requireGroundPlain(core.rules(), "stable model search");
        requireGroundPlain(optional, "stable model search");
        compile(core, optional);
    }

    // -- compilation --------------------------------------------------------

    void compile(const Program& core, const std::vector<Rule>& optional) {
        std::vector<std::pair<const Rule*, int>> source;
        for (const auto& r : core.rules()) source.push_back({&r, -1});
        for (size_t i = 0; i < optional.size(); ++i) source.push_back({&optional[i], static_cast<int>(i)});

        // Relevance closure over the full program: atoms outside it are false
        // in every stable model under every optional subset, so rules needing
        // them are dropped and negative literals on them are stripped.
        std::set<Atom> derivable;
        bool grew = true;
        while (grew) {
            grew = false;
            for (const auto& [r, opt] : source) {
                if (r->weak) continue;
                bool fire = true;
                for (const auto& lit : r->body) {
                    if (!lit.negated && !derivable.count(lit.atom)) {
                        fire = false;
                        break;
                    }
                }
                if (!fire) continue;
                for (const auto& a : r->head) {
                    if (derivable.insert(a).second) grew = true;
                }
            }
        }

        auto intern = [this](const Atom& a) {
            auto [it, fresh] = idOf.try_emplace(a, static_cast<int>(atomOf.size()));
            if (fresh) atomOf.push_back(a);
            return it->second;
        };

        for (const auto& [r, opt] : source) {
            CRule c;
            c.weak = r->weak;
            c.opt = opt;
            bool drop = false;
            std::set<Atom> headSet(r->head.begin(), r->head.end());
            std::set<Atom> posSet, negSet;
            for (const auto& lit : r->body) {
                if (lit.negated) {
                    negSet.insert(lit.atom);
                } else {
                    posSet.insert(lit.atom);
                    if (!derivable.count(lit.atom)) drop = true;
                }
            }
            for (const auto& a : posSet) {
                if (negSet.count(a)) drop = true;       // body never satisfiable
                if (headSet.count(a)) drop = true;      // satisfied whenever it fires
            }
            if (drop) continue;
            for (const auto& a : headSet) c.head.push_back(intern(a));
            for (const auto& a : posSet) c.pos.push_back(intern(a));
            for (const auto& a : negSet) {
                if (derivable.count(a)) c.neg.push_back(intern(a));
            }
            std::sort(c.head.begin(), c.head.end());
            std::sort(c.pos.begin(), c.pos.end());
            std::sort(c.neg.begin(), c.neg.end());
            rules.push_back(std::move(c));
        }

        int n = static_cast<int>(atomOf.size());
        for (const auto& c : rules) {
            if (!c.weak && c.head.size() > 1) normal = false;
        }

        buildClauses(n);
        buildSlots(n);
        buildWeak(n);
        buildCycles(n);
        buildStrata(n);

        val.assign(n, kUnknown);
        clauseSat.assign(clauseLits.size(), 0);
        clauseUnassigned.assign(clauseLits.size(), 0);
        slotDead.assign(slotRule.size(), 0);
        aliveCnt.assign(n, 0);
        weakPosTrue.assign(weakRule.size(), 0);
        weakNegFalse.assign(weakRule.size(), 0);
        weakEnabled.assign(weakRule.size(), 1);
        foundedEpoch.assign(n, 0);
        missing.assign(cycleSlots.size(), 0);
    }

    void buildClauses(int n) {
        occMatchT.assign(n, {});
        occMatchF.assign(n, {});
        for (size_t r = 0; r < rules.size(); ++r) {
            const CRule& c = rules[r];
            if (c.weak) continue;
            std::vector<Lit> lits;
            std::set<int> wantTrue;
            for (int a : c.head) wantTrue.insert(a);
            for (int a : c.neg) wantTrue.insert(a);
            for (int a : wantTrue) lits.push_back({a, true});
            for (int a : c.pos) lits.push_back({a, false});
            int ci = static_cast<int>(clauseLits.size());
            for (const Lit& l : lits) {
                (l.want ? occMatchT : occMatchF)[l.atom].push_back(ci);
            }
            clauseLits.push_back(std::move(lits));
            clauseOpt.push_back(c.opt);
        }
    }

    void buildSlots(int n) {
        slotsOfAtom.assign(n, {});
        slotPosOcc.assign(n, {});
        slotNegOcc.assign(n, {});
        slotHeadOcc.assign(n, {});
        for (size_t r = 0; r < rules.size(); ++r) {
            const CRule& c = rules[r];
            if (c.weak) continue;
            for (int target : c.head) {
                if (std::binary_search(c.pos.begin(), c.pos.end(), target)) continue;
                if (std::binary_search(c.neg.begin(), c.neg.end(), target)) continue;
                int s = static_cast<int>(slotRule.size());
                slotRule.push_back(static_cast<int>(r));
                slotTarget.push_back(target);
                slotOpt.push_back(c.opt);
                slotsOfAtom[target].push_back(s);
                for (int a : c.pos) slotPosOcc[a].push_back(s);
                for (int a : c.neg) slotNegOcc[a].push_back(s);
                for (int a : c.head) {
                    if (a != target) slotHeadOcc[a].push_back(s);
                }
            }
        }
    }

    void buildWeak(int n) {
        weakPosOcc.assign(n, {});
        weakNegOcc.assign(n, {});
        for (size_t r = 0; r < rules.size(); ++r) {
            const CRule& c = rules[r];
            if (!c.weak) continue;
            int w = static_cast<int>(weakRule.size());
            weakRule.push_back(static_cast<int>(r));
            weakPosSize.push_back(static_cast<int>(c.pos.size()));
            weakNegSize.push_back(static_cast<int>(c.neg.size()));
            for (int a : c.pos) weakPosOcc[a].push_back(w);
            for (int a : c.neg) weakNegOcc[a].push_back(w);
        }
    }

    void buildCycles(int n) {
        inCycle.assign(n, 0);
        if (!normal) return;  // unfounded propagation is only used for normal programs
        std::vector<std::vector<int>> adj(n);
        for (const CRule& c : rules) {
            if (c.weak) continue;
            for (int h : c.head) {
                for (int p : c.pos) adj[h].push_back(p);
            }
        }
        SccResult scc = tarjan(n, adj);
        std::vector<int> size(scc.count, 0);
        for (int a = 0; a < n; ++a) ++size[scc.comp[a]];
        for (int a = 0; a < n; ++a) {
            if (size[scc.comp[a]] > 1) {
                inCycle[a] = 1;
                cycleAtoms.push_back(a);
            }
        }
        cycPosOcc.assign(n, {});
        for (size_t s = 0; s < slotRule.size(); ++s) {
            if (!inCycle[slotTarget[s]]) continue;
            int ci = static_cast<int>(cycleSlots.size());
            cycleSlots.push_back(static_cast<int>(s));
            int internal = 0;
            for (int a : rules[slotRule[s]].pos) {
                if (inCycle[a]) {
                    ++internal;
                    cycPosOcc[a].push_back(ci);
                }
            }
            cycleSlotInternal.push_back(internal);
        }
    }

    void buildStrata(int n) {
        stratified = normal;
        if (!stratified) return;
        std::vector<std::vector<int>> adj(n);
        for (const CRule& c : rules) {
            if (c.weak) continue;
            for (int h : c.head) {
                for (int p : c.pos) adj[h].push_back(p);
                for (int g : c.neg) adj[h].push_back(g);
            }
        }
        SccResult scc = tarjan(n, adj);
        for (const CRule& c : rules) {
            if (c.weak || !stratified) continue;
            for (int h : c.head) {
                for (int g : c.neg) {
                    if (scc.comp[h] == scc.comp[g]) {
                        stratified = false;
                        break;
                    }
                }
            }
        }
        if (!stratified) return;
        sccOf = scc.comp;
        sccCount = scc.count;
        rulesOfScc.assign(sccCount, {});
        for (size_t r = 0; r < rules.size(); ++r) {
            if (rules[r].weak) continue;
            rulesOfScc[sccOf[rules[r].head.front()]].push_back(static_cast<int>(r));
        }
    }

    bool enabled(int opt, uint64_t mask) const {
        return opt < 0 || (mask >> opt) & 1;
    }

    // -- stratified evaluation ----------------------------------------------

    std::vector<int> stratifiedEval(uint64_t mask) {
        int n = static_cast<int>(atomOf.size());
        std::vector<char> truth(n, 0);
        for (int s = 0; s < sccCount; ++s) {
            bool changed = true;
            while (changed) {
                changed = false;
                for (int ri : rulesOfScc[s]) {
                    const CRule& c = rules[ri];
                    int h = c.head.front();
                    if (truth[h] || !enabled(c.opt, mask)) continue;
                    bool fire = true;
                    for (int p : c.pos) {
                        if (!truth[p]) {
                            fire = false;
                            break;
                        }
                    }
                    if (fire) {
                        for (int g : c.neg) {
                            if (truth[g]) {
                                fire = false;
                                break;
                            }
                        }
                    }
                    if (fire) {
                        truth[h] = 1;
                        changed = true;
                    }
                }
            }
        }
        std::vector<int> model;
        for (int a = 0; a < n; ++a) {
            if (truth[a]) model.push_back(a);
        }
        return model;
    }

    uint64_t countViolations(const std::vector<int>& model, uint64_t mask) const {
        std::vector<char> truth(atomOf.size(), 0);
        for (int a : model) truth[a] = 1;
        uint64_t v = 0;
        for (size_t w = 0; w < weakRule.size(); ++w) {
            const CRule& c = rules[weakRule[w]];
            if (!enabled(c.opt, mask)) continue;
            bool violated = true;
            for (int p : c.pos) {
                if (!truth[p]) {
                    violated = false;
                    break;
                }
            }
            if (violated) {
                for (int g : c.neg) {
                    if (truth[g]) {
                        violated = false;
                        break;
                    }
                }
            }
            if (violated) ++v;
        }
        return v;
    }

    // -- assignment and propagation -----------------------------------------

    void assign(int a, int8_t v) {
        if (val[a] != kUnknown) {
            if (val[a] != v) conflict = true;
            return;
        }
        val[a] = v;
        trail.push_back(a);
        if (v == 1 && aliveCnt[a] == 0) conflict = true;
    }

    void killSlot(int s) {
        if (slotDead[s]++ != 0) return;
        int t = slotTarget[s];
        if (--aliveCnt[t] == 0) {
            if (val[t] == 1) {
                conflict = true;
            } else if (val[t] == kUnknown) {
                assign(t, 0);
            }
        }
    }

    void reviveSlot(int s) {
        if (--slotDead[s] == 0) ++aliveCnt[slotTarget[s]];
    }

    void forceClause(int ci) {
        for (const Lit& l : clauseLits[ci]) {
            if (val[l.atom] == kUnknown) {
                assign(l.atom, l.want ? int8_t(1) : int8_t(0));
                return;
            }
        }
    }

    void applyAtom(int a) {
        int8_t v = val[a];
        const auto& match = (v == 1) ? occMatchT[a] : occMatchF[a];
        const auto& other = (v == 1) ? occMatchF[a] : occMatchT[a];
        for (int ci : match) ++clauseSat[ci];
        for (int ci : other) {
            if (--clauseUnassigned[ci] == 0 && clauseSat[ci] == 0) {
                conflict = true;
            } else if (clauseUnassigned[ci] == 1 && clauseSat[ci] == 0) {
                forceClause(ci);
            }
        }
        if (v == 1) {
            for (int s : slotNegOcc[a]) killSlot(s);
            for (int s : slotHeadOcc[a]) killSlot(s);
            for (int w : weakPosOcc[a]) {
                if (++weakPosTrue[w] == weakPosSize[w] && weakNegFalse[w] == weakNegSize[w] &&
                    weakEnabled[w]) {
                    ++violatedNow;
                }
            }
        } else {
            for (int s : slotPosOcc[a]) killSlot(s);
            for (int w : weakNegOcc[a]) {
                if (++weakNegFalse[w] == weakNegSize[w] && weakPosTrue[w] == weakPosSize[w] &&
                    weakEnabled[w]) {
                    ++violatedNow;
                }
            }
        }
    }

    void undoAtom(int a) {
        int8_t v = val[a];
        const auto& match = (v == 1) ? occMatchT[a] : occMatchF[a];
        const auto& other = (v == 1) ? occMatchF[a] : occMatchT[a];
        for (int ci : match) --clauseSat[ci];
        for (int ci : other) ++clauseUnassigned[ci];
        if (v == 1) {
            for (int s : slotNegOcc[a]) reviveSlot(s);
            for (int s : slotHeadOcc[a]) reviveSlot(s);
            for (int w : weakPosOcc[a]) {
                if (weakPosTrue[w]-- == weakPosSize[w] && weakNegFalse[w] == weakNegSize[w] &&
                    weakEnabled[w]) {
                    --violatedNow;
                }
            }
        } else {
            for (int s : slotPosOcc[a]) reviveSlot(s);
            for (int w : weakNegOcc[a]) {
                if (weakNegFalse[w]-- == weakNegSize[w] && weakPosTrue[w] == weakPosSize[w] &&
                    weakEnabled[w]) {
                    --violatedNow;
                }
            }
        }
        val[a] = kUnknown;
    }

    // Founded fixpoint over the positive-cycle atoms; everything outside a
    // positive cycle counts as externally founded while it is not false, so
    // the computation stays exact at total assignments and sound before them.
    bool gusRound() {
        if (cycleSlots.empty()) return false;
        ++epoch;
        gusStack.clear();
        auto tryFound = [this](int atom) {
            if (val[atom] == 0 || foundedEpoch[atom] == epoch) return;
            foundedEpoch[atom] = epoch;
            gusStack.push_back(atom);
        };
        for (size_t ci = 0; ci < cycleSlots.size(); ++ci) {
            if (slotDead[cycleSlots[ci]] > 0) {
                missing[ci] = -1;
                continue;
            }
            missing[ci] = cycleSlotInternal[ci];
            if (missing[ci] == 0) tryFound(slotTarget[cycleSlots[ci]]);
        }
        while (!gusStack.empty()) {
            int a = gusStack.back();
            gusStack.pop_back();
            for (int ci : cycPosOcc[a]) {
                if (missing[ci] > 0 && --missing[ci] == 0) {
                    tryFound(slotTarget[cycleSlots[ci]]);
                }
            }
        }
        bool any = false;
        for (int a : cycleAtoms) {
            if (foundedEpoch[a] == epoch || val[a] == 0) continue;
            if (val[a] == 1) {
                conflict = true;
                return false;
            }
            assign(a, 0);
            any = true;
            if (conflict) return false;
        }
        return any;
    }

    void propagate() {
        while (!conflict) {
            while (propagated < trail.size() && !conflict) {
                applyAtom(trail[propagated++]);
            }
            if (conflict || !normal) break;
            if (!gusRound()) break;
        }
    }

    void undoTo(size_t mark) {
        while (trail.size() > mark) {
            int a = trail.back();
            trail.pop_back();
            if (propagated > trail.size()) {
                propagated = trail.size();
                undoAtom(a);
            } else {
                val[a] = kUnknown;
            }
        }
        conflict = false;
    }

    // -- leaves ---------------------------------------------------------------

    bool leafStable(uint64_t mask) {
        if (normal) return true;
        Residual res;
        std::vector<int> local(atomOf.size(), -1);
        std::vector<int> trueAtoms;
        for (size_t a = 0; a < atomOf.size(); ++a) {
            if (val[a] == 1) {
                local[a] = static_cast<int>(trueAtoms.size());
                trueAtoms.push_back(static_cast<int>(a));
            }
        }
        res.n = static_cast<int>(trueAtoms.size());
        for (const CRule& c : rules) {
            if (c.weak || !enabled(c.opt, mask)) continue;
            bool skip = false;
            for (int g : c.neg) {
                if (val[g] == 1) {
                    skip = true;
                    break;
                }
            }
            if (!skip) {
                for (int p : c.pos) {
                    if (val[p] != 1) {
                        skip = true;
                        break;
                    }
                }
            }
            if (skip) continue;
            std::vector<int> h;
            bool inert = false;
            for (int a : c.head) {
                if (val[a] != 1) continue;
                if (std::binary_search(c.pos.begin(), c.pos.end(), a)) {
                    inert = true;
                    break;
                }
                h.push_back(local[a]);
            }
            if (inert) continue;
            std::vector<int> p;
            for (int a : c.pos) p.push_back(local[a]);
            res.heads.push_back(std::move(h));
            res.poss.push_back(std::move(p));
        }
        return !hasProperSubmodel(res, nodesLeft, &submodelMemo);
    }

    void onLeaf(uint64_t mask) {
        if (!leafStable(mask)) return;
        if (bestMode) {
            if (violatedNow < bestScore) {
                bestScore = violatedNow;
                found.clear();
            } else if (violatedNow > bestScore) {
                return;
            }
        }
        std::vector<int> model;
        for (size_t a = 0; a < atomOf.size(); ++a) {
            if (val[a] == 1) model.push_back(static_cast<int>(a));
        }
        found.push_back(std::move(model));
    }

    void dfs(int hint, uint64_t mask) {
        int n = static_cast<int>(atomOf.size());
        int a = hint;
        while (a < n && val[a] != kUnknown) ++a;
        if (a == n) {
            onLeaf(mask);
            return;
        }
        for (int v = 0; v < 2; ++v) {
            if (nodesLeft == 0) {
                throwError(Error::Kind::Budget, "node budget exhausted");
            }
            --nodesLeft;
            size_t mark = trail.size();
            assign(a, static_cast<int8_t>(v));
            propagate();
            if (!conflict && !(bestMode && violatedNow > bestScore)) {
                dfs(a + 1, mask);
            }
            undoTo(mark);
        }
    }

    // -- top level -------------------------------------------------------------

    void initRun(uint64_t mask) {
        int n = static_cast<int>(atomOf.size());
        std::fill(val.begin(), val.end(), kUnknown);
        trail.clear();
        propagated = 0;
        conflict = false;
        violatedNow = 0;
        nodesLeft = limits.nodeBudget;
        found.clear();
        for (size_t ci = 0; ci < clauseLits.size(); ++ci) {
            clauseSat[ci] = enabled(clauseOpt[ci], mask) ? 0 : 1;
            clauseUnassigned[ci] = static_cast<int>(clauseLits[ci].size());
        }
        for (size_t s = 0; s < slotRule.size(); ++s) {
            slotDead[s] = enabled(slotOpt[s], mask) ? 0 : 1;
        }
        std::fill(aliveCnt.begin(), aliveCnt.end(), 0);
        for (size_t s = 0; s < slotRule.size(); ++s) {
            if (slotDead[s] == 0) ++aliveCnt[slotTarget[s]];
        }
        std::fill(weakPosTrue.begin(), weakPosTrue.end(), 0);
        std::fill(weakNegFalse.begin(), weakNegFalse.end(), 0);
        for (size_t w = 0; w < weakRule.size(); ++w) {
            weakEnabled[w] = enabled(rules[weakRule[w]].opt, mask) ? 1 : 0;
            if (weakEnabled[w] && weakPosSize[w] == 0 && weakNegSize[w] == 0) ++violatedNow;
        }
        // level-zero consequences: unsupported atoms and unit clauses
        for (int a = 0; a < n; ++a) {
            if (aliveCnt[a] == 0) assign(a, 0);
        }
        for (size_t ci = 0; ci < clauseLits.size() && !conflict; ++ci) {
            if (clauseSat[ci] > 0) continue;
            if (clauseUnassigned[ci] == 0) {
                conflict = true;
            } else if (clauseUnassigned[ci] == 1) {
                forceClause(static_cast<int>(ci));
            }
        }
        propagate();
    }

    ModelSet finish() {
        ModelSet out;
        out.reserve(found.size());
        for (const auto& m : found) {
            Interpretation i;
            for (int a : m) i.insert(atomOf[a]);
            out.push_back(std::move(i));
        }
        sortModels(out);
        return out;
    }

    ModelSet run(uint64_t mask, bool best, uint64_t* score) {
        bestMode = best;
        bestScore = std::numeric_limits<uint64_t>::max();
        if (stratified) {
            std::vector<int> model = stratifiedEval(mask);
            if (score) *score = countViolations(model, mask);
            found.clear();
            found.push_back(std::move(model));
            nodesLeft = limits.nodeBudget;
            return finish();
        }
        initRun(mask);
        if (!conflict) dfs(0, mask);
        undoTo(0);
        if (score) *score = (found.empty() || bestScore == std::numeric_limits<uint64_t>::max())
                                ? 0
                                : bestScore;
        return finish();
    }
};

StableEngine::StableEngine(const Program& core, const std::vector<Rule>& optional,
                           const SolveLimits& limits)
    : impl_(std::make_unique<Impl>(core, optional, limits)) {}

StableEngine::~StableEngine() = default;
StableEngine::StableEngine(StableEngine&&) noexcept = default;
StableEngine& StableEngine::operator=(StableEngine&&) noexcept = default;

ModelSet StableEngine::solve(uint64_t enabledMask) { return impl_->run(enabledMask, false, nullptr); }

BestModels StableEngine::best(uint64_t enabledMask) {
    BestModels out;
    uint64_t score = 0;
    out.models = impl_->run(enabledMask, true, &score);
    out.violations = out.models.empty() ? 0 : score;
    return out;
}

// ---------------------------------------------------------------------------
// Free functions
// ---------------------------------------------------------------------------

Program reduct(const Program& p, const Interpretation& i) {
    requireGroundPlain(p.rules(), "reduct");
    std::vector<Rule> out;
    for (const auto& r : p.rules()) {
        if (r.weak) continue;
        bool blocked = false;
        Rule keep;
        keep.head = r.head;
        for (const auto& lit : r.body) {
            if (lit.negated) {
                if (i.count(lit.atom)) {
                    blocked = true;
                    break;
                }
            } else {
                keep.body.push_back(lit);
            }
        }
        if (!blocked) out.push_back(std::move(keep));
    }
    return Program(std::move(out));
}

static void requirePositive(const Program& p, bool normalOnly, const char* what) {
    for (const auto& r : p.rules()) {
        if (r.weak) continue;
        if (normalOnly && r.head.size() != 1) {
            throwError(Error::Kind::Input, std::string(what) + " requires singleton rule heads, got '" +
                                               r.str() + "'");
        }
        for (const auto& lit : r.body) {
            if (lit.negated) {
                throwError(Error::Kind::Input, std::string(what) + " requires a positive program, got '" +
                                                   r.str() + "'");
            }
        }
    }
}

Interpretation minimalModel(const Program& p) {
    requireGroundPlain(p.rules(), "minimal model");
    requirePositive(p, true, "minimal model");
    return leastModel(p.rules());
}

ModelSet minimalModels(const Program& p, const SolveLimits& limits) {
    requireGroundPlain(p.rules(), "minimal models");
    requirePositive(p, false, "minimal models");
    bool normal = true;
    for (const auto& r : p.rules()) {
        if (!r.weak && r.head.size() != 1) normal = false;
    }
    if (normal) return {leastModel(p.rules())};
    StableEngine engine(p, {}, limits);
    return engine.solve(0);
}

bool isStable(const Program& p, const Interpretation& i, const SolveLimits& limits) {
    requireGroundPlain(p.rules(), "stability check");
    if (!isModelOf(p.rules(), i)) return false;
    bool normal = true;
    std::vector<Rule> red;
    for (const auto& r : p.rules()) {
        if (r.weak) continue;
        if (r.head.size() != 1) normal = false;
        bool blocked = false;
        Rule keep;
        keep.head = r.head;
        for (const auto& lit : r.body) {
            if (lit.negated) {
                if (i.count(lit.atom)) {
                    blocked = true;
                    break;
                }
            } else {
                keep.body.push_back(lit);
            }
        }
        if (!blocked) red.push_back(std::move(keep));
    }
    if (normal) return leastModel(red) == i;

    std::vector<Atom> trueAtoms(i.begin(), i.end());
    std::map<Atom, int> local;
    for (size_t k = 0; k < trueAtoms.size(); ++k) local[trueAtoms[k]] = static_cast<int>(k);
    Residual res;
    res.n = static_cast<int>(trueAtoms.size());
    for (const auto& r : red) {
        bool skip = false;
        for (const auto& lit : r.body) {
            if (!i.count(lit.atom)) {
                skip = true;
                break;
            }
        }
        if (skip) continue;
        std::vector<int> h, pos;
        bool inert = false;
        std::set<Atom> posSet;
        for (const auto& lit : r.body) posSet.insert(lit.atom);
        for (const auto& a : r.head) {
            if (!i.count(a)) continue;
            if (posSet.count(a)) {
                inert = true;
                break;
            }
            h.push_back(local[a]);
        }
        if (inert) continue;
        for (const auto& a : posSet) pos.push_back(local[a]);
        res.heads.push_back(std::move(h));
        res.poss.push_back(std::move(pos));
    }
    uint64_t nodesLeft = limits.nodeBudget;
    return !hasProperSubmodel(res, nodesLeft, nullptr);
}

ModelSet bruteForceStableModels(const Program& p, const SolveLimits& limits) {
    Program g = ground(p);
    std::set<Atom> base;
    for (const auto& r : g.rules()) {
        if (r.weak) continue;
        for (const auto& a : r.head) base.insert(a);
        for (const auto& lit : r.body) base.insert(lit.atom);
    }
    if (base.size() > limits.bruteForceAtomCap) {
        throwError(Error::Kind::Input, "Herbrand base of " + std::to_string(base.size()) +
                                           " atoms exceeds the brute-force cap of " +
                                           std::to_string(limits.bruteForceAtomCap));
    }
    std::vector<Atom> atoms(base.begin(), base.end());
    std::map<Atom, int> id;
    for (size_t k = 0; k < atoms.size(); ++k) id[atoms[k]] = static_cast<int>(k);
    struct BRule {
        uint64_t head = 0, pos = 0, neg = 0;
    };
    std::vector<BRule> rs;
    bool normal = true;
    for (const auto& r : g.rules()) {
        if (r.weak) continue;
        BRule b;
        for (const auto& a : r.head) b.head |= uint64_t(1) << id[a];
        for (const auto& lit : r.body) {
            (lit.negated ? b.neg : b.pos) |= uint64_t(1) << id[lit.atom];
        }
        if (r.head.size() != 1) normal = false;
        rs.push_back(b);
    }
    ModelSet out;
    uint64_t full = (atoms.size() == 64) ? ~uint64_t(0) : ((uint64_t(1) << atoms.size()) - 1);
    for (uint64_t m = 0;; ++m) {
        bool model = true;
        for (const auto& b : rs) {
            if ((b.pos & m) == b.pos && (b.neg & m) == 0 && (b.head & m) == 0) {
                model = false;
                break;
            }
        }
        if (model) {
            bool stable;
            if (normal) {
                uint64_t lfp = 0;
                bool changed = true;
                while (changed) {
                    changed = false;
                    for (const auto& b : rs) {
                        if ((b.neg & m) == 0 && (b.pos & lfp) == b.pos && (b.head & lfp) == 0) {
                            lfp |= b.head;
                            changed = true;
                        }
                    }
                }
                stable = (lfp == m);
            } else {
                stable = true;
                for (uint64_t s = (m - 1) & m;; s = (s - 1) & m) {
                    bool sub = true;
                    for (const auto& b : rs) {
                        if ((b.neg & m) == 0 && (b.pos & s) == b.pos && (b.head & s) == 0) {
                            sub = false;
                            break;
                        }
                    }
                    if (sub && s != m) {
                        stable = false;
                        break;
                    }
                    if (s == 0) break;
                }
            }
            if (stable) {
                Interpretation i;
                for (size_t k = 0; k < atoms.size(); ++k) {
                    if ((m >> k) & 1) i.insert(atoms[k]);
                }
                out.push_back(std::move(i));
            }
        }
        if (m == full) break;
    }
    sortModels(out);
    return out;
}

ModelSet stableModels(const Program& p, const SolveLimits& limits) {
    Program g = ground(p);
    StableEngine engine(g, {}, limits);
    return engine.solve(0);
}

Interpretation stratifiedModel(const Program& p) {
    requireGroundPlain(p.rules(), "stratified evaluation");
    std::set<Atom> base;
    for (const auto& r : p.rules()) {
        if (r.weak) continue;
        if (r.head.size() != 1) {
            throwError(Error::Kind::Input, "program is not stratified: disjunctive rule '" + r.str() + "'");
        }
        for (const auto& a : r.head) base.insert(a);
        for (const auto& lit : r.body) base.insert(lit.atom);
    }
    std::vector<Atom> atoms(base.begin(), base.end());
    std::map<Atom, int> id;
    for (size_t k = 0; k < atoms.size(); ++k) id[atoms[k]] = static_cast<int>(k);
    int n = static_cast<int>(atoms.size());
    std::vector<std::vector<int>> adj(n);
    for (const auto& r : p.rules()) {
        if (r.weak) continue;
        int h = id[r.head.front()];
        for (const auto& lit : r.body) adj[h].push_back(id[lit.atom]);
    }
    SccResult scc = tarjan(n, adj);
    for (const auto& r : p.rules()) {
        if (r.weak) continue;
        int h = id[r.head.front()];
        for (const auto& lit : r.body) {
            if (lit.negated && scc.comp[id[lit.atom]] == scc.comp[h]) {
                throwError(Error::Kind::Input,
                           "program is not stratified: negative recursion through '" +
                               lit.atom.str() + "'");
            }
        }
    }
    std::vector<std::vector<const Rule*>> rulesOfScc(scc.count);
    for (const auto& r : p.rules()) {
        if (r.weak) continue;
        rulesOfScc[scc.comp[id[r.head.front()]]].push_back(&r);
    }
    std::vector<char> truth(n, 0);
    for (int s = 0; s < scc.count; ++s) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const Rule* r : rulesOfScc[s]) {
                int h = id[r->head.front()];
                if (truth[h]) continue;
                bool fire = true;
                for (const auto& lit : r->body) {
                    bool in = truth[id[lit.atom]] != 0;
                    if (lit.negated ? in : !in) {
                        fire = false;
                        break;
                    }
                }
                if (fire) {
                    truth[h] = 1;
                    changed = true;
                }
            }
        }
    }
    Interpretation m;
    for (int a = 0; a < n; ++a) {
        if (truth[a]) m.insert(atoms[a]);
    }
    return m;
}

bool entails(const Program& p, const std::vector<Rule>& items, Polarity polarity, Semantics sem,
             const SolveLimits& limits) {
    for (const auto& item : items) {
        if (item.weak || !item.ground()) {
            throwError(Error::Kind::Input, "observation items must be ground non-weak rules, got '" +
                                               item.str() + "'");
        }
        for (const auto& lit : item.body) {
            if (lit.isBuiltin()) {
                throwError(Error::Kind::Input, "observation items must be builtin-free, got '" +
                                                   item.str() + "'");
            }
        }
    }
    ModelSet ms = stableModels(p, limits);
    if (ms.empty()) return sem == Semantics::Cautious;
    auto holds = [&](const Interpretation& m) {
        for (const auto& item : items) {
            bool body = bodyHolds(item, m);
            bool head = headHolds(item, m);
            bool ok = (polarity == Polarity::Positive) ? (!body || head) : (body && !head);
            if (!ok) return false;
        }
        return true;
    };
    if (sem == Semantics::Brave) {
        for (const auto& m : ms) {
            if (holds(m)) return true;
        }
        return false;
    }
    for (const auto& m : ms) {
        if (!holds(m)) return false;
    }
    return true;
}

BestModels bestStableModels(const Program& p, const SolveLimits& limits) {
    Program g = ground(p);
    StableEngine engine(g, {}, limits);
    return engine.best(0);
}

}  // namespace rodeo
