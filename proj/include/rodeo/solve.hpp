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
#ifndef RODEO_SOLVE_HPP_INCLUDED
#define RODEO_SOLVE_HPP_INCLUDED

#include <cstdint>
#include <memory>
#include <set>

#include "rodeo/syntax.hpp"

namespace rodeo {

using Interpretation = std::set<Atom>;

// Canonically ordered: atoms inside a model follow Atom ordering, models are
// sorted as atom lists, duplicates removed.
using ModelSet = std::vector<Interpretation>;

struct SolveLimits {
    // Decisions granted to one search, counting nested minimality checks.
    uint64_t nodeBudget = 50'000'000;
    // Herbrand base cap for the exhaustive oracle.
    size_t bruteForceAtomCap = 22;
};

// Gelfond-Lifschitz reduct: rules blocked by a true negated atom are deleted,
// the remaining negative literals are stripped. Weak constraints are dropped;
// they never take part in reduction. Requires a ground builtin-free program.
Program reduct(const Program& p, const Interpretation& i);

// Least model of a positive normal ground program.
Interpretation minimalModel(const Program& p);

// All subset-minimal models of a positive ground program, disjunctive heads
// allowed. Weak constraints are ignored.
ModelSet minimalModels(const Program& p, const SolveLimits& limits = {});

// Exact stability test against the definition; weak constraints are ignored.
bool isStable(const Program& p, const Interpretation& i, const SolveLimits& limits = {});

// Exhaustive oracle: every subset of the Herbrand base is tested. Grounds
// its input first; throws Error::Kind::Input above bruteForceAtomCap atoms.
ModelSet bruteForceStableModels(const Program& p, const SolveLimits& limits = {});

// Production enumerator. Grounds its input first; agrees with the oracle on
// every program within the oracle cap. Throws Error::Kind::Budget when the
// node budget runs out.
ModelSet stableModels(const Program& p, const SolveLimits& limits = {});

// Unique stable model of a stratified (or positive normal) ground program,
// computed stratum by stratum.
Interpretation stratifiedModel(const Program& p);

enum class Polarity : uint8_t { Positive, Negated };

// Brave/cautious entailment of a conjunction of observation items. An item
// (a ground fact or rule) is true in a model when the model satisfies it and
// false when the body holds but the head does not. Positive polarity asks
// for every item true, negated polarity for every item false; brave asks for
// some stable model, cautious for all of them. With no stable models at all,
// cautious queries hold vacuously and brave queries fail.
bool entails(const Program& p, const std::vector<Rule>& items, Polarity polarity, Semantics sem,
             const SolveLimits& limits = {});

struct BestModels {
    ModelSet models;
    // Weak-constraint violations in each best model; zero when models is
    // empty or the program has no weak constraints.
    uint64_t violations = 0;
};

// Stable models minimizing the number of violated weak constraints.
BestModels bestStableModels(const Program& p, const SolveLimits& limits = {});

// Reusable search instance over a fixed rule set plus optional rules that
// can be switched per call; built once, solved under many subsets. The
// detector grounds a pair, passes the observation items as the optional
// rules, and enumerates removal subsets without recompiling.
class StableEngine {
public:
    // Both the core program and every optional rule must be ground and
    // builtin-free. At most 64 optional rules.
    StableEngine(const Program& core, const std::vector<Rule>& optional,
                 const SolveLimits& limits = {});
    ~StableEngine();
    StableEngine(StableEngine&&) noexcept;
    StableEngine& operator=(StableEngine&&) noexcept;

    // Stable models of core plus the optional rules whose bit is set.
    ModelSet solve(uint64_t enabledMask);

    // Best stable models of the same program selection.
    BestModels best(uint64_t enabledMask);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace rodeo

#endif
