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
#ifndef RODEO_GROUND_HPP_INCLUDED
#define RODEO_GROUND_HPP_INCLUDED

#include "rodeo/syntax.hpp"

namespace rodeo {

// Evaluates a comparison on ground terms. Equality across term kinds is
// false (and inequality true); ordering comparisons require integer operands
// on both sides and throw Error::Kind::Input otherwise.
bool evalBuiltin(Cmp cmp, const Term& lhs, const Term& rhs);

// Throws Error::Kind::Input unless every variable of every rule occurs in a
// positive non-builtin body literal of that rule.
void checkSafety(const Program& p);

// Relevance-aware grounding. Ground rules are kept verbatim; each rule with
// variables is replaced by its instances over the atoms derivable from the
// program (plus `seeds`), with satisfied builtins dropped and unsatisfiable
// instances discarded. Instances are grouped by source rule and sorted
// within each group, so grounding a ground program is the identity.
// Throws Error::Kind::Input on unsafe rules.
Program ground(const Program& p, const std::vector<Atom>& seeds = {});

// Grounds the rule component of a pair, seeding relevance with the head
// atoms of the observation items so that every instance needed under any
// subset of observations is produced. Observation items are ground already
// and pass through untouched.
RuleObservationPair groundPair(const RuleObservationPair& pair);

}  // namespace rodeo

#endif
