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
#ifndef RODEO_REWRITE_HPP_INCLUDED
#define RODEO_REWRITE_HPP_INCLUDED

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "rodeo/solve.hpp"
#include "rodeo/syntax.hpp"

namespace rodeo {

//! Vocabulary of atoms generated by the rewritings. Every generated predicate
//! starts with the reserved prefix "rw_"; inputs that already use the prefix
//! are rejected so mangling stays injective. Observation indices are 1-based.
struct RewriteNames {
    //! Reserved predicate prefix. No input atom may use it.
    static constexpr const char* prefix = "rw_";

    //! First renamed copy of a user atom, and its complement.
    static Atom c1(const Atom& a);
    static Atom c1Bar(const Atom& a);
    //! Second renamed copy of a user atom.
    static Atom c2(const Atom& a);
    //! Outlier membership guess for observation i, and its complement.
    static Atom o(std::size_t i);
    static Atom oBar(std::size_t i);
    //! Witness membership guess for observation i, and its complement.
    static Atom w(std::size_t i);
    static Atom wBar(std::size_t i);
    //! Level assignment "atom a has level value" in the minimality check.
    static Atom phi(const Atom& a, std::size_t value);
    //! Rule assignment "atom a is derived by its index-th defining rule".
    static Atom ruleChoice(const Atom& a, std::size_t index);
    //! Saturation and checking flags.
    static Atom satC1();
    static Atom satC1At(std::size_t i);
    static Atom satC2();
    static Atom badC1();
    static Atom s1();
    static Atom s2();
    static Atom s3();
    static Atom s();
};

//! Origin of a generated atom, recovered by demangle().
struct DemangledAtom {
    enum class Kind {
        CopyC1,
        CopyC1Bar,
        CopyC2,
        Outlier,
        OutlierBar,
        Witness,
        WitnessBar,
        Phi,
        RuleChoice,
        SatC1,
        SatC1At,
        SatC2,
        BadC1,
        S1,
        S2,
        S3,
        S,
    };

    Kind kind;
    //! User atom behind a copy, level, or rule-choice atom.
    std::optional<Atom> original;
    //! Observation index, level value, or defining-rule index.
    std::size_t index = 0;
};

//! Recovers the origin of a generated atom. Returns nullopt for atoms that
//! no RewriteNames builder produces.
std::optional<DemangledAtom> demangle(const Atom& a);

//! Rewrites a basic pair whose rule component is stratified into a normal
//! ground program whose stable models are exactly the outlier-witness pairs:
//! decoding a stable model yields an outlier O with witness W, and every such
//! (O, W) arises from some stable model. Grounds the pair first. Rejects
//! extended pairs, pairs using the reserved prefix, and rule components that
//! are not stratified.
Program rewriteStratified(const RuleObservationPair& pair);

//! Rewrites a basic pair with a normal rule component into a disjunctive
//! ground saturation program whose stable models decode to exactly the
//! outlier-witness pairs under cautious semantics. Grounds the pair first.
//! Rejects extended pairs, reserved-prefix atoms, and disjunctive rule
//! components. The per-observation satisfaction rule derives from the witness
//! flag together with the complemented observation copy, and an atom with no
//! defining rule contributes a direct saturation rule in place of an empty
//! rule-choice disjunction.
Program rewriteGeneralCautious(const RuleObservationPair& pair);

//! Appends one weak constraint per observation penalizing its outlier flag.
//! Best stable models of the result decode to the minimum-size outliers.
Program addMinConstraints(const Program& rewritten, const RuleObservationPair& pair);

//! Projects a stable model of a rewritten program onto observation indices:
//! first the outliers (observations whose outlier flag is in m), then the
//! witnesses. Both lists are sorted.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> decodeModel(
    const Interpretation& m, const RuleObservationPair& pair);

//! Certificate that a model of a positive normal ground program is minimal:
//! a level for every atom of the program and a defining rule for every atom
//! of the model.
struct MinimalityCertificate {
    //! Level assignment, values in 1..s for s distinct atoms.
    std::map<Atom, std::size_t> phi;
    //! Chosen defining rule per model atom.
    std::map<Atom, Rule> ruleChoice;
};

//! Checks the certificate conditions: every atom p of m has a chosen rule
//! whose head is p, whose body atoms all lie in m, and whose body atoms all
//! have strictly smaller levels than p. A model of a positive normal ground
//! program is minimal exactly when it is a model and such a certificate
//! exists. Rejects programs that are not positive, normal, and ground.
bool checkMinimalityCertificate(const Program& p, const Interpretation& m,
                                const MinimalityCertificate& cert);

}  // namespace rodeo

#endif  // RODEO_REWRITE_HPP_INCLUDED
