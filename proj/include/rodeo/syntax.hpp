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
#ifndef RODEO_SYNTAX_HPP_INCLUDED
#define RODEO_SYNTAX_HPP_INCLUDED

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rodeo {

//! Library-wide error with a kind the CLI maps onto exit codes.
class Error : public std::runtime_error {
public:
    enum class Kind {
        Parse,  //!< malformed input text
        Input,  //!< semantic precondition violated (arity, safety, mode, ...)
        Budget  //!< a configured cap or search budget was exhausted
    };
    Error(Kind k, const std::string& msg) : std::runtime_error(msg), kind_(k) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

[[noreturn]] inline void throwError(Error::Kind k, const std::string& msg) { throw Error(k, msg); }

//! A term is a symbolic constant, a variable, or an integer constant.
struct Term {
    enum class Kind : uint8_t { Constant, Variable, Integer };

    Kind kind = Kind::Constant;
    std::string text;     // constant or variable name
    long long value = 0;  // integer payload

    static Term constant(std::string name) { return {Kind::Constant, std::move(name), 0}; }
    static Term variable(std::string name) { return {Kind::Variable, std::move(name), 0}; }
    static Term integer(long long v) { return {Kind::Integer, {}, v}; }

    bool isVar() const { return kind == Kind::Variable; }
    std::string str() const;

    auto operator<=>(const Term&) const = default;
};

struct Atom {
    std::string pred;
    std::vector<Term> args;

    size_t arity() const { return args.size(); }
    bool ground() const;
    std::string str() const;

    auto operator<=>(const Atom&) const = default;
};

enum class Cmp : uint8_t { Eq, Ne, Lt, Gt, Le, Ge };

const char* cmpText(Cmp c);

//! One body element: a possibly negated atom, or a comparison builtin.
struct BodyLiteral {
    enum class Kind : uint8_t { Atom, Builtin };

    Kind kind = Kind::Atom;
    bool negated = false;  // only meaningful for atoms
    Atom atom;
    Cmp cmp = Cmp::Eq;
    Term lhs, rhs;

    static BodyLiteral pos(Atom a) { return {Kind::Atom, false, std::move(a), Cmp::Eq, {}, {}}; }
    static BodyLiteral neg(Atom a) { return {Kind::Atom, true, std::move(a), Cmp::Eq, {}, {}}; }
    static BodyLiteral builtin(Cmp c, Term l, Term r) {
        return {Kind::Builtin, false, {}, c, std::move(l), std::move(r)};
    }

    bool isAtom() const { return kind == Kind::Atom; }
    bool isBuiltin() const { return kind == Kind::Builtin; }
    bool ground() const;
    std::string str() const;

    auto operator<=>(const BodyLiteral&) const = default;
};

//! A rule `a1 v ... v am :- body.`, a fact, or a weak constraint `:~ body.`
//! Invariants: weak rules have an empty head, regular rules a non-empty one.
struct Rule {
    std::vector<Atom> head;
    std::vector<BodyLiteral> body;
    bool weak = false;

    static Rule fact(Atom a) { return {{std::move(a)}, {}, false}; }

    bool isFact() const { return !weak && head.size() == 1 && body.empty(); }
    bool ground() const;
    bool hasNegation() const;
    std::string str() const;

    auto operator<=>(const Rule&) const = default;
};

enum class ProgramClass : uint8_t { Positive, Stratified, Normal, Disjunctive };

const char* programClassText(ProgramClass c);

//! An immutable set of rules. Construction validates structural invariants
//! (head shapes, arity consistency) and computes the classification and the
//! Herbrand universe once; instances are safe to share across threads.
class Program {
public:
    Program() = default;
    explicit Program(std::vector<Rule> rules);

    const std::vector<Rule>& rules() const { return rules_; }
    bool empty() const { return rules_.empty(); }
    bool ground() const { return ground_; }
    ProgramClass classification() const { return class_; }
    //! All constants occurring in the program, plus one fresh constant when
    //! the program has variables but no constants of its own.
    const std::vector<Term>& universe() const { return universe_; }

    bool operator==(const Program&) const;

private:
    std::vector<Rule> rules_;
    std::vector<Term> universe_;
    ProgramClass class_ = ProgramClass::Positive;
    bool ground_ = true;
};

//! Classification of a bare rule set; Program caches this at construction.
//! Ground programs are read propositionally: each ground atom is its own
//! dependency node, and instances whose positive body can never be derived
//! are ignored. Non-ground programs use the predicate dependency graph.
ProgramClass classifyRules(const std::vector<Rule>& rules);

enum class Semantics : uint8_t { Brave, Cautious };
enum class ObsMode : uint8_t { Basic, Extended };

//! A rule component plus an ordered list of trusted observations.
//! Basic mode: observations are ground facts. Extended mode: ground facts or
//! ground rules. Observation order is the canonical index order used by
//! reports, rewritings, and the CLI.
struct RuleObservationPair {
    Program rules;
    std::vector<Rule> observations;
    ObsMode mode = ObsMode::Basic;
};

//! Validates and builds a pair. Errors: non-ground or weak observation items,
//! non-fact items in basic mode, duplicate items, arity conflicts with the
//! rule component, weak constraints in the rule component.
RuleObservationPair attachObservations(Program rules, std::vector<Rule> observations,
                                       ObsMode mode = ObsMode::Basic);

enum class ReportSource : uint8_t { Naive, Rewriting };

//! One detected outlier with one witness, both as sorted observation indices.
struct OutlierReport {
    std::vector<size_t> outlier;
    std::vector<size_t> witness;
    Semantics semantics = Semantics::Cautious;
    ReportSource source = ReportSource::Naive;
    //! Cautious condition (1) held only because the witness-reduced program
    //! has no stable model at all.
    bool vacuousCondition1 = false;

    auto operator<=>(const OutlierReport&) const = default;
};

//! Validating constructor for reports built outside the detector.
//! Errors: index out of range, empty witness, overlapping sets.
OutlierReport makeReport(const RuleObservationPair& pair, std::vector<size_t> outlier,
                         std::vector<size_t> witness, Semantics sem,
                         ReportSource source = ReportSource::Naive);

//! Renders the indexed observation items of a report, e.g. for CLI output.
std::vector<std::string> renderItems(const RuleObservationPair& pair,
                                     const std::vector<size_t>& indices);

}  // namespace rodeo

#endif
