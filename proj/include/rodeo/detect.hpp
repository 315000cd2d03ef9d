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
#ifndef RODEO_DETECT_HPP_INCLUDED
#define RODEO_DETECT_HPP_INCLUDED

#include <optional>

#include "rodeo/solve.hpp"
#include "rodeo/syntax.hpp"

namespace rodeo {

//! Caps for the naive detector. Enumeration over candidate sets is inherently
//! exponential, so oversized inputs fail loudly instead of hanging.
struct DetectLimits {
    //! Maximum observation count for searches whose outlier size is unbounded.
    size_t enumerationCap = 16;
    //! Total candidate (outlier, witness) evaluations across one query.
    uint64_t checkCap = 200'000'000;
    SolveLimits solve;
};

//! One detection request. maxOutlierSize, when set, restricts the search to
//! outliers with at most that many items and lifts the enumerationCap check
//! (the hard limit of 32 observation items still applies).
struct DetectionQuery {
    RuleObservationPair pair;
    Semantics semantics = Semantics::Brave;
    std::optional<size_t> maxOutlierSize;
    DetectLimits limits;
};

//! Result of a minimum-size search: the minimum outlier size over all
//! reports (absent when the pair has no outliers at all), plus one report
//! per outlier of that size, each paired with its canonically first witness.
struct MinResult {
    std::optional<size_t> minSize;
    std::vector<OutlierReport> reports;
};

//! Decides whether (outlier, witness) satisfies the outlier conditions:
//! witness nonempty, sets disjoint, removing the witness makes every witness
//! item false under `sem`, and additionally removing the outlier breaks that.
//! Items are observation indices; both basic and extended pairs are accepted.
//! Under cautious semantics the first condition can hold only because the
//! witness-reduced program has no stable model; `vacuousCondition1`, when
//! non-null, is set to true in exactly that case.
//! Errors: index out of range or duplicated (Input), caps (Budget).
bool checkOw(const RuleObservationPair& pair, const std::vector<size_t>& outlier,
             const std::vector<size_t>& witness, Semantics sem, const DetectLimits& limits = {},
             bool* vacuousCondition1 = nullptr);

//! Enumerates every (outlier, witness) report of the pair, ordered by
//! outlier size, then witness size, then index-lexicographically.
//! Errors: enumerationCap exceeded without a size bound (Budget).
std::vector<OutlierReport> findOutliers(const DetectionQuery& q);

//! True iff the pair admits at least one outlier; stops at the first hit.
bool existsOutlier(const DetectionQuery& q);

//! Finds the canonically first outlier set witnessed by `witness` (size at
//! most `maxOutlierSize` when given), or nullopt if `witness` witnesses none.
std::optional<std::vector<size_t>> witnessCheck(const RuleObservationPair& pair,
                                                const std::vector<size_t>& witness, Semantics sem,
                                                std::optional<size_t> maxOutlierSize = {},
                                                const DetectLimits& limits = {});

//! Finds the canonically first witness for `outlier`, or nullopt if
//! `outlier` is not an outlier of the pair.
std::optional<std::vector<size_t>> outlierCheck(const RuleObservationPair& pair,
                                                const std::vector<size_t>& outlier, Semantics sem,
                                                const DetectLimits& limits = {});

//! Computes the minimum outlier size and one report per minimum-size
//! outlier. A maxOutlierSize in `q` bounds the searched sizes.
MinResult minOutliers(const DetectionQuery& q);

//! Counts distinct outlier sets admitting at least one witness, or distinct
//! (outlier, witness) pairs when `countPairs` is set.
uint64_t countOutliers(const RuleObservationPair& pair, Semantics sem, bool countPairs = false,
                       const DetectLimits& limits = {});

}  // namespace rodeo

#endif
