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
#include "rodeo/detect.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <set>

#include "rodeo/ground.hpp"

namespace rodeo {

namespace {

// Enumeration over unbounded candidate sets is capped at 32 items; beyond
// that even a single witness sweep is out of reach for the naive detector.
constexpr size_t kMaxEnumerableItems = 32;

std::vector<size_t> canonicalIndices(const RuleObservationPair& pair, std::vector<size_t> xs,
                                     const char* what) {
    std::sort(xs.begin(), xs.end());
    if (std::adjacent_find(xs.begin(), xs.end()) != xs.end()) {
        throwError(Error::Kind::Input, std::string("duplicate ") + what + " item");
    }
    for (size_t i : xs) {
        if (i >= pair.observations.size()) {
            throwError(Error::Kind::Input, std::string(what) + " index out of range");
        }
    }
    return xs;
}

uint64_t maskOf(const std::vector<size_t>& xs) {
    uint64_t m = 0;
    for (size_t i : xs) m |= uint64_t(1) << i;
    return m;
}

std::vector<size_t> indicesOf(uint64_t mask) {
    std::vector<size_t> xs;
    for (size_t i = 0; mask; ++i, mask >>= 1) {
        if (mask & 1) xs.push_back(i);
    }
    return xs;
}

// Visits the size-s subsets of pool (ascending indices) in lexicographic
// order until the visitor returns true; reports whether it did.
template <typename F>
bool forEachCombination(const std::vector<size_t>& pool, size_t s, F&& visit) {
    if (s > pool.size()) return false;
    std::vector<size_t> at(s);
    std::iota(at.begin(), at.end(), size_t{0});
    std::vector<size_t> chosen(s);
    for (;;) {
        for (size_t i = 0; i < s; ++i) chosen[i] = pool[at[i]];
        if (visit(chosen)) return true;
        size_t i = s;
        while (i > 0 && at[i - 1] == pool.size() - (s - i) - 1) --i;
        if (i == 0) return false;
        ++at[i - 1];
        for (size_t j = i; j < s; ++j) at[j] = at[j - 1] + 1;
    }
}

const RuleObservationPair& requireMaskable(const RuleObservationPair& pair) {
    if (pair.observations.size() > 64) {
        throwError(Error::Kind::Budget, "more than 64 observation items");
    }
    return pair;
}

// Shared evaluation state for one query: the pair grounded once, a stable
// engine with the observation items as switchable rules, and caches keyed by
// the removed-items mask. Removing a candidate set never changes the ground
// rule instances (removal only shrinks the program), so one grounding serves
// every candidate.
class Detector {
public:
    Detector(const RuleObservationPair& pair, Semantics sem, const DetectLimits& limits)
        : sem_(sem),
          checksLeft_(limits.checkCap),
          grounded_(groundPair(requireMaskable(pair))),
          n_(grounded_.observations.size()),
          fullMask_(n_ >= 64 ? ~uint64_t(0) : (uint64_t(1) << n_) - 1),
          engine_(grounded_.rules, grounded_.observations, limits.solve) {}

    size_t size() const { return n_; }
    uint64_t fullMask() const { return fullMask_; }

    // Condition (1): with the witness removed, every witness item is false
    // under the semantics. `vacuous` reports the degenerate cautious case
    // where the reduced program has no stable model at all.
    bool condition1(uint64_t wMask, bool& vacuous) {
        auto it = cond1Cache_.find(wMask);
        if (it == cond1Cache_.end()) {
            charge();
            const std::vector<uint64_t>& vs = violated(wMask);
            bool holds = false;
            bool vac = false;
            if (sem_ == Semantics::Cautious) {
                holds = std::all_of(vs.begin(), vs.end(),
                                    [&](uint64_t v) { return (v & wMask) == wMask; });
                vac = holds && vs.empty();
            } else {
                holds = std::any_of(vs.begin(), vs.end(),
                                    [&](uint64_t v) { return (v & wMask) == wMask; });
            }
            it = cond1Cache_.emplace(wMask, std::make_pair(holds, vac)).first;
        }
        vacuous = it->second.second;
        return it->second.first;
    }

    // Both outlier conditions for one candidate; false on an empty witness
    // or overlapping sets.
    bool check(uint64_t oMask, uint64_t wMask, bool& vacuous) {
        vacuous = false;
        if (wMask == 0 || (oMask & wMask) != 0) return false;
        bool vac = false;
        if (!condition1(wMask, vac)) return false;
        charge();
        const std::vector<uint64_t>& vs = violated(wMask | oMask);
        bool still = sem_ == Semantics::Cautious
                         ? std::all_of(vs.begin(), vs.end(),
                                       [&](uint64_t v) { return (v & wMask) == wMask; })
                         : std::any_of(vs.begin(), vs.end(),
                                       [&](uint64_t v) { return (v & wMask) == wMask; });
        if (still) return false;
        vacuous = vac;
        return true;
    }

private:
    void charge() {
        if (checksLeft_ == 0) {
            throwError(Error::Kind::Budget, "candidate check cap exceeded");
        }
        --checksLeft_;
    }

    // Stable models of the pair minus the removed items, projected to one
    // bitmask per model marking which observation items the model falsifies.
    const std::vector<uint64_t>& violated(uint64_t removed) {
        auto it = violatedCache_.find(removed);
        if (it != violatedCache_.end()) return it->second;
        ModelSet models = engine_.solve(fullMask_ & ~removed);
        std::vector<uint64_t> vs;
        vs.reserve(models.size());
        for (const Interpretation& m : models) {
            uint64_t v = 0;
            for (size_t i = 0; i < n_; ++i) {
                if (itemViolated(grounded_.observations[i], m)) v |= uint64_t(1) << i;
            }
            vs.push_back(v);
        }
        return violatedCache_.emplace(removed, std::move(vs)).first->second;
    }

    // An item is false in a model when its body holds and no head atom does.
    static bool itemViolated(const Rule& item, const Interpretation& m) {
        for (const Atom& a : item.head) {
            if (m.count(a) > 0) return false;
        }
        for (const BodyLiteral& lit : item.body) {
            bool in = m.count(lit.atom) > 0;
            if (lit.negated ? in : !in) return false;
        }
        return true;
    }

    Semantics sem_;
    uint64_t checksLeft_;
    RuleObservationPair grounded_;
    size_t n_;
    uint64_t fullMask_;
    StableEngine engine_;
    std::map<uint64_t, std::vector<uint64_t>> violatedCache_;
    std::map<uint64_t, std::pair<bool, bool>> cond1Cache_;
};

void requireEnumerable(size_t items, std::optional<size_t> sizeBound, const DetectLimits& limits) {
    if (items > kMaxEnumerableItems) {
        throwError(Error::Kind::Budget, "more than 32 observation items for enumeration");
    }
    if (!sizeBound && items > limits.enumerationCap) {
        throwError(Error::Kind::Budget,
                   "observation list exceeds the enumeration cap; bound the outlier size or "
                   "raise the cap");
    }
}

OutlierReport buildReport(uint64_t oMask, uint64_t wMask, Semantics sem, bool vacuous) {
    OutlierReport r;
    r.outlier = indicesOf(oMask);
    r.witness = indicesOf(wMask);
    r.semantics = sem;
    r.source = ReportSource::Naive;
    r.vacuousCondition1 = vacuous;
    return r;
}

void sortReports(std::vector<OutlierReport>& out) {
    std::sort(out.begin(), out.end(), [](const OutlierReport& a, const OutlierReport& b) {
        if (a.outlier.size() != b.outlier.size()) return a.outlier.size() < b.outlier.size();
        if (a.witness.size() != b.witness.size()) return a.witness.size() < b.witness.size();
        if (a.outlier != b.outlier) return a.outlier < b.outlier;
        return a.witness < b.witness;
    });
}

}  // namespace

bool checkOw(const RuleObservationPair& pair, const std::vector<size_t>& outlier,
             const std::vector<size_t>& witness, Semantics sem, const DetectLimits& limits,
             bool* vacuousCondition1) {
    std::vector<size_t> o = canonicalIndices(pair, outlier, "outlier");
    std::vector<size_t> w = canonicalIndices(pair, witness, "witness");
    if (vacuousCondition1) *vacuousCondition1 = false;
    if (w.empty()) return false;
    Detector d(pair, sem, limits);
    bool vac = false;
    bool ok = d.check(maskOf(o), maskOf(w), vac);
    if (ok && vacuousCondition1) *vacuousCondition1 = vac;
    return ok;
}

std::vector<OutlierReport> findOutliers(const DetectionQuery& q) {
    requireEnumerable(q.pair.observations.size(), q.maxOutlierSize, q.limits);
    Detector d(q.pair, q.semantics, q.limits);
    uint64_t full = d.fullMask();
    size_t sizeCap = q.maxOutlierSize.value_or(d.size());
    std::vector<OutlierReport> out;
    for (uint64_t w = 1; w <= full; ++w) {
        bool vac = false;
        if (!d.condition1(w, vac)) continue;
        uint64_t rest = full & ~w;
        for (uint64_t o = rest; o != 0; o = (o - 1) & rest) {
            if (static_cast<size_t>(std::popcount(o)) > sizeCap) continue;
            bool v = false;
            if (d.check(o, w, v)) out.push_back(buildReport(o, w, q.semantics, v));
        }
    }
    sortReports(out);
    return out;
}

bool existsOutlier(const DetectionQuery& q) {
    requireEnumerable(q.pair.observations.size(), q.maxOutlierSize, q.limits);
    Detector d(q.pair, q.semantics, q.limits);
    uint64_t full = d.fullMask();
    size_t sizeCap = q.maxOutlierSize.value_or(d.size());
    for (uint64_t w = 1; w <= full; ++w) {
        bool vac = false;
        if (!d.condition1(w, vac)) continue;
        uint64_t rest = full & ~w;
        for (uint64_t o = rest; o != 0; o = (o - 1) & rest) {
            if (static_cast<size_t>(std::popcount(o)) > sizeCap) continue;
            bool v = false;
            if (d.check(o, w, v)) return true;
        }
    }
    return false;
}

std::optional<std::vector<size_t>> witnessCheck(const RuleObservationPair& pair,
                                                const std::vector<size_t>& witness, Semantics sem,
                                                std::optional<size_t> maxOutlierSize,
                                                const DetectLimits& limits) {
    std::vector<size_t> w = canonicalIndices(pair, witness, "witness");
    if (w.empty()) return std::nullopt;
    requireEnumerable(pair.observations.size(), maxOutlierSize, limits);
    Detector d(pair, sem, limits);
    uint64_t wMask = maskOf(w);
    bool vac = false;
    if (!d.condition1(wMask, vac)) return std::nullopt;
    std::vector<size_t> pool;
    for (size_t i = 0; i < d.size(); ++i) {
        if ((wMask >> i & 1) == 0) pool.push_back(i);
    }
    size_t sizeCap = std::min(maxOutlierSize.value_or(pool.size()), pool.size());
    std::optional<std::vector<size_t>> found;
    for (size_t s = 1; s <= sizeCap && !found; ++s) {
        forEachCombination(pool, s, [&](const std::vector<size_t>& o) {
            bool v = false;
            if (!d.check(maskOf(o), wMask, v)) return false;
            found = o;
            return true;
        });
    }
    return found;
}

std::optional<std::vector<size_t>> outlierCheck(const RuleObservationPair& pair,
                                                const std::vector<size_t>& outlier, Semantics sem,
                                                const DetectLimits& limits) {
    std::vector<size_t> o = canonicalIndices(pair, outlier, "outlier");
    requireEnumerable(pair.observations.size(), std::nullopt, limits);
    Detector d(pair, sem, limits);
    uint64_t oMask = maskOf(o);
    std::vector<size_t> pool;
    for (size_t i = 0; i < d.size(); ++i) {
        if ((oMask >> i & 1) == 0) pool.push_back(i);
    }
    std::optional<std::vector<size_t>> found;
    for (size_t s = 1; s <= pool.size() && !found; ++s) {
        forEachCombination(pool, s, [&](const std::vector<size_t>& w) {
            bool v = false;
            if (!d.check(oMask, maskOf(w), v)) return false;
            found = w;
            return true;
        });
    }
    return found;
}

MinResult minOutliers(const DetectionQuery& q) {
    requireEnumerable(q.pair.observations.size(), q.maxOutlierSize, q.limits);
    Detector d(q.pair, q.semantics, q.limits);
    size_t n = d.size();
    std::vector<size_t> all(n);
    std::iota(all.begin(), all.end(), size_t{0});
    size_t sizeCap = std::min(q.maxOutlierSize.value_or(n), n);
    MinResult res;
    for (size_t s = 1; s <= sizeCap && res.reports.empty(); ++s) {
        forEachCombination(all, s, [&](const std::vector<size_t>& o) {
            uint64_t oMask = maskOf(o);
            std::vector<size_t> pool;
            for (size_t i = 0; i < n; ++i) {
                if ((oMask >> i & 1) == 0) pool.push_back(i);
            }
            for (size_t sw = 1; sw <= pool.size(); ++sw) {
                bool done = forEachCombination(pool, sw, [&](const std::vector<size_t>& w) {
                    bool vac = false;
                    if (!d.check(oMask, maskOf(w), vac)) return false;
                    res.reports.push_back(buildReport(oMask, maskOf(w), q.semantics, vac));
                    return true;
                });
                if (done) break;
            }
            return false;
        });
        if (!res.reports.empty()) res.minSize = s;
    }
    sortReports(res.reports);
    return res;
}

uint64_t countOutliers(const RuleObservationPair& pair, Semantics sem, bool countPairs,
                       const DetectLimits& limits) {
    requireEnumerable(pair.observations.size(), std::nullopt, limits);
    Detector d(pair, sem, limits);
    uint64_t full = d.fullMask();
    uint64_t pairs = 0;
    std::set<uint64_t> outliers;
    for (uint64_t w = 1; w <= full; ++w) {
        bool vac = false;
        if (!d.condition1(w, vac)) continue;
        uint64_t rest = full & ~w;
        for (uint64_t o = rest; o != 0; o = (o - 1) & rest) {
            bool v = false;
            if (d.check(o, w, v)) {
                ++pairs;
                outliers.insert(o);
            }
        }
    }
    return countPairs ? pairs : outliers.size();
}

}  // namespace rodeo
