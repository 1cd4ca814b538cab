#pragma once

// Shared helpers for the suite: brute-force oracles kept deliberately
// independent of the library's counting kernels, plus deterministic data
// generators.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "addbasis/intset.hpp"

namespace testutil {

using addbasis::SetView;
using addbasis::WindowSet;

/// Unordered pair count by literal enumeration over the element list.
inline uint64_t naiveRepCount(const std::vector<uint64_t>& elems, uint64_t m) {
    std::set<uint64_t> s(elems.begin(), elems.end());
    uint64_t r = 0;
    for (uint64_t a : s) {
        if (a > m - a) break;
        if (m < a) break;
        if (s.count(m - a)) ++r;
    }
    return r;
}

inline std::vector<uint32_t> naiveRepCountWindow(const std::vector<uint64_t>& elems,
                                                 uint64_t mLo, uint64_t mHi) {
    std::vector<uint32_t> counts(size_t(mHi - mLo), 0);
    std::vector<uint64_t> v(elems.begin(), elems.end());
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    for (size_t i = 0; i < v.size(); ++i)
        for (size_t j = i; j < v.size(); ++j) {
            uint64_t m = v[i] + v[j];
            if (m >= mLo && m < mHi) ++counts[size_t(m - mLo)];
        }
    return counts;
}

inline uint64_t naiveTripleCount(const std::vector<uint64_t>& elems, uint64_t q, uint64_t r) {
    std::set<uint64_t> s(elems.begin(), elems.end());
    uint64_t n = 0;
    for (uint64_t y : s) {
        bool qok = q >= y && s.count(q - y);
        bool rok = r >= y && s.count(r - y);
        if (qok && rok) ++n;
    }
    return n;
}

inline std::vector<uint64_t> randomElements(std::mt19937_64& rng, uint64_t lo, uint64_t hi,
                                            size_t n) {
    std::uniform_int_distribution<uint64_t> dist(lo, hi - 1);
    std::set<uint64_t> s;
    while (s.size() < n && s.size() < hi - lo) s.insert(dist(rng));
    return {s.begin(), s.end()};
}

inline SetView viewOf(const std::vector<uint64_t>& elems, uint64_t lo, uint64_t hi) {
    return SetView({WindowSet::fromElements(lo, hi, elems)});
}

} // namespace testutil
