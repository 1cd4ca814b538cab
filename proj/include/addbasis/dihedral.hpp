#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "addbasis/common.hpp"

namespace addbasis {

/// An element of the infinite dihedral group generated by x -> q-x and
/// x -> r-x, in normal form x -> sign*x + offset. wordLen carries the length
/// of the generator word that produced it; equality compares the map only.
struct AffineMap {
    int sign = +1;
    int64_t offset = 0;
    uint32_t wordLen = 0;

    int64_t apply(int64_t x) const { return sign < 0 ? offset - x : x + offset; }
    bool isTranslation() const { return sign > 0; }

    friend bool operator==(const AffineMap& a, const AffineMap& b) {
        return a.sign == b.sign && a.offset == b.offset;
    }
};

enum class Letter { Q, R };

inline AffineMap identityMap() { return {+1, 0, 0}; }

inline AffineMap generator(Letter which, int64_t q, int64_t r) {
    if (q == r) throw DegeneratePairError("dihedral: q == r");
    return {-1, which == Letter::Q ? q : r, 1};
}

inline AffineMap compose(const AffineMap& g, const AffineMap& h) {
    return {g.sign * h.sign,
            g.sign < 0 ? g.offset - h.offset : g.offset + h.offset,
            g.wordLen + h.wordLen};
}

/// Right-to-left composition: the last letter is applied first.
inline AffineMap wordFromLetters(std::span<const Letter> letters, int64_t q, int64_t r) {
    if (q == r) throw DegeneratePairError("dihedral: q == r");
    AffineMap acc = identityMap();
    for (Letter l : letters) acc = compose(acc, generator(l, q, r));
    return acc;
}

inline AffineMap wordFromLetters(const std::vector<Letter>& letters, int64_t q, int64_t r) {
    return wordFromLetters(std::span<const Letter>(letters.data(), letters.size()), q, r);
}

} // namespace addbasis
