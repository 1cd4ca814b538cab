#pragma once

#include <bit>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "addbasis/common.hpp"

namespace addbasis {

inline constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ull;
inline constexpr uint64_t kMix1 = 0xBF58476D1CE4E5B9ull;
inline constexpr uint64_t kMix2 = 0x94D049BB133111EBull;

/// SplitMix64 finalizer.
inline uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * kMix1;
    z = (z ^ (z >> 27)) * kMix2;
    return z ^ (z >> 31);
}

enum class StreamPurpose : uint32_t { Thin = 0, Bset = 1, Aux = 2 };

/// Identifies one independent stream; distinct (stage, purpose) pairs derived
/// from one master seed never share state.
struct StreamKey {
    uint64_t masterSeed = 0;
    uint32_t stage = 0;
    StreamPurpose purpose = StreamPurpose::Aux;
};

class RandomStream {
public:
    explicit RandomStream(uint64_t state) : state_(state) {}

    uint64_t nextU64() {
        ++draws_;
        return mix64(state_ += kGolden);
    }

    uint64_t draws() const { return draws_; }

private:
    uint64_t state_;
    uint64_t draws_ = 0;
};

/// Stream state is a pure function of the key; byte-stable on every platform.
inline RandomStream derivedStream(const StreamKey& key) {
    uint64_t s = key.masterSeed;
    s = mix64(s + kGolden * (uint64_t(key.stage) + 1));
    s = mix64(s + kGolden * (uint64_t(key.purpose) + 1));
    return RandomStream(s);
}

/// floor(p * 2^64) computed exactly from the IEEE-754 bits; valid for
/// p in (0, 1). The 53-bit mantissa never touches a float comparison.
inline uint64_t probThreshold(double p) {
    uint64_t bits = std::bit_cast<uint64_t>(p);
    uint64_t expField = (bits >> 52) & 0x7ff;
    uint64_t frac = bits & ((uint64_t(1) << 52) - 1);
    uint64_t mant;
    int64_t e2; // p = mant * 2^e2
    if (expField == 0) {
        mant = frac;
        e2 = -1074;
    } else {
        mant = frac | (uint64_t(1) << 52);
        e2 = int64_t(expField) - 1075;
    }
    int64_t shift = e2 + 64;
    if (shift >= 64) return UINT64_MAX; // unreachable for p < 1
    if (shift >= 0) return mant << shift;
    if (shift <= -64) return 0;
    return mant >> (-shift);
}

/// True with probability exactly floor(p*2^64)/2^64; consumes one draw always.
inline bool bernoulliDraw(RandomStream& rs, double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw PreconditionError("bernoulliDraw: p outside [0,1]");
    uint64_t u = rs.nextU64();
    if (p >= 1.0) return true;
    if (p <= 0.0) return false;
    return u < probThreshold(p);
}

/// k distinct uniform values over [lo, hi), in draw order. Each candidate is
/// modulo-rejection sampled; duplicates are rejected and redrawn.
inline std::vector<uint64_t> uniformSubset(RandomStream& rs, uint64_t lo, uint64_t hi,
                                           uint64_t k) {
    if (hi < lo) throw PreconditionError("uniformSubset: hi < lo");
    uint64_t range = hi - lo;
    if (k > range)
        throw RangeTooSmallError("uniformSubset: k exceeds interval width");
    std::vector<uint64_t> out;
    out.reserve(k);
    std::unordered_set<uint64_t> seen;
    seen.reserve(size_t(k) * 2);
    uint64_t lim = range ? (uint64_t(0) - range) % range : 0; // 2^64 mod range
    while (out.size() < k) {
        uint64_t u = rs.nextU64();
        if (u < lim) continue;
        uint64_t v = lo + u % range;
        if (!seen.insert(v).second) continue;
        out.push_back(v);
    }
    return out;
}

} // namespace addbasis
