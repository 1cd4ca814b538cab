#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmp.h>

#include "addbasis/common.hpp"

namespace addbasis {

/// Dense bitset of integers over a half-open window [lo, hi).
/// Bit i of the packed words is membership of lo+i; bits beyond hi-lo stay
/// zero (every mutator maintains that invariant).
class WindowSet {
public:
    WindowSet() = default;

    WindowSet(uint64_t lo, uint64_t hi) : lo_(lo), hi_(hi) {
        if (hi < lo) throw PreconditionError("WindowSet: hi < lo");
        words_.assign(size_t((hi - lo + 63) / 64), 0);
    }

    template <class Container>
    static WindowSet fromElements(uint64_t lo, uint64_t hi, const Container& elems) {
        WindowSet w(lo, hi);
        for (uint64_t v : elems) w.set(v);
        return w;
    }

    static WindowSet fromElements(uint64_t lo, uint64_t hi,
                                  std::initializer_list<uint64_t> elems) {
        WindowSet w(lo, hi);
        for (uint64_t v : elems) w.set(v);
        return w;
    }

    uint64_t lo() const { return lo_; }
    uint64_t hi() const { return hi_; }
    uint64_t width() const { return hi_ - lo_; }
    bool inWindow(uint64_t v) const { return v >= lo_ && v < hi_; }

    bool test(uint64_t v) const {
        if (!inWindow(v)) return false;
        uint64_t i = v - lo_;
        return (words_[size_t(i >> 6)] >> (i & 63)) & 1;
    }

    void set(uint64_t v) {
        if (!inWindow(v)) throw ElementOutOfWindowError("WindowSet::set: value outside window");
        uint64_t i = v - lo_;
        words_[size_t(i >> 6)] |= uint64_t(1) << (i & 63);
    }

    void reset(uint64_t v) {
        if (!inWindow(v)) return;
        uint64_t i = v - lo_;
        words_[size_t(i >> 6)] &= ~(uint64_t(1) << (i & 63));
    }

    uint64_t count() const {
        uint64_t c = 0;
        for (uint64_t w : words_) c += std::popcount(w);
        return c;
    }

    bool empty() const {
        for (uint64_t w : words_)
            if (w) return false;
        return true;
    }

    std::optional<uint64_t> first() const {
        for (size_t i = 0; i < words_.size(); ++i)
            if (words_[i]) return lo_ + i * 64 + std::countr_zero(words_[i]);
        return std::nullopt;
    }

    std::optional<uint64_t> last() const {
        for (size_t i = words_.size(); i-- > 0;)
            if (words_[i]) return lo_ + i * 64 + 63 - std::countl_zero(words_[i]);
        return std::nullopt;
    }

    template <class Fn>
    void forEach(Fn&& fn) const {
        for (size_t i = 0; i < words_.size(); ++i) {
            uint64_t w = words_[i];
            while (w) {
                fn(lo_ + i * 64 + std::countr_zero(w));
                w &= w - 1;
            }
        }
    }

    std::vector<uint64_t> elements() const {
        std::vector<uint64_t> out;
        out.reserve(size_t(count()));
        forEach([&](uint64_t v) { out.push_back(v); });
        return out;
    }

    std::span<const uint64_t> words() const { return words_; }
    std::vector<uint64_t>& mutableWords() { return words_; }

    WindowSet& operator|=(const WindowSet& o) {
        requireSameWindow(o);
        for (size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }

    WindowSet& operator&=(const WindowSet& o) {
        requireSameWindow(o);
        for (size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }

    /// this = this minus o.
    WindowSet& andNot(const WindowSet& o) {
        requireSameWindow(o);
        for (size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }

    bool isSubsetOf(const WindowSet& o) const {
        requireSameWindow(o);
        for (size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    bool intersects(const WindowSet& o) const {
        requireSameWindow(o);
        for (size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }

    /// Copy of the intersection with [lo2, hi2), re-based to that window.
    WindowSet restricted(uint64_t lo2, uint64_t hi2) const {
        uint64_t nl = std::max(lo_, lo2);
        uint64_t nh = std::min(hi_, hi2);
        if (nh < nl) nh = nl;
        WindowSet out(nl, nh);
        if (out.width() == 0) return out;
        uint64_t off = nl - lo_;
        for (size_t w = 0; w < out.words_.size(); ++w)
            out.words_[w] = gatherBits(words_, int64_t(off + w * 64));
        out.maskTail();
        return out;
    }

    /// OR src into this; src window must lie inside this window.
    void orFrom(const WindowSet& src) {
        if (src.width() == 0) return;
        if (src.lo_ < lo_ || src.hi_ > hi_)
            throw ElementOutOfWindowError("WindowSet::orFrom: source window not contained");
        uint64_t off = src.lo_ - lo_;
        size_t q = size_t(off >> 6);
        unsigned r = unsigned(off & 63);
        for (size_t w = 0; w < src.words_.size(); ++w) {
            uint64_t v = src.words_[w];
            if (!v) continue;
            words_[q + w] |= v << r;
            if (r) words_[q + w + 1] |= v >> (64 - r);
        }
        maskTail();
    }

    bool operator==(const WindowSet&) const = default;

    /// 64 bits of an arbitrary-length word array at signed bit position pos;
    /// positions outside the array read as zero.
    static uint64_t gatherBits(std::span<const uint64_t> ws, int64_t pos) {
        int64_t nbits = int64_t(ws.size()) * 64;
        if (pos >= nbits || pos <= -64) return 0;
        if (pos < 0) return ws.empty() ? 0 : ws[0] << (-pos);
        size_t q = size_t(pos >> 6);
        unsigned r = unsigned(pos & 63);
        uint64_t lo = q < ws.size() ? ws[q] : 0;
        if (r == 0) return lo;
        uint64_t hi = q + 1 < ws.size() ? ws[q + 1] : 0;
        return (lo >> r) | (hi << (64 - r));
    }

private:
    void requireSameWindow(const WindowSet& o) const {
        if (lo_ != o.lo_ || hi_ != o.hi_)
            throw PreconditionError("WindowSet: window mismatch");
    }

    void maskTail() {
        uint64_t n = width();
        if (words_.empty()) return;
        unsigned r = unsigned(n & 63);
        if (r) words_.back() &= (uint64_t(1) << r) - 1;
    }

    uint64_t lo_ = 0, hi_ = 0;
    std::vector<uint64_t> words_;
};

/// Ordered list of WindowSets with pairwise disjoint windows; membership is
/// membership in any part.
class SetView {
public:
    SetView() = default;

    explicit SetView(std::vector<WindowSet> parts) : parts_(std::move(parts)) {
        std::sort(parts_.begin(), parts_.end(),
                  [](const WindowSet& a, const WindowSet& b) { return a.lo() < b.lo(); });
        for (size_t i = 1; i < parts_.size(); ++i)
            if (parts_[i].lo() < parts_[i - 1].hi())
                throw PreconditionError("SetView: overlapping windows");
    }

    const std::vector<WindowSet>& parts() const { return parts_; }
    bool hasParts() const { return !parts_.empty(); }

    uint64_t loBound() const { return parts_.empty() ? 0 : parts_.front().lo(); }
    uint64_t hiBound() const { return parts_.empty() ? 0 : parts_.back().hi(); }

    bool contains(uint64_t v) const {
        size_t lo = 0, hi = parts_.size();
        while (lo < hi) {
            size_t mid = (lo + hi) / 2;
            if (v < parts_[mid].lo())
                hi = mid;
            else if (v >= parts_[mid].hi())
                lo = mid + 1;
            else
                return parts_[mid].test(v);
        }
        return false;
    }

    uint64_t count() const {
        uint64_t c = 0;
        for (const auto& p : parts_) c += p.count();
        return c;
    }

    template <class Fn>
    void forEach(Fn&& fn) const {
        for (const auto& p : parts_) p.forEach(fn);
    }

    /// Union of all parts restricted to [lo, hi), as one dense bitset.
    WindowSet flattened(uint64_t lo, uint64_t hi) const {
        WindowSet out(lo, hi);
        for (const auto& p : parts_) {
            WindowSet r = p.restricted(lo, hi);
            if (r.width()) out.orFrom(r);
        }
        return out;
    }

private:
    std::vector<WindowSet> parts_;
};

/// Flattened view plus its bit reversal; the workhorse behind the shifted-AND
/// counting kernels. rev bit k equals fwd bit (nbits-1-k).
struct FlatView {
    uint64_t lo = 0;
    uint64_t nbits = 0;
    std::vector<uint64_t> fwd, rev;

    bool test(uint64_t v) const {
        if (v < lo || v >= lo + nbits) return false;
        uint64_t i = v - lo;
        return (fwd[size_t(i >> 6)] >> (i & 63)) & 1;
    }

    uint64_t countMembers() const {
        uint64_t c = 0;
        for (uint64_t w : fwd) c += std::popcount(w);
        return c;
    }
};

inline uint64_t bitrev64(uint64_t x) {
#if defined(__has_builtin) && __has_builtin(__builtin_bitreverse64)
    return __builtin_bitreverse64(x);
#else
    x = __builtin_bswap64(x);
    x = ((x & 0x0F0F0F0F0F0F0F0Full) << 4) | ((x >> 4) & 0x0F0F0F0F0F0F0F0Full);
    x = ((x & 0x3333333333333333ull) << 2) | ((x >> 2) & 0x3333333333333333ull);
    x = ((x & 0x5555555555555555ull) << 1) | ((x >> 1) & 0x5555555555555555ull);
    return x;
#endif
}

inline FlatView makeFlat(const SetView& view) {
    FlatView f;
    if (!view.hasParts()) return f;
    f.lo = view.loBound();
    f.nbits = view.hiBound() - f.lo;
    WindowSet flat = view.flattened(f.lo, view.hiBound());
    f.fwd.assign(flat.words().begin(), flat.words().end());
    f.rev.assign(f.fwd.size(), 0);
    // reversed bits of word i land at bit base = nbits - 64*(i+1)
    for (size_t i = 0; i < f.fwd.size(); ++i) {
        uint64_t v = bitrev64(f.fwd[i]);
        int64_t base = int64_t(f.nbits) - int64_t(i + 1) * 64;
        if (base >= 0) {
            size_t q = size_t(base >> 6);
            unsigned r = unsigned(base & 63);
            f.rev[q] |= v << r;
            if (r && q + 1 < f.rev.size()) f.rev[q + 1] |= v >> (64 - r);
        } else {
            // top partial word: bits below 0 are the padding of the last word
            f.rev[0] |= v >> (-base);
        }
    }
    return f;
}

/// sum over i of popcount(a[i] & b[i + s]), s may be negative.
inline uint64_t andShiftPopcount(std::span<const uint64_t> a, std::span<const uint64_t> b,
                                 int64_t s) {
    if (s < 0) return andShiftPopcount(b, a, -s);
    uint64_t total = 0;
    int64_t nbitsB = int64_t(b.size()) * 64;
    for (size_t w = 0; w < a.size(); ++w) {
        uint64_t av = a[w];
        if (!av) continue;
        int64_t pos = int64_t(w * 64) + s;
        if (pos >= nbitsB) break;
        total += std::popcount(av & WindowSet::gatherBits(b, pos));
    }
    return total;
}

/// Number of summands of m in the view: |{a in V : m-a in V}|.
inline uint64_t summandCountFlat(const FlatView& f, uint64_t m) {
    if (f.nbits == 0) return 0;
    if (m / 2 < f.lo) return 0; // m < 2*lo without overflow
    uint64_t t = (m - f.lo) - f.lo;
    if (t > 2 * (f.nbits - 1)) return 0;
    int64_t s = int64_t(f.nbits - 1) - int64_t(t);
    return andShiftPopcount(f.fwd, f.rev, s);
}

/// Exact unordered representation count r_V(m); the pair (m/2, m/2) counts
/// once when m is even and m/2 is a member.
inline uint64_t repCountFlat(const FlatView& f, uint64_t m) {
    uint64_t s = summandCountFlat(f, m);
    uint64_t mid = (m % 2 == 0 && f.test(m / 2)) ? 1 : 0;
    return (s + mid) / 2;
}

inline uint64_t repCount(const SetView& view, uint64_t m) {
    uint64_t r = 0;
    for (const auto& p : view.parts()) {
        if (p.lo() > m / 2) break;
        uint64_t cap = std::min<uint64_t>(p.hi(), m / 2 + 1);
        WindowSet low = p.restricted(p.lo(), cap);
        low.forEach([&](uint64_t a) {
            if (view.contains(m - a)) ++r;
        });
    }
    return r;
}

/// {a in V : m-a in V}, windowed to the relevant summand range.
inline WindowSet summandSet(const SetView& view, uint64_t m) {
    if (!view.hasParts()) return WindowSet();
    uint64_t lo = view.loBound();
    uint64_t hi = view.hiBound();
    if (m < lo) return WindowSet();
    uint64_t cap = std::min(hi, m - lo + 1); // a <= m - lo so that m-a >= lo
    if (cap < lo) cap = lo;
    WindowSet out(lo, cap);
    for (const auto& p : view.parts()) {
        if (p.lo() >= cap) break;
        WindowSet r = p.restricted(lo, cap);
        r.forEach([&](uint64_t a) {
            if (view.contains(m - a)) out.set(a);
        });
    }
    return out;
}

/// {b - x : x in s}; requires b >= max(s).
inline WindowSet reflectShift(uint64_t b, const WindowSet& s) {
    auto mx = s.last();
    if (!mx) return WindowSet();
    if (b < *mx) throw NegativeResultError("reflectShift: b below max of set");
    uint64_t mn = *s.first();
    WindowSet out(b - *mx, b - mn + 1);
    s.forEach([&](uint64_t x) { out.set(b - x); });
    return out;
}

enum class RepBackend { Auto, ShiftedAnd, BigintConv };

inline constexpr uint64_t kDefaultWindowBudget = uint64_t(1) << 28;

namespace detail {

inline std::vector<uint32_t> repCountsShiftedAnd(const FlatView& f, uint64_t mLo,
                                                 uint64_t mHi, int threads) {
    std::vector<uint32_t> counts(size_t(mHi - mLo), 0);
    parallelChunks(mHi - mLo, threads, [&](size_t, uint64_t begin, uint64_t end) {
        for (uint64_t i = begin; i < end; ++i)
            counts[size_t(i)] = uint32_t(repCountFlat(f, mLo + i));
    });
    return counts;
}

inline std::vector<uint32_t> repCountsBigintConv(const FlatView& f, uint64_t mLo,
                                                 uint64_t mHi) {
    std::vector<uint32_t> counts(size_t(mHi - mLo), 0);
    if (f.nbits == 0) return counts;
    uint64_t members = f.countMembers();
    if (members == 0) return counts;
    // Slot width: coefficients of the square are summand counts <= |A|, so
    // B bytes with |A| < 2^(8B) guarantees carry-free extraction.
    unsigned slot = 1;
    while (slot < 8 && (members >> (8 * slot)) != 0) ++slot;
    uint64_t bufBytes = f.nbits * slot;
    if (bufBytes > (uint64_t(1) << 31))
        throw WindowBudgetError("repCountWindow: convolution operand too large");

    std::vector<unsigned char> buf(size_t(bufBytes), 0);
    for (size_t w = 0; w < f.fwd.size(); ++w) {
        uint64_t v = f.fwd[w];
        while (v) {
            uint64_t i = w * 64 + std::countr_zero(v);
            buf[size_t(i * slot)] = 1;
            v &= v - 1;
        }
    }
    mpz_t z, sq;
    mpz_init(z);
    mpz_import(z, buf.size(), -1, 1, 0, 0, buf.data());
    buf.clear();
    buf.shrink_to_fit();
    mpz_init(sq);
    mpz_mul(sq, z, z);
    mpz_clear(z);
    size_t outBytes = (mpz_sizeinbase(sq, 2) + 7) / 8;
    std::vector<unsigned char> out(outBytes + slot, 0);
    size_t written = 0;
    mpz_export(out.data(), &written, -1, 1, 0, 0, sq);
    mpz_clear(sq);

    for (uint64_t m = mLo; m < mHi; ++m) {
        if (m / 2 < f.lo) continue;
        uint64_t t = (m - f.lo) - f.lo;
        if (t > 2 * (f.nbits - 1)) continue;
        uint64_t s = 0;
        size_t off = size_t(t) * slot;
        if (off < out.size())
            for (unsigned b = 0; b < slot; ++b) s |= uint64_t(out[off + b]) << (8 * b);
        uint64_t mid = (m % 2 == 0 && f.test(m / 2)) ? 1 : 0;
        counts[size_t(m - mLo)] = uint32_t((s + mid) / 2);
    }
    return counts;
}

} // namespace detail

/// r_V(m) for every m in [mLo, mHi). Primary backend is per-m shifted-AND
/// popcount; BigintConv is the exact integer-convolution alternative (big
/// windows). Both agree exactly on every input.
inline std::vector<uint32_t> repCountWindow(const SetView& view, uint64_t mLo, uint64_t mHi,
                                            RepBackend backend = RepBackend::Auto,
                                            uint64_t budget = kDefaultWindowBudget,
                                            int threads = 1) {
    if (mHi < mLo) throw PreconditionError("repCountWindow: mHi < mLo");
    if (mHi - mLo > budget)
        throw WindowBudgetError("repCountWindow: requested window exceeds budget");
    FlatView f = makeFlat(view);
    if (backend == RepBackend::Auto) {
        bool big = (mHi - mLo) >= (uint64_t(1) << 16) && f.nbits >= (uint64_t(1) << 20);
        backend = big ? RepBackend::BigintConv : RepBackend::ShiftedAnd;
    }
    if (backend == RepBackend::BigintConv) return detail::repCountsBigintConv(f, mLo, mHi);
    return detail::repCountsShiftedAnd(f, mLo, mHi, threads);
}

/// Distinct-triple count |{y in A : q-y in A and r-y in A}|.
inline uint64_t tripleCountFlat(const FlatView& f, uint64_t q, uint64_t r) {
    if (f.nbits == 0) return 0;
    auto shiftFor = [&](uint64_t x) -> std::optional<int64_t> {
        if (x / 2 < f.lo) return std::nullopt;
        uint64_t t = (x - f.lo) - f.lo;
        if (t > 2 * (f.nbits - 1)) return std::nullopt;
        return int64_t(f.nbits - 1) - int64_t(t);
    };
    auto sq = shiftFor(q), sr = shiftFor(r);
    if (!sq || !sr) return 0;
    uint64_t total = 0;
    for (size_t w = 0; w < f.fwd.size(); ++w) {
        uint64_t av = f.fwd[w];
        if (!av) continue;
        int64_t base = int64_t(w * 64);
        uint64_t bq = WindowSet::gatherBits(f.rev, base + *sq);
        uint64_t br = WindowSet::gatherBits(f.rev, base + *sr);
        total += std::popcount(av & bq & br);
    }
    return total;
}

inline uint64_t tripleCount(const SetView& view, uint64_t q, uint64_t r) {
    if (q == r) throw DegeneratePairError("tripleCount: q == r");
    FlatView f = makeFlat(view);
    return tripleCountFlat(f, q, r);
}

// --- .bits blob format: 24-byte header (lo, hi, word count as little-endian
// u64) followed by the packed words, little-endian. ---

inline void putU64le(std::vector<unsigned char>& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back((unsigned char)(v >> (8 * i)));
}

inline uint64_t getU64le(const unsigned char* p) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= uint64_t(p[i]) << (8 * i);
    return v;
}

inline std::vector<unsigned char> serializeBits(const WindowSet& w) {
    std::vector<unsigned char> out;
    out.reserve(24 + w.words().size() * 8);
    putU64le(out, w.lo());
    putU64le(out, w.hi());
    putU64le(out, w.words().size());
    for (uint64_t word : w.words()) putU64le(out, word);
    return out;
}

inline WindowSet deserializeBits(const std::vector<unsigned char>& bytes) {
    if (bytes.size() < 24) throw IoError("bits blob: truncated header");
    uint64_t lo = getU64le(bytes.data());
    uint64_t hi = getU64le(bytes.data() + 8);
    uint64_t nwords = getU64le(bytes.data() + 16);
    if (hi < lo || nwords != (hi - lo + 63) / 64)
        throw IoError("bits blob: inconsistent header");
    if (bytes.size() != 24 + nwords * 8) throw IoError("bits blob: truncated payload");
    WindowSet w(lo, hi);
    auto& words = w.mutableWords();
    for (uint64_t i = 0; i < nwords; ++i) words[size_t(i)] = getU64le(bytes.data() + 24 + i * 8);
    return w;
}

inline void writeBits(const std::string& path, const WindowSet& w) {
    auto bytes = serializeBits(w);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for write: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out) throw IoError("write failed: " + path);
}

inline std::vector<unsigned char> readFileBytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for read: " + path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    return bytes;
}

inline WindowSet readBits(const std::string& path) {
    return deserializeBits(readFileBytes(path));
}

} // namespace addbasis
