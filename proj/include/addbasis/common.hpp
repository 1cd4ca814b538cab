#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <future>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace addbasis {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : Error { using Error::Error; };
struct OverflowError : Error { using Error::Error; };
struct PreconditionError : Error { using Error::Error; };
struct RangeTooSmallError : Error { using Error::Error; };
struct DegeneratePairError : Error { using Error::Error; };
struct NegativeResultError : Error { using Error::Error; };
struct WindowBudgetError : Error { using Error::Error; };
struct ElementOutOfWindowError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct ChecksumError : Error { using Error::Error; };
struct NoSuchAssignmentError : Error { using Error::Error; };
struct ElementNotInBaseError : Error { using Error::Error; };
struct PipelineError : Error { using Error::Error; };

/// FNV-1a 64-bit digest, used for blob integrity in persisted states.
inline uint64_t fnv1a64(const void* data, size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    uint64_t h = 0xcbf29ce484222325ull;
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string hexU64(uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// Parses decimal or 0x-prefixed hex into u64.
inline uint64_t parseU64(const std::string& s) {
    if (s.empty()) throw ConfigError("empty integer literal");
    size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &pos, 0);
    } catch (const std::exception&) {
        throw ConfigError("bad integer literal: " + s);
    }
    if (pos != s.size()) throw ConfigError("bad integer literal: " + s);
    return v;
}

/// Rounds to 6 significant digits; reports render ratios at this precision.
inline double sig6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::strtod(buf, nullptr);
}

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

/// Runs fn(chunk, begin, end) over [0, n) split into contiguous chunks.
/// Callers merge per-chunk results in chunk order, so the outcome does not
/// depend on the thread count.
template <class Fn>
void parallelChunks(uint64_t n, int threads, Fn&& fn) {
    if (n == 0) return;
    int t = threads;
    if (t < 1) t = 1;
    uint64_t chunks = std::min<uint64_t>(t, n);
    if (chunks <= 1) {
        fn(size_t{0}, uint64_t{0}, n);
        return;
    }
    std::vector<std::future<void>> futs;
    futs.reserve(chunks);
    uint64_t per = n / chunks;
    uint64_t rem = n % chunks;
    uint64_t begin = 0;
    for (uint64_t c = 0; c < chunks; ++c) {
        uint64_t len = per + (c < rem ? 1 : 0);
        uint64_t end = begin + len;
        futs.push_back(std::async(std::launch::async,
                                  [&fn, c, begin, end] { fn(size_t(c), begin, end); }));
        begin = end;
    }
    for (auto& f : futs) f.get();
}

} // namespace addbasis
