#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "addbasis/common.hpp"

namespace addbasis {

/// All numeric knobs of the construction. The "paper" preset carries the
/// published constants; the "desk" preset is scaled so every window fits in a
/// few MB of bitset.
struct Profile {
    uint64_t x1 = 4;          // initial schedule value X_1
    int nMax = 1;             // last stage to build (0 = build nothing)
    int lag = 10;             // offset L in C_{n-L}
    double alpha = 40.0;      // thinning coefficient in p(x)
    double lowCoef = 160.0;   // lower density threshold coefficient
    double fragileCoef = 100.0; // fragile-target threshold coefficient
    int devCap = 37;          // deviation cap
    int tripleK = 17;         // distinct-triple parameter
    double decoyCoef = 60.0;  // coefficient of log2 in decoy set size
    int bLowDiv = 6;          // canary interval divisors
    int bHighDiv = 4;
    int extDiv = 4;           // extended-window left edge divisor
    std::map<std::string, double> guardCoefs = {{"aug", 1.0}, {"eCap", 5.0}, {"kn", 1.0}};
    uint64_t enumCap = 1000000; // per-target decoy enumeration cap

    double guardCoef(const std::string& name, double fallback) const {
        auto it = guardCoefs.find(name);
        return it == guardCoefs.end() ? fallback : it->second;
    }

    void validate() const {
        if (x1 < 2) throw ConfigError("profile: x1 must be >= 2");
        if (nMax < 0) throw ConfigError("profile: nMax must be >= 0");
        if (lag < 1) throw ConfigError("profile: lag must be >= 1");
        if (!(alpha > 0)) throw ConfigError("profile: alpha must be > 0");
        if (!(lowCoef > 0)) throw ConfigError("profile: lowCoef must be > 0");
        if (!(fragileCoef > 0)) throw ConfigError("profile: fragileCoef must be > 0");
        if (devCap < 0) throw ConfigError("profile: devCap must be >= 0");
        if (tripleK < 2) throw ConfigError("profile: tripleK must be >= 2");
        if (!(decoyCoef > 0)) throw ConfigError("profile: decoyCoef must be > 0");
        if (bHighDiv < 2 || bLowDiv <= bHighDiv)
            throw ConfigError("profile: need bLowDiv > bHighDiv >= 2");
        if (extDiv < 1) throw ConfigError("profile: extDiv must be >= 1");
        if (enumCap < 1) throw ConfigError("profile: enumCap must be >= 1");
        for (const auto& [k, v] : guardCoefs)
            if (!(v > 0)) throw ConfigError("profile: guardCoefs." + k + " must be > 0");
    }

    bool operator==(const Profile&) const = default;
};

inline Profile paperProfile() {
    Profile p;
    p.x1 = 4;
    p.nMax = 3;
    p.lag = 10;
    p.alpha = 40.0;
    p.lowCoef = 160.0;
    p.fragileCoef = 100.0;
    p.devCap = 37;
    p.tripleK = 17;
    p.decoyCoef = 60.0;
    p.bLowDiv = 6;
    p.bHighDiv = 4;
    p.extDiv = 4;
    p.enumCap = 1000000;
    return p;
}

inline Profile deskProfile() {
    Profile p = paperProfile();
    p.x1 = 3;
    p.nMax = 4;
    p.lag = 2;
    p.alpha = 8.0;
    p.lowCoef = 4.0;
    p.fragileCoef = 2.0;
    p.decoyCoef = 1.5;
    return p;
}

inline nlohmann::ordered_json profileToJson(const Profile& p) {
    nlohmann::ordered_json j;
    j["x1"] = p.x1;
    j["nMax"] = p.nMax;
    j["lag"] = p.lag;
    j["alpha"] = p.alpha;
    j["lowCoef"] = p.lowCoef;
    j["fragileCoef"] = p.fragileCoef;
    j["devCap"] = p.devCap;
    j["tripleK"] = p.tripleK;
    j["decoyCoef"] = p.decoyCoef;
    j["bLowDiv"] = p.bLowDiv;
    j["bHighDiv"] = p.bHighDiv;
    j["extDiv"] = p.extDiv;
    nlohmann::ordered_json g;
    for (const auto& [k, v] : p.guardCoefs) g[k] = v;
    j["guardCoefs"] = g;
    j["enumCap"] = p.enumCap;
    return j;
}

/// Applies fields of a JSON object on top of `base`. Unknown keys rejected.
inline Profile profileFromJson(const nlohmann::json& j, const Profile& base) {
    if (!j.is_object()) throw ConfigError("profile config must be a JSON object");
    Profile p = base;
    for (const auto& [key, val] : j.items()) {
        try {
            if (key == "x1") p.x1 = val.get<uint64_t>();
            else if (key == "nMax") p.nMax = val.get<int>();
            else if (key == "lag") p.lag = val.get<int>();
            else if (key == "alpha") p.alpha = val.get<double>();
            else if (key == "lowCoef") p.lowCoef = val.get<double>();
            else if (key == "fragileCoef") p.fragileCoef = val.get<double>();
            else if (key == "devCap") p.devCap = val.get<int>();
            else if (key == "tripleK") p.tripleK = val.get<int>();
            else if (key == "decoyCoef") p.decoyCoef = val.get<double>();
            else if (key == "bLowDiv") p.bLowDiv = val.get<int>();
            else if (key == "bHighDiv") p.bHighDiv = val.get<int>();
            else if (key == "extDiv") p.extDiv = val.get<int>();
            else if (key == "enumCap") p.enumCap = val.get<uint64_t>();
            else if (key == "guardCoefs") {
                if (!val.is_object()) throw ConfigError("profile: guardCoefs must be an object");
                for (const auto& [gk, gv] : val.items()) p.guardCoefs[gk] = gv.get<double>();
            } else {
                throw ConfigError("profile: unknown key \"" + key + "\"");
            }
        } catch (const nlohmann::json::exception&) {
            throw ConfigError("profile: bad value for key \"" + key + "\"");
        }
    }
    p.validate();
    return p;
}

/// Accepts a preset name ("paper", "desk") or a path to a JSON config file.
/// File values override the desk preset.
inline Profile loadProfile(const std::string& nameOrPath) {
    if (nameOrPath == "paper") return paperProfile();
    if (nameOrPath == "desk") return deskProfile();
    std::ifstream in(nameOrPath);
    if (!in) throw ConfigError("unknown profile or unreadable config file: " + nameOrPath);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed profile file " + nameOrPath + ": " + e.what());
    }
    return profileFromJson(j, deskProfile());
}

/// X_n for n >= 1: X_1 = x1, X_{n+1} = X_n^2, all integer arithmetic.
inline uint64_t scheduleX(const Profile& p, int n) {
    if (n < 1) throw PreconditionError("scheduleX: stage index must be >= 1");
    uint64_t x = p.x1;
    for (int i = 1; i < n; ++i) {
        if (x > UINT64_MAX / x)
            throw OverflowError("scheduleX: X_" + std::to_string(n) + " exceeds 64-bit range");
        x *= x;
    }
    return x;
}

struct Interval {
    uint64_t lo = 0;
    uint64_t hi = 0;
    uint64_t width() const { return hi - lo; }
    bool contains(uint64_t v) const { return v >= lo && v < hi; }
};

/// I_n = [X_n, X_{n+1})
inline Interval intervalI(const Profile& p, int n) {
    return {scheduleX(p, n), scheduleX(p, n + 1)};
}

/// Canary interval [X_{n+1}/bLowDiv, X_{n+1}/bHighDiv), floor division.
inline Interval bInterval(const Profile& p, int n) {
    uint64_t xn1 = scheduleX(p, n + 1);
    return {xn1 / uint64_t(p.bLowDiv), xn1 / uint64_t(p.bHighDiv)};
}

/// Left edge X_n/extDiv of the extended summand window, floor division.
inline uint64_t extLow(const Profile& p, int n) {
    return scheduleX(p, n) / uint64_t(p.extDiv);
}

/// Membership probability p(x) = min(1, alpha*sqrt(ln x / x)), 0 for x < 1.
inline double thinningProb(const Profile& p, uint64_t x) {
    if (x < 1) return 0.0;
    double xd = static_cast<double>(x);
    double v = p.alpha * std::sqrt(std::log(xd) / xd);
    return v < 1.0 ? v : 1.0;
}

/// The representation-count floor constant 15/(512 ln 2).
inline double epsilonConst() {
    return 15.0 / (512.0 * std::log(2.0));
}

} // namespace addbasis
