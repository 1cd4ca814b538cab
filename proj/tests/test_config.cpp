#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "addbasis/config.hpp"

using namespace addbasis;

TEST_CASE("schedule values") {
    Profile p4 = paperProfile();
    CHECK(scheduleX(p4, 1) == 4);
    CHECK(scheduleX(p4, 2) == 16);
    CHECK(scheduleX(p4, 3) == 256);
    CHECK(scheduleX(p4, 4) == 65536);

    Profile p3 = deskProfile();
    CHECK(scheduleX(p3, 1) == 3);
    uint64_t expect = 3;
    for (int n = 2; n <= 5; ++n) {
        expect *= expect;
        CHECK(scheduleX(p3, n) == expect);
    }
    CHECK(scheduleX(p3, 5) == 43046721);

    CHECK_THROWS_AS(scheduleX(p3, 0), PreconditionError);
    CHECK_THROWS_AS(scheduleX(p4, 12), OverflowError);
}

TEST_CASE("schedule squaring invariant") {
    Profile p = deskProfile();
    for (int n = 1; n <= 4; ++n) {
        uint64_t x = scheduleX(p, n);
        CHECK(scheduleX(p, n + 1) == x * x);
    }
    Interval i3 = intervalI(p, 3);
    CHECK(i3.lo == 81);
    CHECK(i3.hi == 6561);
    Interval b3 = bInterval(p, 3);
    CHECK(b3.lo == 6561 / 6);
    CHECK(b3.hi == 6561 / 4);
    CHECK(extLow(p, 3) == 81 / 4);
}

TEST_CASE("thinning probability") {
    Profile p = paperProfile();
    CHECK(thinningProb(p, 0) == 0.0);
    CHECK(thinningProb(p, 1) == 0.0);
    CHECK(thinningProb(p, 1000000) == Catch::Approx(0.14868).margin(1e-4));
    // saturation region
    CHECK(thinningProb(p, 2) == 1.0);
}

TEST_CASE("thinning is non-increasing past its peak") {
    Profile p = deskProfile(); // alpha = 8
    // find the first x where the raw formula drops below 1, then scan
    uint64_t xStar = 2;
    while (thinningProb(p, xStar) >= 1.0) ++xStar;
    double prev = thinningProb(p, xStar);
    for (uint64_t x = xStar + 1; x < xStar + 5000; ++x) {
        double cur = thinningProb(p, x);
        CHECK(cur <= prev + 1e-15);
        prev = cur;
    }
}

TEST_CASE("epsilon constant") {
    CHECK(epsilonConst() == Catch::Approx(0.042267).margin(1e-5));
    CHECK(std::round(epsilonConst() * 1000.0) / 1000.0 == 0.042);
    CHECK(epsilonConst() > 0);
}

TEST_CASE("presets carry the published constants") {
    Profile p = loadProfile("paper");
    CHECK(p.alpha == 40.0);
    CHECK(p.lowCoef == 160.0);
    CHECK(p.fragileCoef == 100.0);
    CHECK(p.devCap == 37);
    CHECK(p.tripleK == 17);
    CHECK(p.decoyCoef == 60.0);
    CHECK(p.bLowDiv == 6);
    CHECK(p.bHighDiv == 4);
    CHECK(p.extDiv == 4);
    CHECK(p.x1 == 4);
    CHECK(p.lag == 10);

    Profile d = loadProfile("desk");
    CHECK(d.x1 == 3);
    CHECK(d.nMax == 4);
    CHECK(d.lag == 2);
    CHECK(d.alpha == 8.0);
    CHECK(d.devCap == 37);

    CHECK_THROWS_AS(loadProfile("nope"), ConfigError);
}

TEST_CASE("profile file round-trips byte-identically") {
    Profile d = deskProfile();
    std::string s1 = profileToJson(d).dump(2);
    Profile back = profileFromJson(nlohmann::json::parse(s1), paperProfile());
    CHECK(back == d);
    std::string s2 = profileToJson(back).dump(2);
    CHECK(s1 == s2);
}

TEST_CASE("profile file overrides and rejections") {
    const char* path = "tmp_profile_test.json";
    {
        std::ofstream out(path);
        out << R"({"alpha": 2.5, "nMax": 2})";
    }
    Profile p = loadProfile(path);
    CHECK(p.alpha == 2.5);
    CHECK(p.nMax == 2);
    CHECK(p.x1 == 3); // desk base

    {
        std::ofstream out(path);
        out << R"({"alhpa": 2.5})";
    }
    CHECK_THROWS_AS(loadProfile(path), ConfigError);

    {
        std::ofstream out(path);
        out << R"({"bLowDiv": 3, "bHighDiv": 5})";
    }
    CHECK_THROWS_AS(loadProfile(path), ConfigError);

    {
        std::ofstream out(path);
        out << "{not json";
    }
    CHECK_THROWS_AS(loadProfile(path), ConfigError);
    std::remove(path);
}
