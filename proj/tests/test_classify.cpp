#include <cmath>
#include <cstring>
#include <vector>

#include <doctest.h>

#include "se2geo/classify.hpp"

using namespace se2geo;

namespace {

struct CuspFixture {
    Covector p;
    size_t cusps;
    size_t inflections;
    std::vector<double> cusp_times;
};

// Event counts over [0, 10]; values confirmed stable under step halving.
const CuspFixture kFixtures[] = {
    {{std::cos(2.0), std::sin(2.0), 0.3}, 3, 0, {0.98010486, 4.36602485, 7.75194482}},
    {{0.0, 1.0, 0.8}, 3, 0, {0.0, 3.99060556, 7.98121111}},
    {{0.6, 0.8, 1.0}, 2, 3, {3.07323223, 6.72780109}},
    {{std::cos(0.5), std::sin(0.5), 1.5}, 5, 5, {1.34216353, 3.33605050, 5.32993747, 7.32382443, 9.31771139}},
    {{0.0, 1.0, 1.0}, 1, 0, {0.0}},
};

}  // namespace

TEST_CASE("class tokens for the five regimes") {
    CHECK(std::strcmp(class_token(classify_covector({1.0, 0.0, 0.0})), "straight") == 0);
    CHECK(std::strcmp(class_token(classify_covector({-1.0, 0.0, 0.0})), "straight") == 0);
    CHECK(std::strcmp(class_token(classify_covector({0.0, 1.0, 0.0})), "rotation") == 0);
    CHECK(std::strcmp(class_token(classify_covector({0.0, -1.0, 0.0})), "rotation") == 0);
    CHECK(std::strcmp(class_token(classify_covector({0.0, 1.0, 0.8})), "noninflexional") == 0);
    CHECK(std::strcmp(class_token(classify_covector({0.6, 0.8, 1.0})), "inflexional") == 0);
    CHECK(std::strcmp(class_token(classify_covector({0.0, 1.0, 1.0})), "critical") == 0);
}

TEST_CASE("classification tolerance around the separatrix") {
    CHECK(classify_covector({0.0, 1.0, 1.0 + 1e-12}) == GeodesicClass::Critical);
    CHECK(classify_covector({0.0, 1.0, 1.0 + 1e-6}) == GeodesicClass::Inflexional);
    CHECK(classify_covector({0.0, 1.0, 1.0 - 1e-6}) == GeodesicClass::NonInflexional);
    CHECK(classify_covector({0.0, 1.0, 1.0 + 1e-6}, 1e-5) == GeodesicClass::Critical);
}

TEST_CASE("near-equilibrium covectors classify as equilibria within tolerance") {
    CHECK(classify_covector({1.0 - 1e-12, 0.0, 1e-12}) == GeodesicClass::StraightLine);
    CHECK(classify_covector({0.0, 1.0 - 1e-12, -1e-12}) == GeodesicClass::RotationInPlace);
}

TEST_CASE("event counts and refined times match frozen values") {
    for (const CuspFixture& f : kFixtures) {
        const Geodesic geo = integrate(f.p, GroupElement{}, 10.0, 1e-3);
        const SignChangeReport cusps = detect_cusps(geo);
        const SignChangeReport inflections = detect_inflections(geo);
        REQUIRE(cusps.times.size() == f.cusps);
        CHECK(inflections.times.size() == f.inflections);
        CHECK_FALSE(cusps.degenerate);
        for (size_t i = 0; i < f.cusps; ++i)
            CHECK(std::fabs(cusps.times[i] - f.cusp_times[i]) < 1e-6);
    }
}

TEST_CASE("pure rotation flags a degenerate projection") {
    const Geodesic geo = integrate({0.0, 1.0, 0.0}, GroupElement{}, 5.0, 1e-3);
    const SignChangeReport cusps = detect_cusps(geo);
    CHECK(cusps.degenerate);
    CHECK(cusps.times.empty());
}

TEST_CASE("straight motion has no events and a degenerate curvature signal") {
    const Geodesic geo = integrate({1.0, 0.0, 0.0}, GroupElement{}, 5.0, 1e-3);
    CHECK(detect_cusps(geo).times.empty());
    CHECK_FALSE(detect_cusps(geo).degenerate);
    const SignChangeReport inflections = detect_inflections(geo);
    CHECK(inflections.degenerate);
    CHECK(inflections.times.empty());
}

TEST_CASE("noninflexional curves never change curvature sign") {
    const Geodesic geo = integrate({0.0, 1.0, 0.5}, GroupElement{}, 20.0, 1e-3);
    CHECK(detect_inflections(geo).times.empty());
    CHECK(detect_cusps(geo).times.size() > 0);
}
