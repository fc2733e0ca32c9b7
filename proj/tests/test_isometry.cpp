#include <array>
#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "se2geo/isometry.hpp"

using namespace se2geo;

TEST_CASE("orbit points equal subgroup-composed base points") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 2000; ++i) {
        const OrbitSpec spec{{u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)}};
        const double s = u(rng);
        const GroupElement lhs = orbit_point(spec, s);
        const GroupElement rhs = compose(algebra_exp(spec.generator, s), spec.base);
        CHECK(std::fabs(lhs.x - rhs.x) < 1e-12);
        CHECK(std::fabs(lhs.y - rhs.y) < 1e-12);
        CHECK(std::fabs(lhs.theta - rhs.theta) < 1e-12);
    }
}

TEST_CASE("projection trichotomy on constructed generators") {
    // no rotation part: straight track
    const OrbitSpec line{{1.0, 0.5, 0.0}, {0.2, -0.1, 0.4}};
    const OrbitProjection lp = classify_orbit_projection(line);
    REQUIRE(lp.kind == ProjectionKind::Line);
    for (double s : {-2.0, 0.0, 1.5}) {
        const GroupElement g = orbit_point(line, s);
        const double off_x = g.x - lp.px;
        const double off_y = g.y - lp.py;
        const double cross = off_x * lp.dir_y - off_y * lp.dir_x;
        CHECK(std::fabs(cross) < 1e-12);
    }

    // rotation part with the base at the fixed point: stationary projection
    const double a = 0.8, b = -0.6, c = 1.3;
    const OrbitSpec point{{a, b, c}, {-b / c, a / c, 0.7}};
    const OrbitProjection pp = classify_orbit_projection(point);
    REQUIRE(pp.kind == ProjectionKind::Point);
    for (double s : {-1.0, 0.4, 3.0}) {
        const GroupElement g = orbit_point(point, s);
        CHECK(std::fabs(g.x - pp.px) < 1e-12);
        CHECK(std::fabs(g.y - pp.py) < 1e-12);
    }

    // rotation part, base off the fixed point: circular track
    const OrbitSpec circle{{a, b, c}, {1.0, 2.0, 0.0}};
    const OrbitProjection cp = classify_orbit_projection(circle);
    REQUIRE(cp.kind == ProjectionKind::Circle);
    CHECK(cp.cx == doctest::Approx(-b / c).epsilon(1e-12));
    CHECK(cp.cy == doctest::Approx(a / c).epsilon(1e-12));
    for (double s : {-2.0, 0.1, 2.7}) {
        const GroupElement g = orbit_point(circle, s);
        const double r = std::hypot(g.x - cp.cx, g.y - cp.cy);
        CHECK(std::fabs(r - cp.radius) < 1e-12);
    }
}

TEST_CASE("zero generator is rejected") {
    CHECK_THROWS_AS((void)classify_orbit_projection({{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}}),
                    std::invalid_argument);
}

TEST_CASE("track fitting recovers exact shapes") {
    std::vector<std::array<double, 2>> pts;
    for (int i = 0; i < 100; ++i) {
        const double t = 0.1 * i;
        pts.push_back({t, 0.3 * t + 1.0});
    }
    FitResult f = fit_projection(pts);
    CHECK(f.kind == ProjectionKind::Line);
    CHECK(f.residual < 1e-9);

    pts.clear();
    for (int i = 0; i < 100; ++i) {
        const double t = 0.05 * i;
        pts.push_back({2.0 + 1.5 * std::cos(t), -1.0 + 1.5 * std::sin(t)});
    }
    f = fit_projection(pts);
    CHECK(f.kind == ProjectionKind::Circle);
    CHECK(f.residual < 1e-9);

    pts.assign(20, {0.7, -0.2});
    f = fit_projection(pts);
    CHECK(f.kind == ProjectionKind::Point);
    CHECK(f.residual < 1e-12);
}

TEST_CASE("fitting requires enough points") {
    std::vector<std::array<double, 2>> pts(5, {0.0, 0.0});
    CHECK_THROWS_AS((void)fit_projection(pts), std::invalid_argument);
}

TEST_CASE("equilibrium covectors are homogeneous with confirmed orbits") {
    const Covector eq[4] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
    for (const Covector& p : eq) {
        const HomogeneityResult r = homogeneity_test(p);
        CHECK(r.homogeneous);
        CHECK(r.orbit_deviation < 1e-9);
    }
}

TEST_CASE("generic covectors are not homogeneous and fail both fits") {
    HomogeneityOptions opts;
    opts.negative_certificate = true;
    opts.T = 10.0;
    const Covector p{std::cos(0.9), std::sin(0.9), 0.7};
    const HomogeneityResult r = homogeneity_test(p, 1e-9, opts);
    CHECK_FALSE(r.homogeneous);
    CHECK(r.fit.residual >= kFitResidualThreshold);
}

TEST_CASE("grid sweep finds exactly the equilibria") {
    const HomogeneitySweepResult r = homogeneity_sweep(16, 6, 2.0, 1e-9, 8);
    CHECK(r.total == 96);
    CHECK(r.homogeneous.size() == 4);
    CHECK_FALSE(r.geodesic_orbital);
    CHECK(r.max_orbit_deviation < 1e-9);
    CHECK(r.geometric_samples == 8);
    CHECK(r.all_residuals_above_threshold);
    CHECK(r.min_fit_residual >= kFitResidualThreshold);
}

TEST_CASE("sweep validates its grid") {
    CHECK_THROWS_AS((void)homogeneity_sweep(1, 6, 2.0), std::invalid_argument);
    CHECK_THROWS_AS((void)homogeneity_sweep(16, 6, -1.0), std::invalid_argument);
}

TEST_CASE("json reports parse and carry the documented keys") {
    const OrbitProjection proj = classify_orbit_projection({{0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}});
    auto j = nlohmann::json::parse(orbit_projection_json(proj));
    CHECK(j.contains("kind"));
    CHECK(j.contains("parameters"));
    CHECK(j.contains("residual"));

    const HomogeneitySweepResult r = homogeneity_sweep(8, 2, 1.0);
    auto js = nlohmann::json::parse(homogeneity_sweep_json(r));
    CHECK(js.contains("total"));
    CHECK(js.contains("homogeneous"));
    CHECK(js.contains("geodesic_orbital"));
    CHECK(js["geodesic_orbital"].get<bool>() == false);
}
