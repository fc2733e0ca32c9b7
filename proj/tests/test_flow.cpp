#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include <doctest.h>

#include "se2geo/cut_time.hpp"
#include "se2geo/flow.hpp"
#include "se2geo/se2.hpp"

using namespace se2geo;

namespace {

Covector random_natural(std::mt19937& rng, double h3_range = 3.0) {
    std::uniform_real_distribution<double> ua(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> uh(-h3_range, h3_range);
    const double alpha = ua(rng);
    return {std::cos(alpha), std::sin(alpha), uh(rng)};
}

// Momentum pairing with an algebra element: h1 and h3 are dual to the two
// translation generators, h2 to the rotation generator.
double pair_momentum(const Covector& p, const AlgebraElement& X) {
    return p.h1 * X.a + p.h3 * X.b + p.h2 * X.c;
}

// Independent form of the covector equations: the i-th rate is the pairing
// of p with [u, f_i], where u is the momentum gradient of the energy and
// f_i runs over the dual basis.
Covector coadjoint_rate(const Covector& p) {
    const AlgebraElement u{p.h1, 0.0, p.h2};
    const AlgebraElement f1{1.0, 0.0, 0.0};
    const AlgebraElement f2{0.0, 0.0, 1.0};
    const AlgebraElement f3{0.0, 1.0, 0.0};
    return {pair_momentum(p, bracket(u, f1)), pair_momentum(p, bracket(u, f2)),
            pair_momentum(p, bracket(u, f3))};
}

}  // namespace

TEST_CASE("natural covector construction") {
    const Covector p = make_natural(0.6, 0.8, 2.0);
    CHECK(is_natural(p));
    CHECK(p.h1 == doctest::Approx(0.6).epsilon(1e-12));
    const Covector q = make_natural(0.6 * (1.0 + 3e-7), 0.8 * (1.0 + 3e-7), 0.0);
    CHECK(is_natural(q));
    CHECK_THROWS_AS((void)make_natural(0.6, 0.9, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)make_natural(0.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("energy and vertical invariant") {
    const Covector p{0.6, 0.8, 1.7};
    CHECK(hamiltonian(p) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(casimir(p) == doctest::Approx(0.36 + 1.7 * 1.7).epsilon(1e-15));
}

TEST_CASE("covector rates match the structure-constant form") {
    std::mt19937 rng(21);
    for (int i = 0; i < 500; ++i) {
        const Covector p = random_natural(rng);
        const Covector lhs = vertical_field(p);
        const Covector rhs = coadjoint_rate(p);
        CHECK(std::fabs(lhs.h1 - rhs.h1) < 1e-14);
        CHECK(std::fabs(lhs.h2 - rhs.h2) < 1e-14);
        CHECK(std::fabs(lhs.h3 - rhs.h3) < 1e-14);
    }
}

TEST_CASE("horizontal rates follow the frame") {
    const ExtremalState st{{0.6, 0.8, -0.3}, {1.0, -2.0, 0.7}};
    const auto v = horizontal_field(st);
    CHECK(v[0] == doctest::Approx(0.6 * std::cos(0.7)).epsilon(1e-14));
    CHECK(v[1] == doctest::Approx(0.6 * std::sin(0.7)).epsilon(1e-14));
    CHECK(v[2] == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("equilibrium covectors integrate to axis motions") {
    for (double t : {0.1, 1.0, 5.0}) {
        GroupElement g = exponential_map(make_natural(1.0, 0.0, 0.0), t);
        CHECK(std::fabs(g.x - t) < 1e-10);
        CHECK(std::fabs(g.y) < 1e-10);
        CHECK(std::fabs(g.theta) < 1e-10);

        g = exponential_map(make_natural(-1.0, 0.0, 0.0), t);
        CHECK(std::fabs(g.x + t) < 1e-10);
        CHECK(std::fabs(g.y) < 1e-10);

        g = exponential_map(make_natural(0.0, 1.0, 0.0), t);
        CHECK(std::fabs(g.x) < 1e-10);
        CHECK(std::fabs(g.y) < 1e-10);
        CHECK(std::fabs(g.theta - t) < 1e-10);

        g = exponential_map(make_natural(0.0, -1.0, 0.0), t);
        CHECK(std::fabs(g.theta + t) < 1e-10);
    }
}

TEST_CASE("conserved quantities stay flat along trajectories") {
    std::mt19937 rng(22);
    for (int i = 0; i < 10; ++i) {
        const Covector p0 = random_natural(rng);
        const double f0 = casimir(p0);
        const Geodesic geo = integrate(p0, GroupElement{}, 10.0, 1e-3);
        double worst_h = 0.0, worst_f = 0.0;
        for (const ExtremalState& st : geo.states) {
            worst_h = std::max(worst_h, std::fabs(hamiltonian(st.p) - 0.5));
            worst_f = std::max(worst_f, std::fabs(casimir(st.p) - f0));
        }
        CHECK(worst_h < 1e-10);
        CHECK(worst_f < 1e-10);
    }
}

TEST_CASE("integration rejects bad arguments") {
    const Covector p = make_natural(1.0, 0.0, 0.0);
    CHECK_THROWS_AS((void)integrate(p, GroupElement{}, -1.0, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS((void)integrate(p, GroupElement{}, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)integrate(p, GroupElement{}, 1.0, 0.2), std::invalid_argument);
}

TEST_CASE("covector flow matches the covector half of integration") {
    std::mt19937 rng(23);
    for (int i = 0; i < 5; ++i) {
        const Covector p0 = random_natural(rng);
        const Geodesic geo = integrate(p0, GroupElement{}, 2.0, 1e-3);
        const Covector q = vertical_flow(p0, 2.0, 1e-3);
        const Covector& tail = geo.states.back().p;
        CHECK(std::fabs(q.h1 - tail.h1) < 1e-12);
        CHECK(std::fabs(q.h2 - tail.h2) < 1e-12);
        CHECK(std::fabs(q.h3 - tail.h3) < 1e-12);
    }
    const Covector p0 = random_natural(rng);
    const Covector same = vertical_flow(p0, 0.0);
    CHECK(same.h1 == doctest::Approx(p0.h1));
    CHECK(same.h2 == doctest::Approx(p0.h2));
    CHECK(same.h3 == doctest::Approx(p0.h3));
}

TEST_CASE("flowed covectors stay on the level sets") {
    std::mt19937 rng(24);
    for (int i = 0; i < 20; ++i) {
        const Covector p0 = random_natural(rng);
        const Covector q = vertical_flow(p0, 3.7);
        CHECK(std::fabs(hamiltonian(q) - 0.5) < 1e-12);
        CHECK(std::fabs(casimir(q) - casimir(p0)) < 1e-12);
    }
}

TEST_CASE("halving the step barely moves the endpoint") {
    const Covector p = make_natural(std::cos(1.1), std::sin(1.1), 0.9);
    const GroupElement a = exponential_map(p, 5.0, 1e-3);
    const GroupElement b = exponential_map(p, 5.0, 5e-4);
    CHECK(group_distance(a, b) < 1e-11);
}

TEST_CASE("shifting the base point shifts the whole trajectory") {
    const Covector p = make_natural(0.6, 0.8, 1.0);
    const GroupElement g0{0.4, -1.1, 2.3};
    const Geodesic from_identity = integrate(p, GroupElement{}, 4.0, 1e-3);
    const Geodesic from_g0 = integrate(p, g0, 4.0, 1e-3);
    CHECK(group_distance(from_g0.states.front().g, g0) < 1e-15);
    for (size_t k = 0; k < from_g0.states.size(); k += 800) {
        const GroupElement shifted = compose(g0, from_identity.states[k].g);
        CHECK(group_distance(from_g0.states[k].g, shifted) < 1e-12);
    }
}

TEST_CASE("mirrored covectors produce mirrored trajectories") {
    const Covector p = make_natural(0.6, 0.8, 1.0);
    const Covector r = make_natural(0.6, -0.8, -1.0);
    const Geodesic gp = integrate(p, GroupElement{}, 6.0, 1e-3);
    const Geodesic gr = integrate(r, GroupElement{}, 6.0, 1e-3);
    for (size_t k = 0; k < gp.states.size(); k += 500) {
        CHECK(std::fabs(gp.states[k].g.x - gr.states[k].g.x) < 1e-12);
        CHECK(std::fabs(gp.states[k].g.y + gr.states[k].g.y) < 1e-12);
        CHECK(std::fabs(gp.states[k].g.theta + gr.states[k].g.theta) < 1e-12);
    }
}

TEST_CASE("csv dump has the documented shape") {
    const Covector p = make_natural(0.0, 1.0, 0.8);
    const Geodesic geo = integrate(p, GroupElement{}, 0.01, 1e-3);
    const std::string csv = geodesic_to_csv(geo);
    std::istringstream in(csv);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "t,x,y,theta,h1,h2,h3");
    size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == geo.states.size());
}
