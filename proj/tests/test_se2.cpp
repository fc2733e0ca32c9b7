#include <cmath>
#include <random>

#include <doctest.h>

#include "se2geo/se2.hpp"

using namespace se2geo;

namespace {

Matrix3 mat_mul(const Matrix3& a, const Matrix3& b) {
    Matrix3 c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += a[i][k] * b[k][j];
            c[i][j] = s;
        }
    return c;
}

double mat_dist(const Matrix3& a, const Matrix3& b) {
    double m = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m = std::max(m, std::fabs(a[i][j] - b[i][j]));
    return m;
}

// Truncated-series matrix exponential with scaling and squaring; an
// implementation-independent check for the closed-form subgroup formula.
Matrix3 series_exp(Matrix3 m) {
    int squarings = 0;
    double norm = 0.0;
    for (auto& row : m)
        for (double v : row) norm = std::max(norm, std::fabs(v));
    while (norm > 0.5) {
        for (auto& row : m)
            for (double& v : row) v /= 2.0;
        norm /= 2.0;
        ++squarings;
    }
    Matrix3 acc{};
    Matrix3 term{};
    for (int i = 0; i < 3; ++i) acc[i][i] = term[i][i] = 1.0;
    for (int k = 1; k <= 24; ++k) {
        term = mat_mul(term, m);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                term[i][j] /= k;
                acc[i][j] += term[i][j];
            }
    }
    for (int s = 0; s < squarings; ++s) acc = mat_mul(acc, acc);
    return acc;
}

}  // namespace

TEST_CASE("angle reduction lands in the half-open interval") {
    CHECK(reduce_angle(0.0) == doctest::Approx(0.0));
    CHECK(reduce_angle(kPi) == doctest::Approx(kPi));
    CHECK(reduce_angle(-kPi) == doctest::Approx(kPi));
    CHECK(reduce_angle(2.0 * kPi) == doctest::Approx(0.0));
    CHECK(reduce_angle(3.0 * kPi) == doctest::Approx(kPi));
    CHECK(reduce_angle(-0.5) == doctest::Approx(-0.5));
    for (double t = -20.0; t <= 20.0; t += 0.37) {
        const double r = reduce_angle(t);
        CHECK(r > -kPi - 1e-15);
        CHECK(r <= kPi + 1e-15);
        CHECK(std::fabs(std::sin(r - t)) < 1e-12);
    }
}

TEST_CASE("composition matches matrix multiplication") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 500; ++i) {
        GroupElement g1{u(rng), u(rng), u(rng)};
        GroupElement g2{u(rng), u(rng), u(rng)};
        const Matrix3 lhs = to_matrix(compose(g1, g2));
        const Matrix3 rhs = mat_mul(to_matrix(g1), to_matrix(g2));
        CHECK(mat_dist(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("inverse composes to the identity") {
    std::mt19937 rng(12);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        GroupElement g{u(rng), u(rng), u(rng)};
        CHECK(approx_equal(compose(g, inverse(g)), GroupElement{}, 1e-12));
        CHECK(approx_equal(compose(inverse(g), g), GroupElement{}, 1e-12));
    }
}

TEST_CASE("matrix round trip recovers the element up to angle wrap") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        GroupElement g{u(rng), u(rng), u(rng)};
        const GroupElement r = from_matrix(to_matrix(g));
        CHECK(r.x == doctest::Approx(g.x).epsilon(1e-12));
        CHECK(r.y == doctest::Approx(g.y).epsilon(1e-12));
        CHECK(std::fabs(reduce_angle(r.theta - g.theta)) < 1e-12);
    }
}

TEST_CASE("bracket agrees with the matrix commutator") {
    std::mt19937 rng(14);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        AlgebraElement X{u(rng), u(rng), u(rng)};
        AlgebraElement Y{u(rng), u(rng), u(rng)};
        const Matrix3 mx = algebra_to_matrix(X);
        const Matrix3 my = algebra_to_matrix(Y);
        Matrix3 comm = mat_mul(mx, my);
        const Matrix3 yx = mat_mul(my, mx);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) comm[r][c] -= yx[r][c];
        CHECK(mat_dist(algebra_to_matrix(bracket(X, Y)), comm) < 1e-12);
    }
}

TEST_CASE("basis brackets") {
    const AlgebraElement e1{1.0, 0.0, 0.0};
    const AlgebraElement e2{0.0, 1.0, 0.0};
    const AlgebraElement e3{0.0, 0.0, 1.0};
    AlgebraElement r = bracket(e3, e1);
    CHECK(r.a == doctest::Approx(0.0));
    CHECK(r.b == doctest::Approx(1.0));
    CHECK(r.c == doctest::Approx(0.0));
    r = bracket(e3, e2);
    CHECK(r.a == doctest::Approx(-1.0));
    CHECK(r.b == doctest::Approx(0.0));
    CHECK(r.c == doctest::Approx(0.0));
    r = bracket(e1, e2);
    CHECK(std::fabs(r.a) + std::fabs(r.b) + std::fabs(r.c) < 1e-15);
}

TEST_CASE("one-parameter subgroup matches the series exponential") {
    std::mt19937 rng(15);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 300; ++i) {
        AlgebraElement X{u(rng), u(rng), u(rng)};
        const double s = u(rng);
        Matrix3 scaled = algebra_to_matrix(X);
        for (auto& row : scaled)
            for (double& v : row) v *= s;
        CHECK(mat_dist(to_matrix(algebra_exp(X, s)), series_exp(scaled)) < 1e-12);
    }
}

TEST_CASE("subgroup property of the exponential") {
    const AlgebraElement X{0.7, -0.4, 1.2};
    for (double s : {-1.5, 0.3, 2.0})
        for (double t : {-0.8, 0.5, 1.1}) {
            const GroupElement lhs = algebra_exp(X, s + t);
            const GroupElement rhs = compose(algebra_exp(X, s), algebra_exp(X, t));
            CHECK(approx_equal(lhs, rhs, 1e-12));
        }
}

TEST_CASE("zero-rotation exponential is a straight translation") {
    const GroupElement g = algebra_exp({2.0, -1.0, 0.0}, 1.5);
    CHECK(g.x == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(g.y == doctest::Approx(-1.5).epsilon(1e-14));
    CHECK(g.theta == doctest::Approx(0.0));
}

TEST_CASE("exponential stays continuous across the small-rotation branch") {
    const double s = 1.5;
    for (double c : {1e-7, -1e-7, 1e-9, -1e-9, 0.0}) {
        const AlgebraElement X{2.0, -1.0, c};
        Matrix3 scaled = algebra_to_matrix(X);
        for (auto& row : scaled)
            for (double& v : row) v *= s;
        const double tol = 1e-12 + std::fabs(c) * s * s * (std::fabs(X.a) + std::fabs(X.b));
        CHECK(mat_dist(to_matrix(algebra_exp(X, s)), series_exp(scaled)) < tol);
    }
}

TEST_CASE("frame matches directional derivatives of left translation") {
    std::mt19937 rng(16);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const AlgebraElement basis[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int i = 0; i < 50; ++i) {
        GroupElement g{u(rng), u(rng), u(rng)};
        const Frame f = frame_at(g);
        const std::array<double, 3>* cols[3] = {&f.x1, &f.x3, &f.x2};
        const double fd = 1e-6;
        for (int k = 0; k < 3; ++k) {
            const GroupElement plus = compose(g, algebra_exp(basis[k], fd));
            const GroupElement minus = compose(g, algebra_exp(basis[k], -fd));
            const double der[3] = {(plus.x - minus.x) / (2 * fd), (plus.y - minus.y) / (2 * fd),
                                   (plus.theta - minus.theta) / (2 * fd)};
            for (int c = 0; c < 3; ++c) CHECK(std::fabs(der[c] - (*cols[k])[c]) < 1e-8);
        }
    }
}
