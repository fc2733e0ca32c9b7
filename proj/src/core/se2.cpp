#include "se2geo/se2.hpp"

#include <cmath>

namespace se2geo {

double reduce_angle(double theta) {
    double r = std::remainder(theta, 2.0 * kPi);
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
}

GroupElement compose(const GroupElement& g1, const GroupElement& g2) {
    const double c = std::cos(g1.theta);
    const double s = std::sin(g1.theta);
    return {g1.x + g2.x * c - g2.y * s, g1.y + g2.x * s + g2.y * c, g1.theta + g2.theta};
}

GroupElement inverse(const GroupElement& g) {
    const double c = std::cos(g.theta);
    const double s = std::sin(g.theta);
    return {-g.x * c - g.y * s, g.x * s - g.y * c, -g.theta};
}

bool approx_equal(const GroupElement& g1, const GroupElement& g2, double tol) {
    return std::fabs(g1.x - g2.x) <= tol && std::fabs(g1.y - g2.y) <= tol &&
           std::fabs(reduce_angle(g1.theta - g2.theta)) <= tol;
}

Matrix3 to_matrix(const GroupElement& g) {
    const double c = std::cos(g.theta);
    const double s = std::sin(g.theta);
    return {{{c, -s, g.x}, {s, c, g.y}, {0.0, 0.0, 1.0}}};
}

GroupElement from_matrix(const Matrix3& m) {
    return {m[0][2], m[1][2], std::atan2(m[1][0], m[0][0])};
}

Matrix3 algebra_to_matrix(const AlgebraElement& X) {
    return {{{0.0, -X.c, X.a}, {X.c, 0.0, X.b}, {0.0, 0.0, 0.0}}};
}

AlgebraElement bracket(const AlgebraElement& X, const AlgebraElement& Y) {
    return {X.b * Y.c - Y.b * X.c, X.c * Y.a - Y.c * X.a, 0.0};
}

GroupElement algebra_exp(const AlgebraElement& X, double s) {
    const double cs = X.c * s;
    if (std::fabs(cs) < 1e-8) {
        return {X.a * s, X.b * s, cs};
    }
    const double sin_cs = std::sin(cs);
    const double half = std::sin(0.5 * cs);
    const double versine = 2.0 * half * half; // 1 - cos(cs), cancellation-free
    return {(X.a * sin_cs - X.b * versine) / X.c, (X.b * sin_cs + X.a * versine) / X.c, cs};
}

Frame frame_at(const GroupElement& g) {
    const double c = std::cos(g.theta);
    const double s = std::sin(g.theta);
    return {{{c, s, 0.0}}, {{0.0, 0.0, 1.0}}, {{-s, c, 0.0}}};
}

}  // namespace se2geo
