#pragma once

#include <array>

namespace se2geo {

inline constexpr double kPi = 3.14159265358979323846;

// A proper planar motion (x, y, theta). The angle is stored unreduced so
// trajectories stay continuous; reduce_angle maps to (-pi, pi] on demand.
struct GroupElement {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;
};

// Lie algebra element a*E13 + b*E23 + c*(E21 - E12).
struct AlgebraElement {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

// Values of the left-invariant frame fields X1, X2, X3 at a group element,
// as (x, y, theta) coordinate vectors.
struct Frame {
    std::array<double, 3> x1;
    std::array<double, 3> x2;
    std::array<double, 3> x3;
};

using Matrix3 = std::array<std::array<double, 3>, 3>;

double reduce_angle(double theta);

GroupElement compose(const GroupElement& g1, const GroupElement& g2);
GroupElement inverse(const GroupElement& g);
bool approx_equal(const GroupElement& g1, const GroupElement& g2, double tol = 1e-9);

Matrix3 to_matrix(const GroupElement& g);
GroupElement from_matrix(const Matrix3& m);
Matrix3 algebra_to_matrix(const AlgebraElement& X);

AlgebraElement bracket(const AlgebraElement& X, const AlgebraElement& Y);
GroupElement algebra_exp(const AlgebraElement& X, double s);

Frame frame_at(const GroupElement& g);

}  // namespace se2geo
