#pragma once

#include <vector>

#include "se2geo/flow.hpp"

namespace se2geo {

enum class GeodesicClass {
    StraightLine,
    RotationInPlace,
    NonInflexional,
    Inflexional,
    Critical,
};

// Lowercase serialization token: straight, rotation, noninflexional,
// inflexional, critical.
const char* class_token(GeodesicClass c);

// Equilibria of the vertical flow map to StraightLine / RotationInPlace;
// everything else is classified by the Casimir h1^2 + h3^2 against the
// separatrix value 1.
GeodesicClass classify_covector(const Covector& p, double eps = 1e-9);

struct SignChangeReport {
    std::vector<double> times;
    bool degenerate = false;
};

// Sign changes of h1 along the geodesic, bisection-refined to 1e-8.
// At these times the planar velocity vanishes (cusps of the projection).
// degenerate is set when h1 vanishes identically (point projection).
SignChangeReport detect_cusps(const Geodesic& geo);

// Sign changes of h2 (curvature sign flips of the projection).
SignChangeReport detect_inflections(const Geodesic& geo);

}  // namespace se2geo
