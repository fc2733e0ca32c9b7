#pragma once

#include <string>
#include <vector>

#include "se2geo/se2.hpp"

namespace se2geo {

inline constexpr double kDefaultStep = 1e-3;
inline constexpr double kMaxStep = 0.1;

// Left-trivialized momentum (h1, h2, h3). Natural covectors lie on the level
// set h1^2 + h2^2 = 1; make_natural enforces membership.
struct Covector {
    double h1 = 0.0;
    double h2 = 0.0;
    double h3 = 0.0;
};

// Renormalizes (h1, h2) onto the unit circle when the deviation of
// h1^2 + h2^2 from 1 is below 1e-6, rejects otherwise.
Covector make_natural(double h1, double h2, double h3);
bool is_natural(const Covector& p, double tol = 1e-12);

double hamiltonian(const Covector& p);
double casimir(const Covector& p);

struct ExtremalState {
    Covector p;
    GroupElement g;
};

// Uniformly sampled normal geodesic: states[k] at t_grid[k] = k * step.
struct Geodesic {
    Covector p0;
    double step = 0.0;
    std::vector<double> t_grid;
    std::vector<ExtremalState> states;
};

Covector vertical_field(const Covector& p);
std::array<double, 3> horizontal_field(const ExtremalState& state);

Geodesic integrate(const Covector& p0, const GroupElement& g0, double T, double step);
GroupElement exponential_map(const Covector& p0, double t, double step = kDefaultStep);
Covector vertical_flow(const Covector& p0, double tau, double step = kDefaultStep);

// CSV with header t,x,y,theta,h1,h2,h3; shortest round-trip number format.
std::string geodesic_to_csv(const Geodesic& geo);

}  // namespace se2geo
