#pragma once

#include <string>
#include <vector>

#include "se2geo/flow.hpp"
#include "se2geo/se2.hpp"

namespace se2geo {

struct SearchConfig {
    int n_alpha = 720;
    int n_h3 = 200;
    double h3_max = 4.0;
    double horizon = 10.0;
    double time_step = 5e-3;
    double delta = 2e-2;               // endpoint-match tolerance (chart metric)
    double covector_separation = 1e-3; // minimum |q - p| for a competing covector
};

SearchConfig default_search_config();
SearchConfig ci_search_config(); // 180 x 50 grid, horizon 7, step 0.02, delta 0.05

struct CutTimeEstimate {
    bool horizon_exceeded = false;
    double value = 0.0; // certified loss-of-optimality time (NaN when exceeded)
    double lower = 0.0;
    double upper = 0.0; // +inf when exceeded
    double match_s = 0.0;
    long long match_index = -1; // i_alpha * n_h3 + j_h3 of the matching covector
    SearchConfig config;
};

// Chart metric sqrt(dx^2 + dy^2 + d_arc(theta1, theta2)^2).
double group_distance(const GroupElement& g1, const GroupElement& g2);

// First-Maxwell-point search over the covector grid. Grid scan collects
// near-passes between g_q and g_p within delta: a pass with t - s beyond
// the sub-Riemannian slack of a delta-ball certifies a shortcut outright;
// a near-equal-time pass seeds a damped Newton solve of the coincidence
// system g_q(t) = g_p(t) over (alpha, h3, t) and certifies an equal-length
// meeting point when the residual refines below 1e-6 with q separated
// from p. Smallest certified t wins; ties break on the lexicographically
// smallest grid index.
CutTimeEstimate estimate_cut_time(const Covector& p, const SearchConfig& cfg);

struct EquioptimalityReport {
    Covector p;
    std::vector<double> taus;
    std::vector<CutTimeEstimate> estimates;
    bool mixed_outcomes = false;
    double max_deviation = 0.0;
    double tolerance = 0.0; // combined bracket widths: 2 * time_step
    bool passed = false;
};

EquioptimalityReport equioptimality_check(const Covector& p, const std::vector<double>& taus,
                                          const SearchConfig& cfg);

// Max over sampled t in [0, T] of the distance between the geodesic of the
// vertically shifted covector and the left-translated original geodesic.
// tau is snapped to the integration grid.
double shift_identity_check(const Covector& p, double tau, double T, double step = kDefaultStep);

std::string estimate_json(const Covector& p, const CutTimeEstimate& est);
std::string equioptimality_json(const EquioptimalityReport& report);

}  // namespace se2geo
