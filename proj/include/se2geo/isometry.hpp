#pragma once

#include <array>
#include <string>
#include <vector>

#include "se2geo/classify.hpp"
#include "se2geo/flow.hpp"
#include "se2geo/se2.hpp"

namespace se2geo {

// One-parameter isometry subgroup orbit: s -> exp(s * generator) * base.
struct OrbitSpec {
    AlgebraElement generator;
    GroupElement base;
};

GroupElement orbit_point(const OrbitSpec& spec, double s);

enum class ProjectionKind { Line, Point, Circle };

struct OrbitProjection {
    ProjectionKind kind = ProjectionKind::Line;
    // Line: unit direction (dir_x, dir_y) through (px, py).
    // Point: fixed point (px, py).
    // Circle: center (cx, cy) and radius.
    double dir_x = 0.0;
    double dir_y = 0.0;
    double px = 0.0;
    double py = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    double radius = 0.0;
};

OrbitProjection classify_orbit_projection(const OrbitSpec& spec);

struct FitResult {
    ProjectionKind kind = ProjectionKind::Line;
    double dir_x = 0.0;
    double dir_y = 0.0;
    double px = 0.0;
    double py = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    double radius = 0.0;
    double residual = 0.0;
};

// Total-least-squares line fit vs algebraic circle fit; returns the model
// with the smaller RMS residual. Requires at least 8 points.
FitResult fit_projection(const std::vector<std::array<double, 2>>& points);

struct HomogeneityOptions {
    bool confirm_geodesic = true;      // for positive verdicts
    bool negative_certificate = false; // fit the projection for negative verdicts
    double T = 10.0;
    double step = kDefaultStep;
};

struct HomogeneityResult {
    bool homogeneous = false;
    AlgebraElement witness;
    double orbit_deviation = 0.0; // max group distance orbit vs geodesic
    bool has_fit = false;
    FitResult fit;
};

HomogeneityResult homogeneity_test(const Covector& p, double eps = 1e-9,
                                   const HomogeneityOptions& opts = {});

struct HomogeneitySweepResult {
    int n_alpha = 0;
    int n_h3 = 0;
    double h3_max = 0.0;
    double eps = 0.0;
    long long total = 0;
    std::vector<Covector> homogeneous;
    std::vector<AlgebraElement> witnesses;
    double max_orbit_deviation = 0.0;
    bool geodesic_orbital = false;
    // negative-certificate subsample
    int geometric_samples = 0;
    double min_fit_residual = 0.0;
    bool all_residuals_above_threshold = false;
};

inline constexpr double kFitResidualThreshold = 1e-2;

// Sweeps the natural-covector grid alpha_i = 2*pi*i/n_alpha,
// h3_j = -h3_max + 2*h3_max*j/n_h3. With geometric_samples > 0, fits the
// planar projections of that many non-equilibrium grid covectors and
// records the minimum residual.
HomogeneitySweepResult homogeneity_sweep(int n_alpha, int n_h3, double h3_max,
                                         double eps = 1e-9, int geometric_samples = 0,
                                         double T = 10.0, double step = kDefaultStep);

std::string orbit_projection_json(const OrbitProjection& proj);
std::string fit_json(const FitResult& fit);
std::string homogeneity_sweep_json(const HomogeneitySweepResult& r);

}  // namespace se2geo
