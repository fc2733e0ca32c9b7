#include "se2geo/isometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "se2geo/cut_time.hpp"

namespace se2geo {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kPointConditionTol = 1e-12;
constexpr double kDegenerateSpread = 1e-12;

// Grid covectors closer than this to a vertical-flow equilibrium are skipped
// by the fit subsample: their projections are near-degenerate drifting
// epicycles that a line or circle fits too well.
constexpr double kEquilibriumExclusionRadius = 0.35;

struct LineFit {
    bool ok = false;
    double dir_x = 0.0, dir_y = 0.0, px = 0.0, py = 0.0, rms = 0.0;
};

struct CircleFit {
    bool ok = false;
    double cx = 0.0, cy = 0.0, radius = 0.0, rms = 0.0;
};

LineFit fit_line(const std::vector<std::array<double, 2>>& pts) {
    const double n = static_cast<double>(pts.size());
    double mx = 0.0, my = 0.0;
    for (const auto& p : pts) {
        mx += p[0];
        my += p[1];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& p : pts) {
        const double u = p[0] - mx, v = p[1] - my;
        sxx += u * u;
        sxy += u * v;
        syy += v * v;
    }
    const double tr = sxx + syy;
    const double disc = std::sqrt(std::max(0.0, (sxx - syy) * (sxx - syy) + 4.0 * sxy * sxy));
    const double lmin = 0.5 * (tr - disc);
    const double lmax = 0.5 * (tr + disc);
    // eigenvector for lmax = line direction
    double dx = sxy, dy = lmax - sxx;
    double norm = std::hypot(dx, dy);
    if (norm < 1e-300) {
        dx = lmax - syy;
        dy = sxy;
        norm = std::hypot(dx, dy);
    }
    if (norm < 1e-300) {
        dx = 1.0;
        dy = 0.0;
        norm = 1.0;
    }
    LineFit fit;
    fit.ok = true;
    fit.dir_x = dx / norm;
    fit.dir_y = dy / norm;
    fit.px = mx;
    fit.py = my;
    fit.rms = std::sqrt(std::max(0.0, lmin) / n);
    return fit;
}

CircleFit fit_circle(const std::vector<std::array<double, 2>>& pts) {
    const double n = static_cast<double>(pts.size());
    double mx = 0.0, my = 0.0;
    for (const auto& p : pts) {
        mx += p[0];
        my += p[1];
    }
    mx /= n;
    my /= n;
    double suu = 0.0, suv = 0.0, svv = 0.0, pu = 0.0, qv = 0.0, r2 = 0.0;
    for (const auto& p : pts) {
        const double u = p[0] - mx, v = p[1] - my;
        const double w = u * u + v * v;
        suu += u * u;
        suv += u * v;
        svv += v * v;
        pu += u * w;
        qv += v * w;
        r2 += w;
    }
    CircleFit fit;
    const double det = suu * svv - suv * suv;
    const double scale = std::max(suu, svv);
    if (det <= 1e-12 * scale * scale) return fit; // collinear, no circle
    const double d = (-pu * svv + qv * suv) / det;
    const double e = (-qv * suu + pu * suv) / det;
    const double f = -r2 / n;
    const double cu = -0.5 * d, cv = -0.5 * e;
    const double rad2 = cu * cu + cv * cv - f;
    if (rad2 <= 0.0) return fit;
    fit.ok = true;
    fit.cx = cu + mx;
    fit.cy = cv + my;
    fit.radius = std::sqrt(rad2);
    double acc = 0.0;
    for (const auto& p : pts) {
        const double dist = std::hypot(p[0] - fit.cx, p[1] - fit.cy) - fit.radius;
        acc += dist * dist;
    }
    fit.rms = std::sqrt(acc / n);
    return fit;
}

ordered_json projection_parameters(ProjectionKind kind, double dir_x, double dir_y, double px,
                                   double py, double cx, double cy, double radius) {
    ordered_json params;
    switch (kind) {
        case ProjectionKind::Line:
            params["direction"] = {dir_x, dir_y};
            params["through"] = {px, py};
            break;
        case ProjectionKind::Point:
            params["location"] = {px, py};
            break;
        case ProjectionKind::Circle:
            params["center"] = {cx, cy};
            params["radius"] = radius;
            break;
    }
    return params;
}

const char* kind_token(ProjectionKind kind) {
    switch (kind) {
        case ProjectionKind::Line: return "line";
        case ProjectionKind::Point: return "point";
        case ProjectionKind::Circle: return "circle";
    }
    return "unknown";
}

struct EquilibriumWitness {
    Covector p;
    AlgebraElement witness;
};

const EquilibriumWitness kEquilibria[4] = {
    {{1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}},
    {{-1.0, 0.0, 0.0}, {-1.0, 0.0, 0.0}},
    {{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}},
    {{0.0, -1.0, 0.0}, {0.0, 0.0, -1.0}},
};

const EquilibriumWitness* match_equilibrium(const Covector& p, double eps) {
    for (const EquilibriumWitness& e : kEquilibria) {
        if (std::fabs(p.h1 - e.p.h1) <= eps && std::fabs(p.h2 - e.p.h2) <= eps &&
            std::fabs(p.h3 - e.p.h3) <= eps) {
            return &e;
        }
    }
    return nullptr;
}

double equilibrium_distance(const Covector& p) {
    double best = std::numeric_limits<double>::infinity();
    for (const EquilibriumWitness& e : kEquilibria) {
        const double d = std::hypot(std::hypot(p.h1 - e.p.h1, p.h2 - e.p.h2), p.h3 - e.p.h3);
        best = std::min(best, d);
    }
    return best;
}

}  // namespace

GroupElement orbit_point(const OrbitSpec& spec, double s) {
    const AlgebraElement& X = spec.generator;
    const GroupElement& b = spec.base;
    const double cs = X.c * s;
    if (std::fabs(cs) < 1e-8) {
        const double cb = std::cos(cs), sb = std::sin(cs);
        return {X.a * s + b.x * cb - b.y * sb, X.b * s + b.x * sb + b.y * cb, b.theta + cs};
    }
    const double sin_cs = std::sin(cs);
    const double half = std::sin(0.5 * cs);
    const double versine = 2.0 * half * half;
    const double cos_cs = 1.0 - versine;
    const double ex = (X.a * sin_cs - X.b * versine) / X.c;
    const double ey = (X.b * sin_cs + X.a * versine) / X.c;
    return {ex + b.x * cos_cs - b.y * sin_cs, ey + b.x * sin_cs + b.y * cos_cs, b.theta + cs};
}

OrbitProjection classify_orbit_projection(const OrbitSpec& spec) {
    const AlgebraElement& X = spec.generator;
    if (X.a == 0.0 && X.b == 0.0 && X.c == 0.0) {
        throw std::invalid_argument("orbit projection is undefined for the zero generator");
    }
    OrbitProjection proj;
    if (X.c == 0.0) {
        const double norm = std::hypot(X.a, X.b);
        proj.kind = ProjectionKind::Line;
        proj.dir_x = X.a / norm;
        proj.dir_y = X.b / norm;
        proj.px = spec.base.x;
        proj.py = spec.base.y;
        return proj;
    }
    const double cx = -X.b / X.c;
    const double cy = X.a / X.c;
    const double du = spec.base.x - cx;
    const double dv = spec.base.y - cy;
    const double cond = du * du + dv * dv;
    if (cond <= kPointConditionTol) {
        proj.kind = ProjectionKind::Point;
        proj.px = spec.base.x;
        proj.py = spec.base.y;
        return proj;
    }
    proj.kind = ProjectionKind::Circle;
    proj.cx = cx;
    proj.cy = cy;
    proj.radius = std::sqrt(cond);
    return proj;
}

FitResult fit_projection(const std::vector<std::array<double, 2>>& points) {
    if (points.size() < 8) throw std::invalid_argument("fit_projection needs at least 8 points");

    double spread = 0.0;
    for (const auto& p : points) {
        spread = std::max(spread, std::fabs(p[0] - points[0][0]));
        spread = std::max(spread, std::fabs(p[1] - points[0][1]));
    }
    FitResult result;
    if (spread <= kDegenerateSpread) {
        result.kind = ProjectionKind::Point;
        result.px = points[0][0];
        result.py = points[0][1];
        result.residual = 0.0;
        return result;
    }

    const LineFit line = fit_line(points);
    const CircleFit circle = fit_circle(points);
    if (circle.ok && circle.rms < line.rms) {
        result.kind = ProjectionKind::Circle;
        result.cx = circle.cx;
        result.cy = circle.cy;
        result.radius = circle.radius;
        result.residual = circle.rms;
    } else {
        result.kind = ProjectionKind::Line;
        result.dir_x = line.dir_x;
        result.dir_y = line.dir_y;
        result.px = line.px;
        result.py = line.py;
        result.residual = line.rms;
    }
    return result;
}

HomogeneityResult homogeneity_test(const Covector& p, double eps, const HomogeneityOptions& opts) {
    const Covector pn = make_natural(p.h1, p.h2, p.h3);
    HomogeneityResult result;
    const EquilibriumWitness* hit = match_equilibrium(pn, eps);
    if (hit != nullptr) {
        result.homogeneous = true;
        result.witness = hit->witness;
        if (opts.confirm_geodesic) {
            const Geodesic geo = integrate(pn, GroupElement{}, opts.T, opts.step);
            const OrbitSpec spec{hit->witness, GroupElement{}};
            double worst = 0.0;
            for (size_t i = 0; i < geo.states.size(); ++i) {
                const GroupElement expected = orbit_point(spec, geo.t_grid[i]);
                worst = std::max(worst, group_distance(geo.states[i].g, expected));
            }
            result.orbit_deviation = worst;
        }
        return result;
    }
    if (opts.negative_certificate) {
        const Geodesic geo = integrate(pn, GroupElement{}, opts.T, opts.step);
        std::vector<std::array<double, 2>> pts;
        pts.reserve(geo.states.size());
        for (const ExtremalState& st : geo.states) pts.push_back({st.g.x, st.g.y});
        result.fit = fit_projection(pts);
        result.has_fit = true;
    }
    return result;
}

HomogeneitySweepResult homogeneity_sweep(int n_alpha, int n_h3, double h3_max, double eps,
                                         int geometric_samples, double T, double step) {
    if (n_alpha < 2 || n_h3 < 2) throw std::invalid_argument("grid counts must be at least 2");
    if (!(h3_max > 0.0)) throw std::invalid_argument("h3_max must be positive");
    if (geometric_samples < 0) throw std::invalid_argument("geometric sample count must be nonnegative");
    const long long total = static_cast<long long>(n_alpha) * n_h3;
    if (total > 10'000'000) throw std::invalid_argument("grid size exceeds the memory cap");

    HomogeneitySweepResult r;
    r.n_alpha = n_alpha;
    r.n_h3 = n_h3;
    r.h3_max = h3_max;
    r.eps = eps;
    r.total = total;

    std::vector<Covector> eligible;
    for (int i = 0; i < n_alpha; ++i) {
        const double alpha = 2.0 * kPi * static_cast<double>(i) / n_alpha;
        const double h1 = std::cos(alpha);
        const double h2 = std::sin(alpha);
        for (int j = 0; j < n_h3; ++j) {
            const double h3 = -h3_max + 2.0 * h3_max * static_cast<double>(j) / n_h3;
            const Covector q{h1, h2, h3};
            const EquilibriumWitness* hit = match_equilibrium(q, eps);
            if (hit != nullptr) {
                r.homogeneous.push_back(q);
                r.witnesses.push_back(hit->witness);
            } else if (geometric_samples > 0 &&
                       equilibrium_distance(q) >= kEquilibriumExclusionRadius) {
                eligible.push_back(q);
            }
        }
    }
    r.geodesic_orbital = static_cast<long long>(r.homogeneous.size()) == total;

    HomogeneityOptions confirm;
    confirm.T = T;
    confirm.step = step;
    double worst = 0.0;
    for (const Covector& q : r.homogeneous) {
        const HomogeneityResult res = homogeneity_test(q, eps, confirm);
        worst = std::max(worst, res.orbit_deviation);
    }
    r.max_orbit_deviation = worst;

    if (geometric_samples > 0 && !eligible.empty()) {
        const int count = std::min<int>(geometric_samples, static_cast<int>(eligible.size()));
        HomogeneityOptions certify;
        certify.negative_certificate = true;
        certify.T = T;
        certify.step = step;
        double min_res = std::numeric_limits<double>::infinity();
        for (int k = 0; k < count; ++k) {
            const size_t idx = (static_cast<size_t>(k) * eligible.size()) / count;
            const HomogeneityResult res = homogeneity_test(eligible[idx], eps, certify);
            if (res.has_fit) min_res = std::min(min_res, res.fit.residual);
        }
        r.geometric_samples = count;
        r.min_fit_residual = min_res;
        r.all_residuals_above_threshold = min_res >= kFitResidualThreshold;
    }
    return r;
}

std::string orbit_projection_json(const OrbitProjection& proj) {
    ordered_json j;
    j["kind"] = kind_token(proj.kind);
    j["parameters"] = projection_parameters(proj.kind, proj.dir_x, proj.dir_y, proj.px, proj.py,
                                            proj.cx, proj.cy, proj.radius);
    j["residual"] = 0.0;
    return j.dump(2);
}

std::string fit_json(const FitResult& fit) {
    ordered_json j;
    j["kind"] = kind_token(fit.kind);
    j["parameters"] = projection_parameters(fit.kind, fit.dir_x, fit.dir_y, fit.px, fit.py, fit.cx,
                                            fit.cy, fit.radius);
    j["residual"] = fit.residual;
    return j.dump(2);
}

std::string homogeneity_sweep_json(const HomogeneitySweepResult& r) {
    ordered_json j;
    j["grid"] = {{"n_alpha", r.n_alpha}, {"n_h3", r.n_h3}, {"h3_max", r.h3_max}};
    j["eps"] = r.eps;
    j["total"] = r.total;
    ordered_json hits = ordered_json::array();
    for (size_t i = 0; i < r.homogeneous.size(); ++i) {
        ordered_json h;
        h["p"] = {r.homogeneous[i].h1, r.homogeneous[i].h2, r.homogeneous[i].h3};
        h["witness"] = {r.witnesses[i].a, r.witnesses[i].b, r.witnesses[i].c};
        hits.push_back(h);
    }
    j["homogeneous"] = hits;
    j["homogeneous_count"] = r.homogeneous.size();
    j["max_orbit_deviation"] = r.max_orbit_deviation;
    j["geodesic_orbital"] = r.geodesic_orbital;
    j["verdict"] = r.geodesic_orbital ? "geodesic-orbital" : "not geodesic-orbital";
    if (r.geometric_samples > 0) {
        ordered_json g;
        g["samples"] = r.geometric_samples;
        g["min_fit_residual"] = r.min_fit_residual;
        g["threshold"] = kFitResidualThreshold;
        g["all_above_threshold"] = r.all_residuals_above_threshold;
        j["geometric_confirmation"] = g;
    }
    return j.dump(2);
}

}  // namespace se2geo
