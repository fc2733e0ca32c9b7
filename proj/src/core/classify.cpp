#include "se2geo/classify.hpp"

#include <cmath>
#include <stdexcept>

#include "stepper.hpp"

namespace se2geo {

namespace {

constexpr double kDegenerateAmplitude = 1e-12;
constexpr double kBisectionTol = 1e-8;

bool near(double v, double target, double eps) { return std::fabs(v - target) <= eps; }

// h-component (index 0 or 1) a short time dt after the given vertical state,
// evaluated with a single integrator step.
double component_after(const Covector& p, double dt, int comp) {
    double s[3] = {p.h1, p.h2, p.h3};
    if (dt != 0.0) detail::vertical_step(s, dt);
    return s[comp];
}

SignChangeReport scan_sign_changes(const Geodesic& geo, int comp) {
    if (geo.states.empty()) throw std::invalid_argument("geodesic has no samples");
    if (geo.step > 1e-2 + 1e-15) {
        throw std::invalid_argument("cusp/inflection detection needs sampling step <= 1e-2");
    }

    SignChangeReport report;
    double max_abs = 0.0;
    for (const ExtremalState& st : geo.states) {
        const double v = comp == 0 ? st.p.h1 : st.p.h2;
        max_abs = std::max(max_abs, std::fabs(v));
    }
    if (max_abs <= kDegenerateAmplitude) {
        report.degenerate = true;
        return report;
    }

    for (size_t i = 0; i + 1 < geo.states.size(); ++i) {
        const double a = comp == 0 ? geo.states[i].p.h1 : geo.states[i].p.h2;
        const double b = comp == 0 ? geo.states[i + 1].p.h1 : geo.states[i + 1].p.h2;
        if (a == 0.0) {
            if (report.times.empty() || report.times.back() != geo.t_grid[i]) {
                report.times.push_back(geo.t_grid[i]);
            }
            continue;
        }
        if ((a > 0.0) == (b > 0.0) || b == 0.0) continue;

        const Covector& p = geo.states[i].p;
        double lo = 0.0, hi = geo.step;
        double flo = a;
        while (hi - lo > kBisectionTol) {
            const double mid = 0.5 * (lo + hi);
            const double fm = component_after(p, mid, comp);
            if (fm == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((fm > 0.0) == (flo > 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        report.times.push_back(geo.t_grid[i] + 0.5 * (lo + hi));
    }
    return report;
}

}  // namespace

const char* class_token(GeodesicClass c) {
    switch (c) {
        case GeodesicClass::StraightLine: return "straight";
        case GeodesicClass::RotationInPlace: return "rotation";
        case GeodesicClass::NonInflexional: return "noninflexional";
        case GeodesicClass::Inflexional: return "inflexional";
        case GeodesicClass::Critical: return "critical";
    }
    return "unknown";
}

GeodesicClass classify_covector(const Covector& p, double eps) {
    const Covector pn = make_natural(p.h1, p.h2, p.h3);
    if (near(pn.h1, 1.0, eps) && near(pn.h2, 0.0, eps) && near(pn.h3, 0.0, eps)) {
        return GeodesicClass::StraightLine;
    }
    if (near(pn.h1, -1.0, eps) && near(pn.h2, 0.0, eps) && near(pn.h3, 0.0, eps)) {
        return GeodesicClass::StraightLine;
    }
    if (near(pn.h2, 1.0, eps) && near(pn.h1, 0.0, eps) && near(pn.h3, 0.0, eps)) {
        return GeodesicClass::RotationInPlace;
    }
    if (near(pn.h2, -1.0, eps) && near(pn.h1, 0.0, eps) && near(pn.h3, 0.0, eps)) {
        return GeodesicClass::RotationInPlace;
    }
    const double f = casimir(pn);
    if (std::fabs(f - 1.0) <= eps) return GeodesicClass::Critical;
    return f < 1.0 ? GeodesicClass::NonInflexional : GeodesicClass::Inflexional;
}

SignChangeReport detect_cusps(const Geodesic& geo) { return scan_sign_changes(geo, 0); }

SignChangeReport detect_inflections(const Geodesic& geo) { return scan_sign_changes(geo, 1); }

}  // namespace se2geo
