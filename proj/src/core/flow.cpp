#include "se2geo/flow.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

#include "stepper.hpp"

namespace se2geo {

namespace {

constexpr long long kMaxSamples = 50'000'000;

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be finite");
}

void require_finite(const Covector& p) {
    require_finite(p.h1, "h1");
    require_finite(p.h2, "h2");
    require_finite(p.h3, "h3");
}

void check_step(double step) {
    if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
    if (step > kMaxStep) throw std::invalid_argument("step must not exceed 0.1");
}

void append_double(std::string& out, double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

}  // namespace

Covector make_natural(double h1, double h2, double h3) {
    require_finite(h1, "h1");
    require_finite(h2, "h2");
    require_finite(h3, "h3");
    const double n2 = h1 * h1 + h2 * h2;
    if (std::fabs(n2 - 1.0) >= 1e-6) {
        throw std::invalid_argument("covector is not on the natural level set h1^2 + h2^2 = 1");
    }
    const double inv = 1.0 / std::sqrt(n2);
    return {h1 * inv, h2 * inv, h3};
}

bool is_natural(const Covector& p, double tol) {
    return std::isfinite(p.h3) && std::fabs(p.h1 * p.h1 + p.h2 * p.h2 - 1.0) <= tol;
}

double hamiltonian(const Covector& p) { return 0.5 * (p.h1 * p.h1 + p.h2 * p.h2); }

double casimir(const Covector& p) { return p.h1 * p.h1 + p.h3 * p.h3; }

Covector vertical_field(const Covector& p) {
    return {p.h2 * p.h3, -p.h1 * p.h3, -p.h1 * p.h2};
}

std::array<double, 3> horizontal_field(const ExtremalState& state) {
    const double c = std::cos(state.g.theta);
    const double s = std::sin(state.g.theta);
    return {state.p.h1 * c, state.p.h1 * s, state.p.h2};
}

Geodesic integrate(const Covector& p0, const GroupElement& g0, double T, double step) {
    require_finite(p0);
    require_finite(g0.x, "x");
    require_finite(g0.y, "y");
    require_finite(g0.theta, "theta");
    require_finite(T, "T");
    if (!(T > 0.0)) throw std::invalid_argument("T must be positive");
    check_step(step);
    if (step > T) throw std::invalid_argument("step must not exceed T");
    long long n = std::llround(T / step);
    if (n < 1) n = 1;
    if (n + 1 > kMaxSamples) throw std::invalid_argument("trajectory sample count exceeds the memory cap");

    Geodesic geo;
    geo.p0 = p0;
    geo.step = step;
    geo.t_grid.reserve(static_cast<size_t>(n) + 1);
    geo.states.reserve(static_cast<size_t>(n) + 1);

    double s[6] = {p0.h1, p0.h2, p0.h3, g0.x, g0.y, g0.theta};
    geo.t_grid.push_back(0.0);
    geo.states.push_back({{s[0], s[1], s[2]}, {s[3], s[4], s[5]}});
    for (long long k = 1; k <= n; ++k) {
        detail::coupled_step(s, step);
        geo.t_grid.push_back(static_cast<double>(k) * step);
        geo.states.push_back({{s[0], s[1], s[2]}, {s[3], s[4], s[5]}});
    }
    return geo;
}

GroupElement exponential_map(const Covector& p0, double t, double step) {
    Covector pn = make_natural(p0.h1, p0.h2, p0.h3);
    require_finite(t, "t");
    if (t < 0.0) throw std::invalid_argument("t must be nonnegative");
    check_step(step);
    const long long n = std::llround(t / step);
    double s[6] = {pn.h1, pn.h2, pn.h3, 0.0, 0.0, 0.0};
    for (long long k = 0; k < n; ++k) detail::coupled_step(s, step);
    return {s[3], s[4], s[5]};
}

Covector vertical_flow(const Covector& p0, double tau, double step) {
    require_finite(p0);
    require_finite(tau, "tau");
    check_step(step);
    const long long n = std::llround(std::fabs(tau) / step);
    const double h = std::copysign(step, tau);
    double s[3] = {p0.h1, p0.h2, p0.h3};
    for (long long k = 0; k < n; ++k) detail::vertical_step(s, h);
    return {s[0], s[1], s[2]};
}

std::string geodesic_to_csv(const Geodesic& geo) {
    std::string out = "t,x,y,theta,h1,h2,h3\n";
    out.reserve(out.size() + geo.states.size() * 64);
    for (size_t i = 0; i < geo.states.size(); ++i) {
        const ExtremalState& st = geo.states[i];
        append_double(out, geo.t_grid[i]);
        out.push_back(',');
        append_double(out, st.g.x);
        out.push_back(',');
        append_double(out, st.g.y);
        out.push_back(',');
        append_double(out, st.g.theta);
        out.push_back(',');
        append_double(out, st.p.h1);
        out.push_back(',');
        append_double(out, st.p.h2);
        out.push_back(',');
        append_double(out, st.p.h3);
        out.push_back('\n');
    }
    return out;
}

}  // namespace se2geo
