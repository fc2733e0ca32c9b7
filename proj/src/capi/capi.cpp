#include "se2geo/se2geo.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

#include "se2geo/classify.hpp"
#include "se2geo/cut_time.hpp"
#include "se2geo/flow.hpp"
#include "se2geo/isometry.hpp"
#include "se2geo/se2.hpp"

namespace {

thread_local std::string tl_error;

se2g_status fail(se2g_status code, const char* msg) {
    tl_error = msg;
    return code;
}

template <typename Fn>
se2g_status guarded(Fn&& fn) {
    try {
        fn();
        tl_error.clear();
        return SE2G_OK;
    } catch (const std::invalid_argument& e) {
        return fail(SE2G_INVALID_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(SE2G_INTERNAL_ERROR, e.what());
    } catch (...) {
        return fail(SE2G_INTERNAL_ERROR, "unknown error");
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

se2geo::GroupElement to_group(const double g[3]) { return {g[0], g[1], g[2]}; }

void from_group(const se2geo::GroupElement& g, double out[3]) {
    out[0] = g.x;
    out[1] = g.y;
    out[2] = g.theta;
}

void copy_events(const se2geo::SignChangeReport& rep, double* times, size_t cap,
                 size_t* count, int* degenerate) {
    if (count) *count = rep.times.size();
    if (degenerate) *degenerate = rep.degenerate ? 1 : 0;
    if (times)
        for (size_t i = 0; i < rep.times.size() && i < cap; ++i) times[i] = rep.times[i];
}

se2geo::SearchConfig to_config(const se2g_search_config* cfg) {
    se2geo::SearchConfig c;
    c.n_alpha = cfg->n_alpha;
    c.n_h3 = cfg->n_h3;
    c.h3_max = cfg->h3_max;
    c.horizon = cfg->horizon;
    c.time_step = cfg->time_step;
    c.delta = cfg->delta;
    c.covector_separation = cfg->covector_separation;
    return c;
}

}  // namespace

struct se2g_geodesic {
    se2geo::Geodesic geo;
};

extern "C" {

const char* se2g_last_error(void) { return tl_error.c_str(); }

void se2g_string_free(char* s) { std::free(s); }

double se2g_reduce_angle(double theta) { return se2geo::reduce_angle(theta); }

se2g_status se2g_compose(const double g1[3], const double g2[3], double out[3]) {
    if (!g1 || !g2 || !out) return fail(SE2G_INVALID_ARGUMENT, "null pointer");
    return guarded([&] { from_group(se2geo::compose(to_group(g1), to_group(g2)), out); });
}

se2g_status se2g_inverse(const double g[3], double out[3]) {
    if (!g || !out) return fail(SE2G_INVALID_ARGUMENT, "null pointer");
    return guarded([&] { from_group(se2geo::inverse(to_group(g)), out); });
}

se2g_status se2g_algebra_exp(double a, double b, double c, double s, double out[3]) {
    if (!out) return fail(SE2G_INVALID_ARGUMENT, "null pointer");
    return guarded([&] { from_group(se2geo::algebra_exp({a, b, c}, s), out); });
}

se2g_status se2g_group_distance(const double g1[3], const double g2[3], double* out) {
    if (!g1 || !g2 || !out) return fail(SE2G_INVALID_ARGUMENT, "null pointer");
    return guarded([&] { *out = se2geo::group_distance(to_group(g1), to_group(g2)); });
}

se2g_status se2g_geodesic_create(double h1, double h2, double h3, double T, double step,
                                 se2g_geodesic** out) {
    if (!out) return fail(SE2G_INVALID_ARGUMENT, "null pointer");
    *out = nullptr;
    return guarded([&] {
        se2geo::Covector p = se2geo::make_natural(h1, h2, h3);
        auto* handle = new se2g_geodesic{se2geo::integrate(p, se2geo::GroupElement{}, T, step)};
        *out = handle;
    });
}

void se2g_geodesic_free(se2g_geodesic* g) { delete g; }

size_t se2g_geodesic_count(const se2g_geodesic* g) { return g ? g->geo.states.size() : 0; }

se2g_status se2g_geodesic_sample(const se2g_geodesic* g, size_t idx, double out[7]) {
    if (!g || !out) return fail(SE2G_INVALID_ARGUMENT, "null pointer");
    if (idx >= g->geo.states.size()) return fail(SE2G_INVALID_ARGUMENT, "sample index out of range");
    const se2geo::ExtremalState& st = g->geo.states[idx];
    out[0] = g->geo.t_grid[idx];
    out[1] = st.g.x;
    out[2] = st.g.y;
    out[3] = st.g.theta;
    out[4] = st.p.h1;
    out[5] = st.p.h2;
    out[6] = st.p.h3;
    tl_error.clear();
    return SE2G_OK;
}

se2g_status se2g_geodesic_csv(const se2g_geodesic* g, char** out) {
    if (!g || !out) return fail(SE2G_INVALID_ARGUMENT, "null pointer");
    *out = nullptr;
    return guarded([&] { *out = dup_string(se2geo::geodesic_to_csv(g->geo)); });
}

se2g_status se2g_geodesic_cusps(const se2g_geodesic* g, double* times, size_t cap,
                                size_t* count, int* degenerate) {
    if (!g) return fail(SE2G_INVALID_ARGUMENT, "null pointer");
    return guarded([&] { copy_events(se2geo::detect_cusps(g->geo), times, cap, count, degenerate); });
}

se2g_status se2g_geodesic_inflections(const se2g_geodesic* g, double* times, size_t cap,
                                      size_t* count, int* degenerate) {
    if (!g) return fail(SE2G_INVALID_ARGUMENT, "null pointer");
    return guarded(
        [&] { copy_events(se2geo::detect_inflections(g->geo), times, cap, count, degenerate); });
}

se2g_status se2g_exponential_map(double h1, double h2, double h3, double t, double step,
                                 double out[3]) {
    if (!out) return fail(SE2G_INVALID_ARGUMENT, "null pointer");
    return guarded([&] {
        se2geo::Covector p = se2geo::make_natural(h1, h2, h3);
        from_group(se2geo::exponential_map(p, t, step), out);
    });
}

se2g_status se2g_vertical_flow(double h1, double h2, double h3, double tau, double step,
                               double out[3]) {
    if (!out) return fail(SE2G_INVALID_ARGUMENT, "null pointer");
    return guarded([&] {
        se2geo::Covector p = se2geo::make_natural(h1, h2, h3);
        se2geo::Covector q = se2geo::vertical_flow(p, tau, step);
        out[0] = q.h1;
        out[1] = q.h2;
        out[2] = q.h3;
    });
}

se2g_status se2g_classify(double h1, double h2, double h3, const char** token) {
    if (!token) return fail(SE2G_INVALID_ARGUMENT, "null pointer");
    return guarded([&] {
        se2geo::Covector p = se2geo::make_natural(h1, h2, h3);
        *token = se2geo::class_token(se2geo::classify_covector(p));
    });
}

se2g_status se2g_orbit_point(const double generator[3], const double base[3], double s,
                             double out[3]) {
    if (!generator || !base || !out) return fail(SE2G_INVALID_ARGUMENT, "null pointer");
    return guarded([&] {
        se2geo::OrbitSpec spec{{generator[0], generator[1], generator[2]}, to_group(base)};
        from_group(se2geo::orbit_point(spec, s), out);
    });
}

se2g_status se2g_orbit_projection_json(const double generator[3], const double base[3],
                                       char** out) {
    if (!generator || !base || !out) return fail(SE2G_INVALID_ARGUMENT, "null pointer");
    *out = nullptr;
    return guarded([&] {
        se2geo::OrbitSpec spec{{generator[0], generator[1], generator[2]}, to_group(base)};
        *out = dup_string(se2geo::orbit_projection_json(se2geo::classify_orbit_projection(spec)));
    });
}

se2g_status se2g_homogeneity_sweep_json(int n_alpha, int n_h3, double h3_max, double eps,
                                        int geometric_samples, double T, double step,
                                        char** out) {
    if (!out) return fail(SE2G_INVALID_ARGUMENT, "null pointer");
    *out = nullptr;
    return guarded([&] {
        se2geo::HomogeneitySweepResult r =
            se2geo::homogeneity_sweep(n_alpha, n_h3, h3_max, eps, geometric_samples, T, step);
        *out = dup_string(se2geo::homogeneity_sweep_json(r));
    });
}

void se2g_search_config_default(se2g_search_config* out) {
    if (!out) return;
    se2geo::SearchConfig c = se2geo::default_search_config();
    *out = {c.n_alpha, c.n_h3, c.h3_max, c.horizon, c.time_step, c.delta, c.covector_separation};
}

void se2g_search_config_ci(se2g_search_config* out) {
    if (!out) return;
    se2geo::SearchConfig c = se2geo::ci_search_config();
    *out = {c.n_alpha, c.n_h3, c.h3_max, c.horizon, c.time_step, c.delta, c.covector_separation};
}

se2g_status se2g_cut_time_json(double h1, double h2, double h3, const se2g_search_config* cfg,
                               char** out) {
    if (!cfg || !out) return fail(SE2G_INVALID_ARGUMENT, "null pointer");
    *out = nullptr;
    return guarded([&] {
        se2geo::Covector p = se2geo::make_natural(h1, h2, h3);
        se2geo::CutTimeEstimate est = se2geo::estimate_cut_time(p, to_config(cfg));
        *out = dup_string(se2geo::estimate_json(p, est));
    });
}

se2g_status se2g_equioptimality_json(double h1, double h2, double h3, const double* taus,
                                     size_t n_taus, const se2g_search_config* cfg, char** out) {
    if (!taus || !cfg || !out) return fail(SE2G_INVALID_ARGUMENT, "null pointer");
    *out = nullptr;
    return guarded([&] {
        se2geo::Covector p = se2geo::make_natural(h1, h2, h3);
        std::vector<double> ts(taus, taus + n_taus);
        se2geo::EquioptimalityReport rep = se2geo::equioptimality_check(p, ts, to_config(cfg));
        *out = dup_string(se2geo::equioptimality_json(rep));
    });
}

se2g_status se2g_shift_identity_check(double h1, double h2, double h3, double tau, double T,
                                      double step, double* out) {
    if (!out) return fail(SE2G_INVALID_ARGUMENT, "null pointer");
    return guarded([&] {
        se2geo::Covector p = se2geo::make_natural(h1, h2, h3);
        *out = se2geo::shift_identity_check(p, tau, T, step);
    });
}

}  // extern "C"
