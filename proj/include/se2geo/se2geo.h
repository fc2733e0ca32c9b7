#ifndef SE2GEO_H
#define SE2GEO_H

/* C interface to the SE(2) sub-Riemannian geodesic library.
 *
 * Conventions:
 *   - group elements are double[3] = {x, y, theta};
 *   - covectors are passed as (h1, h2, h3) and must satisfy
 *     h1^2 + h2^2 = 1 up to 1e-6 (they are renormalized internally);
 *   - every function returns a status code; on failure
 *     se2g_last_error() describes the problem for the calling thread;
 *   - strings returned through char** are heap-allocated and must be
 *     released with se2g_string_free().
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum se2g_status {
    SE2G_OK = 0,
    SE2G_INVALID_ARGUMENT = 1,
    SE2G_INTERNAL_ERROR = 2
} se2g_status;

/* Message for the most recent failure on this thread; empty when none. */
const char* se2g_last_error(void);

void se2g_string_free(char* s);

/* ----- group operations ----- */

/* Wraps an angle to (-pi, pi]. */
double se2g_reduce_angle(double theta);

se2g_status se2g_compose(const double g1[3], const double g2[3], double out[3]);
se2g_status se2g_inverse(const double g[3], double out[3]);

/* One-parameter subgroup exp(s * (a*E13 + b*E23 + c*(E21 - E12))). */
se2g_status se2g_algebra_exp(double a, double b, double c, double s,
                             double out[3]);

/* Chart distance sqrt(dx^2 + dy^2 + wrapped dtheta^2). */
se2g_status se2g_group_distance(const double g1[3], const double g2[3],
                                double* out);

/* ----- geodesics ----- */

typedef struct se2g_geodesic se2g_geodesic;

/* Integrates the normal geodesic from the identity with initial covector
 * (h1, h2, h3) over [0, T] at a fixed step (0 < step <= 0.1). */
se2g_status se2g_geodesic_create(double h1, double h2, double h3, double T,
                                 double step, se2g_geodesic** out);
void se2g_geodesic_free(se2g_geodesic* g);

/* Number of stored samples (T/step + 1). */
size_t se2g_geodesic_count(const se2g_geodesic* g);

/* Fills out[7] = {t, x, y, theta, h1, h2, h3} for sample idx. */
se2g_status se2g_geodesic_sample(const se2g_geodesic* g, size_t idx,
                                 double out[7]);

/* CSV dump with header t,x,y,theta,h1,h2,h3. */
se2g_status se2g_geodesic_csv(const se2g_geodesic* g, char** out);

/* Times where the planar velocity vanishes (cusps of the projection).
 * Writes up to cap values; *count receives the full number of events and
 * *degenerate is set to 1 when the projection is a single point. */
se2g_status se2g_geodesic_cusps(const se2g_geodesic* g, double* times,
                                size_t cap, size_t* count, int* degenerate);

/* Times where the projection's curvature changes sign. */
se2g_status se2g_geodesic_inflections(const se2g_geodesic* g, double* times,
                                      size_t cap, size_t* count,
                                      int* degenerate);

/* Endpoint of the geodesic from the identity at time t. */
se2g_status se2g_exponential_map(double h1, double h2, double h3, double t,
                                 double step, double out[3]);

/* Flow of the covector subsystem alone for time tau. */
se2g_status se2g_vertical_flow(double h1, double h2, double h3, double tau,
                               double step, double out[3]);

/* Geodesic class token: straight, rotation, noninflexional, inflexional,
 * or critical. The pointer is static; do not free it. */
se2g_status se2g_classify(double h1, double h2, double h3,
                          const char** token);

/* ----- isometry orbits ----- */

/* Orbit of the one-parameter isometry subgroup generated by
 * (a, b, c) through base: exp(s*X) composed with base. */
se2g_status se2g_orbit_point(const double generator[3], const double base[3],
                             double s, double out[3]);

/* JSON report {kind, parameters, residual} for the planar projection of
 * the orbit (closed form, residual 0). */
se2g_status se2g_orbit_projection_json(const double generator[3],
                                       const double base[3], char** out);

/* JSON report of the homogeneity sweep over an n_alpha x n_h3 covector
 * grid: homogeneous points found, geodesic-orbital verdict, and fit
 * residuals for geometric_samples non-homogeneous samples. */
se2g_status se2g_homogeneity_sweep_json(int n_alpha, int n_h3, double h3_max,
                                        double eps, int geometric_samples,
                                        double T, double step, char** out);

/* ----- cut time ----- */

typedef struct se2g_search_config {
    int n_alpha;
    int n_h3;
    double h3_max;
    double horizon;
    double time_step;
    double delta;
    double covector_separation;
} se2g_search_config;

void se2g_search_config_default(se2g_search_config* out);
void se2g_search_config_ci(se2g_search_config* out);

/* JSON report {p, value | "horizon_exceeded", lower, upper, config} of the
 * first-Maxwell-point search for the geodesic with covector (h1, h2, h3). */
se2g_status se2g_cut_time_json(double h1, double h2, double h3,
                               const se2g_search_config* cfg, char** out);

/* JSON report of cut-time estimates for the covector flowed by each tau,
 * with the maximum pairwise deviation and a pass verdict. */
se2g_status se2g_equioptimality_json(double h1, double h2, double h3,
                                     const double* taus, size_t n_taus,
                                     const se2g_search_config* cfg,
                                     char** out);

/* Max chart distance over t in [0, T] between the geodesic of the flowed
 * covector and the shifted-and-translated original geodesic. */
se2g_status se2g_shift_identity_check(double h1, double h2, double h3,
                                      double tau, double T, double step,
                                      double* out);

#ifdef __cplusplus
}
#endif

#endif /* SE2GEO_H */
