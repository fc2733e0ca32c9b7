#include "se2geo/cut_time.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "stepper.hpp"

namespace se2geo {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr long long kMaxTimeSamples = 200'000;
constexpr long long kMaxGridCells = 2'000'000;
constexpr double kRefineResidualTol = 1e-6;
constexpr int kMaxNewtonIterations = 30;
constexpr double kSeedDistance = 0.8;  // equal-time dip depth worth refining
constexpr double kSeedSpacing = 0.2;   // min dip separation in time per covector
constexpr int kSeedRingSize = 12;
constexpr double kTrustTime = 0.75;
constexpr double kTimeFloorCells = 4.0;
constexpr double kMaxCovectorStep = 0.5;  // per-iteration cap on (alpha, h3) motion

double norm3(double a, double b, double c) { return std::sqrt(a * a + b * b + c * c); }

void validate_config(const SearchConfig& cfg) {
    if (cfg.n_alpha < 2 || cfg.n_h3 < 2)
        throw std::invalid_argument("grid counts must be at least 2");
    const double reals[] = {cfg.h3_max, cfg.horizon, cfg.time_step, cfg.delta,
                            cfg.covector_separation};
    for (double v : reals)
        if (!std::isfinite(v)) throw std::invalid_argument("search config values must be finite");
    if (!(cfg.h3_max > 0.0) || !(cfg.horizon > 0.0) || !(cfg.time_step > 0.0) ||
        !(cfg.delta > 0.0))
        throw std::invalid_argument("h3_max, horizon, time_step, delta must be positive");
    if (!(cfg.covector_separation >= 0.0))
        throw std::invalid_argument("covector separation must be nonnegative");
    if (!(cfg.time_step < cfg.horizon))
        throw std::invalid_argument("time_step must be smaller than horizon");
    if (cfg.time_step > kMaxStep)
        throw std::invalid_argument("time_step must not exceed 0.1");
    const long long samples = static_cast<long long>(std::floor(cfg.horizon / cfg.time_step));
    if (samples + 1 > kMaxTimeSamples)
        throw std::invalid_argument("time grid exceeds the memory cap");
    if (static_cast<long long>(cfg.n_alpha) * cfg.n_h3 > kMaxGridCells)
        throw std::invalid_argument("covector grid exceeds the memory cap");
}

// Reference-trajectory index: every sample is registered in its own cell and
// all 26 neighbors, so a query touches exactly one bucket.
class RefIndex {
public:
    void build(const std::vector<GroupElement>& ref, double cell) {
        cell_ = cell;
        n_theta_ = std::max<long long>(1, static_cast<long long>(std::ceil(2.0 * kPi / cell)));
        buckets_.reserve(ref.size() * 4);
        for (int i = 0; i < static_cast<int>(ref.size()); ++i) {
            const long long ix = grid(ref[i].x);
            const long long iy = grid(ref[i].y);
            const long long it = theta_cell(ref[i].theta);
            for (long long dx = -1; dx <= 1; ++dx)
                for (long long dy = -1; dy <= 1; ++dy)
                    for (long long dt = -1; dt <= 1; ++dt) {
                        const long long tt = (it + dt + n_theta_) % n_theta_;
                        buckets_[key(ix + dx, iy + dy, tt)].push_back(i);
                    }
        }
    }

    const std::vector<int>* near(const GroupElement& g) const {
        const auto it = buckets_.find(key(grid(g.x), grid(g.y), theta_cell(g.theta)));
        return it == buckets_.end() ? nullptr : &it->second;
    }

private:
    long long grid(double v) const { return static_cast<long long>(std::floor(v / cell_)); }
    long long theta_cell(double theta) const {
        const double r = reduce_angle(theta);
        long long it = static_cast<long long>(std::floor((r + kPi) / cell_));
        it %= n_theta_;
        return it < 0 ? it + n_theta_ : it;
    }
    static long long key(long long ix, long long iy, long long it) {
        return (ix * 2'000'003LL + iy) * 2'000'003LL + it;
    }

    double cell_ = 1.0;
    long long n_theta_ = 1;
    std::unordered_map<long long, std::vector<int>> buckets_;
};

// A local minimum in t of the equal-time separation between g_q and g_p.
struct Dip {
    double t0;
    double dist;
    int i;
    int j;
};

struct Seed {
    double t0;
    long long gi;
    double alpha;
    double h3;
    double dist;
};

// Keeps at most kSeedRingSize dips per covector, clustered by t0 with
// kSeedSpacing separation; the deepest dip wins within a cluster and
// across clusters once the ring is full.
void ring_insert(std::vector<Dip>& ring, const Dip& d) {
    for (Dip& e : ring) {
        if (std::fabs(e.t0 - d.t0) < kSeedSpacing) {
            if (d.dist < e.dist) e = d;
            return;
        }
    }
    if (static_cast<int>(ring.size()) < kSeedRingSize) {
        ring.push_back(d);
        return;
    }
    size_t worst = 0;
    for (size_t i = 1; i < ring.size(); ++i)
        if (ring[i].dist > ring[worst].dist) worst = i;
    if (d.dist < ring[worst].dist) ring[worst] = d;
}

struct Refined {
    bool ok = false;
    double t = 0.0;
    double alpha = 0.0;
    double h3 = 0.0;
};

class Refiner {
public:
    Refiner(const Covector& p, const SearchConfig& cfg, double horizon_eff)
        : p_(p),
          cfg_(cfg),
          horizon_eff_(horizon_eff),
          trust_t_(kTrustTime + 2.0 * cfg.time_step) {}

    double trust_t() const { return trust_t_; }

    Refined run(const Seed& seed) const {
        double a = seed.alpha, b = seed.h3, t = seed.t0;
        double R[3];
        for (int iter = 0; iter < kMaxNewtonIterations; ++iter) {
            const int n = steps_for(t);
            residual(a, b, t, n, R);
            const double rn = norm3(R[0], R[1], R[2]);
            if (rn <= kRefineResidualTol) return finish(a, b, t);

            double J[3][3];
            if (!jacobian(a, b, t, n, J)) return {};
            double st[3];
            if (!solve3(J, R, st)) return {};
            const double sc = std::max({1.0, std::fabs(st[0]) / kMaxCovectorStep,
                                        std::fabs(st[1]) / kMaxCovectorStep});
            st[0] /= sc;
            st[1] /= sc;
            st[2] /= sc;

            bool moved = false;
            double lam = 1.0;
            for (int bt = 0; bt < 5 && !moved; ++bt) {
                const double na = a - lam * st[0];
                const double nb = b - lam * st[1];
                if (std::fabs(nb) > cfg_.h3_max + 4.0) return {};
                const double nt = clamp(t - lam * st[2],
                                        std::max(1e-3, seed.t0 - trust_t_),
                                        seed.t0 + trust_t_);
                double R2[3];
                residual(na, nb, nt, steps_for(nt), R2);
                if (norm3(R2[0], R2[1], R2[2]) < rn) {
                    a = na;
                    b = nb;
                    t = nt;
                    moved = true;
                }
                lam *= 0.5;
            }
            if (!moved) return {};
        }
        return {};
    }

private:
    int steps_for(double t) const {
        return std::max(1, static_cast<int>(std::ceil(t / cfg_.time_step - 1e-12)));
    }

    void residual(double a, double b, double t, int n, double R[3]) const {
        double sq[6] = {std::cos(a), std::sin(a), b, 0.0, 0.0, 0.0};
        double sp[6] = {p_.h1, p_.h2, p_.h3, 0.0, 0.0, 0.0};
        const double h = t / n;
        for (int k = 0; k < n; ++k) {
            detail::coupled_step(sq, h);
            detail::coupled_step(sp, h);
        }
        R[0] = sq[3] - sp[3];
        R[1] = sq[4] - sp[4];
        R[2] = reduce_angle(sq[5] - sp[5]);
    }

    bool jacobian(double a, double b, double t, int n, double J[3][3]) const {
        const double fd = 1e-4;
        double Rp[3], Rm[3];
        const double vars[3] = {a, b, t};
        for (int c = 0; c < 3; ++c) {
            double vp[3] = {vars[0], vars[1], vars[2]};
            double vm[3] = {vars[0], vars[1], vars[2]};
            vp[c] += fd;
            vm[c] -= fd;
            if (c == 2 && vm[2] <= 0.0) return false;
            residual(vp[0], vp[1], vp[2], n, Rp);
            residual(vm[0], vm[1], vm[2], n, Rm);
            for (int r = 0; r < 3; ++r) J[r][c] = (Rp[r] - Rm[r]) / (2.0 * fd);
        }
        return true;
    }

    // Gaussian elimination with partial pivoting; x solves J x = R.
    static bool solve3(const double J[3][3], const double R[3], double x[3]) {
        double m[3][4];
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) m[r][c] = J[r][c];
            m[r][3] = R[r];
        }
        for (int c = 0; c < 3; ++c) {
            int piv = c;
            for (int r = c + 1; r < 3; ++r)
                if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
            if (std::fabs(m[piv][c]) < 1e-12) return false;
            if (piv != c)
                for (int k = c; k < 4; ++k) std::swap(m[piv][k], m[c][k]);
            for (int r = c + 1; r < 3; ++r) {
                const double f = m[r][c] / m[c][c];
                for (int k = c; k < 4; ++k) m[r][k] -= f * m[c][k];
            }
        }
        for (int r = 2; r >= 0; --r) {
            double acc = m[r][3];
            for (int c = r + 1; c < 3; ++c) acc -= m[r][c] * x[c];
            x[r] = acc / m[r][r];
        }
        return true;
    }

    Refined finish(double a, double b, double t) const {
        if (t < kTimeFloorCells * cfg_.delta || t > horizon_eff_) return {};
        const double dq = norm3(std::cos(a) - p_.h1, std::sin(a) - p_.h2, b - p_.h3);
        if (dq < cfg_.covector_separation) return {};
        Refined r;
        r.ok = true;
        r.t = t;
        r.alpha = a;
        r.h3 = b;
        return r;
    }

    static double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

    Covector p_;
    SearchConfig cfg_;
    double horizon_eff_;
    double trust_t_;
};

ordered_json config_json(const SearchConfig& c) {
    ordered_json j;
    j["n_alpha"] = c.n_alpha;
    j["n_h3"] = c.n_h3;
    j["h3_max"] = c.h3_max;
    j["horizon"] = c.horizon;
    j["time_step"] = c.time_step;
    j["delta"] = c.delta;
    j["covector_separation"] = c.covector_separation;
    return j;
}

}  // namespace

SearchConfig default_search_config() { return SearchConfig{}; }

SearchConfig ci_search_config() {
    SearchConfig cfg;
    cfg.n_alpha = 180;
    cfg.n_h3 = 50;
    cfg.horizon = 7.0;
    cfg.time_step = 0.02;
    cfg.delta = 0.05;
    return cfg;
}

double group_distance(const GroupElement& g1, const GroupElement& g2) {
    const double dth = reduce_angle(g1.theta - g2.theta);
    return norm3(g1.x - g2.x, g1.y - g2.y, dth);
}

CutTimeEstimate estimate_cut_time(const Covector& p_in, const SearchConfig& cfg) {
    validate_config(cfg);
    const Covector p = make_natural(p_in.h1, p_in.h2, p_in.h3);

    const double dt = cfg.time_step;
    const int n = static_cast<int>(std::floor(cfg.horizon / dt + 1e-9));
    const double horizon_eff = n * dt;
    const double time_floor = kTimeFloorCells * cfg.delta;
    const double interior_margin = 4.0 * std::sqrt(cfg.delta) + 3.0 * cfg.delta;
    const int margin_steps = static_cast<int>(std::ceil(interior_margin / dt));

    std::vector<GroupElement> ref(n + 1);
    {
        double s[6] = {p.h1, p.h2, p.h3, 0.0, 0.0, 0.0};
        ref[0] = GroupElement{};
        for (int k = 1; k <= n; ++k) {
            detail::coupled_step(s, dt);
            ref[k] = {s[3], s[4], s[5]};
        }
    }
    RefIndex index;
    index.build(ref, cfg.delta);

    bool have_best = false;
    double best_t = std::numeric_limits<double>::infinity();
    long long best_gi = -1;
    double best_s = 0.0;
    const auto offer = [&](double t, long long gi, double s) {
        if (!have_best || t < best_t || (t == best_t && gi < best_gi)) {
            have_best = true;
            best_t = t;
            best_gi = gi;
            best_s = s;
        }
    };

    Refiner refiner(p, cfg, horizon_eff);
    std::vector<Seed> seeds;
    std::vector<std::vector<Dip>> rows(cfg.n_alpha);
    std::vector<Dip> ring;

    // A dip survives only if no grid-neighbor covector has a deeper dip
    // near the same time, so each coincidence basin is refined once.
    const auto beaten = [](const Dip& d, const std::vector<Dip>& others, int j_lo, int j_hi,
                           long long gi, int n_h3) {
        for (const Dip& o : others) {
            if (o.j < j_lo || o.j > j_hi) continue;
            if (std::fabs(o.t0 - d.t0) > 0.3) continue;
            const long long ogi = static_cast<long long>(o.i) * n_h3 + o.j;
            if (ogi == gi) continue;
            if (o.dist < d.dist || (o.dist == d.dist && ogi < gi)) return true;
        }
        return false;
    };
    const auto emit_row = [&](int i) {
        const std::vector<Dip>& cur = rows[i];
        const std::vector<Dip>& prev = rows[(i + cfg.n_alpha - 1) % cfg.n_alpha];
        const std::vector<Dip>& next = rows[(i + 1) % cfg.n_alpha];
        for (const Dip& d : cur) {
            const long long gi = static_cast<long long>(d.i) * cfg.n_h3 + d.j;
            if (beaten(d, cur, d.j - 1, d.j + 1, gi, cfg.n_h3) ||
                beaten(d, prev, d.j, d.j, gi, cfg.n_h3) ||
                beaten(d, next, d.j, d.j, gi, cfg.n_h3))
                continue;
            const double alpha = 2.0 * kPi * static_cast<double>(d.i) / cfg.n_alpha;
            const double h3 =
                -cfg.h3_max + 2.0 * cfg.h3_max * static_cast<double>(d.j) / cfg.n_h3;
            seeds.push_back(Seed{d.t0, gi, alpha, h3, d.dist});
        }
    };

    for (int i = 0; i < cfg.n_alpha; ++i) {
        const double alpha = 2.0 * kPi * static_cast<double>(i) / cfg.n_alpha;
        const double h1 = std::cos(alpha);
        const double h2 = std::sin(alpha);
        for (int j = 0; j < cfg.n_h3; ++j) {
            const double h3 = -cfg.h3_max + 2.0 * cfg.h3_max * static_cast<double>(j) / cfg.n_h3;
            if (norm3(h1 - p.h1, h2 - p.h2, h3 - p.h3) < cfg.covector_separation) continue;
            const long long gi = static_cast<long long>(i) * cfg.n_h3 + j;

            ring.clear();
            double s6[6] = {h1, h2, h3, 0.0, 0.0, 0.0};
            double d_km2 = std::numeric_limits<double>::infinity();
            double d_km1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                detail::coupled_step(s6, dt);
                const double s_time = k * dt;
                if (have_best && s_time > best_t + refiner.trust_t() + dt) break;
                const GroupElement g{s6[3], s6[4], s6[5]};

                const double d_k = group_distance(g, ref[k]);
                if (k >= 2 && d_km1 <= kSeedDistance && d_km1 <= d_km2 && d_km1 <= d_k &&
                    (k - 1) * dt >= time_floor)
                    ring_insert(ring, Dip{(k - 1) * dt, d_km1, i, j});
                d_km2 = d_km1;
                d_km1 = d_k;

                const std::vector<int>* bucket = index.near(g);
                if (bucket == nullptr) continue;
                for (const int m : *bucket) {
                    if (m - k < margin_steps) continue;
                    const double t_time = m * dt;
                    if (t_time < time_floor) continue;
                    if (group_distance(g, ref[m]) > cfg.delta) continue;
                    offer(t_time, gi, s_time);
                }
            }
            rows[i].insert(rows[i].end(), ring.begin(), ring.end());
        }
        if (i >= 2) {
            emit_row(i - 1);
            if (i - 2 >= 2) rows[i - 2].clear();
        }
    }
    if (cfg.n_alpha >= 2) emit_row(cfg.n_alpha - 1);
    emit_row(0);

    std::sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) {
        if (a.t0 != b.t0) return a.t0 < b.t0;
        if (a.gi != b.gi) return a.gi < b.gi;
        return a.dist < b.dist;
    });

    // Failed solves shadow nearby seeds so each crossing region is solved once.
    const double shadow_alpha = 1.25 * 2.0 * kPi / cfg.n_alpha;
    const double shadow_h3 = 1.25 * 2.0 * cfg.h3_max / cfg.n_h3;
    const double shadow_t = 0.25;
    std::vector<Seed> failures;
    for (const Seed& seed : seeds) {
        if (have_best && seed.t0 - refiner.trust_t() > best_t) break;
        bool shadowed = false;
        for (const Seed& f : failures) {
            if (std::fabs(seed.t0 - f.t0) <= shadow_t &&
                std::fabs(reduce_angle(seed.alpha - f.alpha)) <= shadow_alpha &&
                std::fabs(seed.h3 - f.h3) <= shadow_h3) {
                shadowed = true;
                break;
            }
        }
        if (shadowed) continue;
        const Refined r = refiner.run(seed);
        if (r.ok)
            offer(r.t, seed.gi, r.t);
        else
            failures.push_back(seed);
    }

    CutTimeEstimate est;
    est.config = cfg;
    if (have_best) {
        est.horizon_exceeded = false;
        est.value = best_t;
        est.lower = std::max(0.0, best_t - dt);
        est.upper = best_t;
        est.match_s = best_s;
        est.match_index = best_gi;
    } else {
        est.horizon_exceeded = true;
        est.value = std::numeric_limits<double>::quiet_NaN();
        est.lower = horizon_eff;
        est.upper = std::numeric_limits<double>::infinity();
        est.match_s = 0.0;
        est.match_index = -1;
    }
    return est;
}

EquioptimalityReport equioptimality_check(const Covector& p, const std::vector<double>& taus,
                                          const SearchConfig& cfg) {
    if (taus.empty()) throw std::invalid_argument("at least one tau is required");
    const Covector pn = make_natural(p.h1, p.h2, p.h3);

    EquioptimalityReport report;
    report.p = pn;
    report.taus = taus;
    report.tolerance = 2.0 * cfg.time_step;
    for (const double tau : taus) {
        if (!std::isfinite(tau)) throw std::invalid_argument("tau must be finite");
        const Covector q = tau == 0.0 ? pn : vertical_flow(pn, tau);
        report.estimates.push_back(estimate_cut_time(q, cfg));
    }

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    bool any_finite = false, any_exceeded = false;
    for (const CutTimeEstimate& e : report.estimates) {
        if (e.horizon_exceeded) {
            any_exceeded = true;
        } else {
            any_finite = true;
            lo = std::min(lo, e.value);
            hi = std::max(hi, e.value);
        }
    }
    report.mixed_outcomes = any_finite && any_exceeded;
    report.max_deviation = any_finite ? hi - lo : 0.0;
    report.passed = !report.mixed_outcomes && report.max_deviation <= report.tolerance;
    return report;
}

double shift_identity_check(const Covector& p, double tau, double T, double step) {
    const Covector pn = make_natural(p.h1, p.h2, p.h3);
    if (!std::isfinite(tau) || !std::isfinite(T)) throw std::invalid_argument("tau and T must be finite");
    if (!(T > 0.0)) throw std::invalid_argument("T must be positive");
    if (!(step > 0.0) || step > kMaxStep) throw std::invalid_argument("step must be in (0, 0.1]");

    const long long m = std::llround(tau / step);
    const long long nT = std::llround(T / step);
    if (nT < 1) throw std::invalid_argument("T must cover at least one step");
    const double tau_s = static_cast<double>(m) * step;

    // Base trajectory over every index needed by the comparison.
    const long long k_min = std::min<long long>(0, m);
    const long long k_max = nT + std::max<long long>(0, m);
    std::vector<GroupElement> base(static_cast<size_t>(k_max - k_min + 1));
    const auto at = [&](long long k) -> GroupElement& {
        return base[static_cast<size_t>(k - k_min)];
    };
    {
        double s[6] = {pn.h1, pn.h2, pn.h3, 0.0, 0.0, 0.0};
        at(0) = GroupElement{};
        for (long long k = 1; k <= k_max; ++k) {
            detail::coupled_step(s, step);
            at(k) = {s[3], s[4], s[5]};
        }
    }
    if (k_min < 0) {
        double s[6] = {pn.h1, pn.h2, pn.h3, 0.0, 0.0, 0.0};
        for (long long k = -1; k >= k_min; --k) {
            detail::coupled_step(s, -step);
            at(k) = {s[3], s[4], s[5]};
        }
    }

    const Covector q = tau_s == 0.0 ? pn : vertical_flow(pn, tau_s, step);
    const GroupElement g_tau_inv = inverse(at(m));
    double worst = 0.0;
    double s6[6] = {q.h1, q.h2, q.h3, 0.0, 0.0, 0.0};
    for (long long k = 0; k <= nT; ++k) {
        if (k > 0) detail::coupled_step(s6, step);
        const GroupElement shifted{s6[3], s6[4], s6[5]};
        const GroupElement expected = compose(g_tau_inv, at(k + m));
        worst = std::max(worst, group_distance(shifted, expected));
    }
    return worst;
}

std::string estimate_json(const Covector& p, const CutTimeEstimate& est) {
    ordered_json j;
    j["p"] = {p.h1, p.h2, p.h3};
    if (est.horizon_exceeded) {
        j["value"] = "horizon_exceeded";
        j["lower"] = est.lower;
        j["upper"] = nullptr;
    } else {
        j["value"] = est.value;
        j["lower"] = est.lower;
        j["upper"] = est.upper;
    }
    j["config"] = config_json(est.config);
    return j.dump(2);
}

std::string equioptimality_json(const EquioptimalityReport& report) {
    ordered_json j;
    j["p"] = {report.p.h1, report.p.h2, report.p.h3};
    j["taus"] = report.taus;
    ordered_json list = ordered_json::array();
    for (size_t i = 0; i < report.estimates.size(); ++i) {
        const CutTimeEstimate& e = report.estimates[i];
        ordered_json item;
        item["tau"] = report.taus[i];
        if (e.horizon_exceeded) {
            item["value"] = "horizon_exceeded";
            item["lower"] = e.lower;
            item["upper"] = nullptr;
        } else {
            item["value"] = e.value;
            item["lower"] = e.lower;
            item["upper"] = e.upper;
        }
        list.push_back(item);
    }
    j["estimates"] = list;
    j["mixed_outcomes"] = report.mixed_outcomes;
    j["max_deviation"] = report.max_deviation;
    j["tolerance"] = report.tolerance;
    j["passed"] = report.passed;
    if (!report.estimates.empty()) j["config"] = config_json(report.estimates.front().config);
    return j.dump(2);
}

}  // namespace se2geo
