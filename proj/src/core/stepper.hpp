#pragma once

#include <cmath>

namespace se2geo::detail {

// Coupled state layout: (h1, h2, h3, x, y, theta).

inline void coupled_rhs(const double s[6], double d[6]) {
    d[0] = s[1] * s[2];
    d[1] = -s[0] * s[2];
    d[2] = -s[0] * s[1];
    d[3] = s[0] * std::cos(s[5]);
    d[4] = s[0] * std::sin(s[5]);
    d[5] = s[1];
}

inline void vertical_rhs(const double s[3], double d[3]) {
    d[0] = s[1] * s[2];
    d[1] = -s[0] * s[2];
    d[2] = -s[0] * s[1];
}

template <int N, void (*Rhs)(const double*, double*)>
inline void rk4_step(double s[N], double h) {
    double k1[N], k2[N], k3[N], k4[N], tmp[N];
    Rhs(s, k1);
    for (int i = 0; i < N; ++i) tmp[i] = s[i] + 0.5 * h * k1[i];
    Rhs(tmp, k2);
    for (int i = 0; i < N; ++i) tmp[i] = s[i] + 0.5 * h * k2[i];
    Rhs(tmp, k3);
    for (int i = 0; i < N; ++i) tmp[i] = s[i] + h * k3[i];
    Rhs(tmp, k4);
    for (int i = 0; i < N; ++i) s[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

inline void coupled_step(double s[6], double h) { rk4_step<6, coupled_rhs>(s, h); }
inline void vertical_step(double s[3], double h) { rk4_step<3, vertical_rhs>(s, h); }

}  // namespace se2geo::detail
