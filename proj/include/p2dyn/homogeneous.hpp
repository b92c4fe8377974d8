#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "p2dyn/errors.hpp"

namespace p2dyn {

using cplx = std::complex<double>;
using triple = std::array<cplx, 3>;

/// Point of the projective plane held as a normalized representative: the
/// coordinate indexed by `chart` equals 1 exactly and all moduli are <= 1.
struct HomPoint {
    triple c{cplx(1.0), cplx(0.0), cplx(0.0)};
    int chart = 0;
};

inline double max_abs(const triple& v) {
    return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
}

inline double norm2(const triple& v) {
    return std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]));
}

/// Scales by the coordinate of maximal modulus (ties -> lowest index).
/// Throws ZeroVector when every modulus is below 1e-300.
inline HomPoint normalize(const triple& raw) {
    int best = 0;
    double best_abs = std::abs(raw[0]);
    for (int k = 1; k < 3; ++k) {
        const double a = std::abs(raw[k]);
        if (a > best_abs) {
            best = k;
            best_abs = a;
        }
    }
    if (best_abs < 1e-300) throw ZeroVector("normalize: all coordinates ~ 0");
    HomPoint p;
    const cplx pivot = raw[best];
    for (int k = 0; k < 3; ++k) p.c[k] = raw[k] / pivot;
    p.c[best] = cplx(1.0);  // kill the division rounding on the pivot slot
    p.chart = best;
    // clamp moduli that rounded just above 1
    for (int k = 0; k < 3; ++k) {
        const double a = std::abs(p.c[k]);
        if (a > 1.0) p.c[k] /= a;
    }
    return p;
}

inline triple cross(const triple& a, const triple& b) {
    return {a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]};
}

/// Fubini-Study chordal distance in [0, 1]; zero iff projectively equal.
inline double chordal_distance(const HomPoint& p, const HomPoint& q) {
    const double num = norm2(cross(p.c, q.c));
    const double den = norm2(p.c) * norm2(q.c);
    const double d = num / den;
    return d > 1.0 ? 1.0 : d;
}

inline bool approx_equal(const HomPoint& p, const HomPoint& q, double tol = 1e-9) {
    return chordal_distance(p, q) <= tol;
}

/// Affine coordinates in the point's own chart: the two non-chart slots in
/// index order.
inline std::array<cplx, 2> affine_coords(const HomPoint& p) {
    std::array<cplx, 2> u;
    int m = 0;
    for (int k = 0; k < 3; ++k)
        if (k != p.chart) u[m++] = p.c[k];
    return u;
}

/// Embeds affine coordinates (slots in index order) at the given chart.
inline HomPoint from_affine(int chart, const std::array<cplx, 2>& u) {
    triple v;
    int m = 0;
    for (int k = 0; k < 3; ++k) v[k] = (k == chart) ? cplx(1.0) : u[m++];
    return normalize(v);
}

}  // namespace p2dyn
