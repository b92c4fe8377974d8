#pragma once

#include <Eigen/Dense>
#include <optional>

#include "p2dyn/measures.hpp"
#include "p2dyn/polymap.hpp"

namespace p2dyn {

/// One cocycle step in Fubini-Study geometry: the differential of f as a
/// 2x2 matrix between orthonormal frames of the orthogonal complements of
/// the unit lifts of p and f(p). Singular values of products of these
/// matrices are the metric singular values of d f^n.
struct CocycleStep {
    Eigen::Matrix2cd m;
    HomPoint next;
};

CocycleStep fs_cocycle_step(const HomPolyMap& F, const HomPoint& p,
                            int basis_variant = 0);

/// Step matrix with the image frame anchored at a caller-supplied point
/// (which must coincide with the projective image of p).
Eigen::Matrix2cd fs_step_matrix(const HomPolyMap& F, const HomPoint& p,
                                const HomPoint& image, int basis_variant = 0);

/// Orthonormal frame of the complement of the unit lift (phase-free in the
/// projective point). Columns are the frame vectors.
Eigen::Matrix<cplx, 3, 2> fs_frame(const HomPoint& p, int basis_variant = 0);

/// Log |det| of the one-step differential in Fubini-Study metric, computed
/// from the chart Jacobian and the conformal volume factor of the chart.
double logdet_fs(const HomPolyMap& F, const HomPoint& p);
double logdet_fs_in_charts(const HomPolyMap& F, const HomPoint& p,
                           int src_chart, int img_chart);

struct ScalarEstimate {
    double value = 0.0;
    double se = 0.0;
    std::size_t dropped = 0;
};

/// Weighted average of Log |det df| over the cloud (metric-corrected).
/// Samples with |det| below 1e-300 are dropped; more than 0.5% drops reject
/// the run.
ScalarEstimate sum_exponents(const HomPolyMap& f,
                             const PointCloudMeasure& cloud);

/// Top exponent from n-step orthonormalized growth along forward orbits.
ScalarEstimate top_exponent(const HomPolyMap& f, const PointCloudMeasure& cloud,
                            int n);

struct LyapunovEstimate {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    int orbit_len = 0;
    std::size_t sample_count = 0;
    double se1 = 0.0;
    double se2 = 0.0;
    double sum_via_det = 0.0;
    double se_det = 0.0;
};

/// Both exponents plus the determinant route; enforces the consistency
/// invariants (ordering, det sum within 3 sigma, the 1/2 Log d floor).
LyapunovEstimate exponent_pair(const HomPolyMap& f,
                               const PointCloudMeasure& cloud, int n,
                               int basis_variant = 0);

/// Per-point finite-time exponents (for histogram export).
struct ExponentSamples {
    std::vector<double> lambda1;
    std::vector<double> lambda2;
};
ExponentSamples exponent_samples(const HomPolyMap& f,
                                 const PointCloudMeasure& cloud, int n,
                                 int basis_variant = 0);

struct StableDirection {
    Eigen::Vector2cd v;               // frame coordinates at the start point
    double equivariance_defect = 0.0; // chordal gap of df(v_s(x)) vs v_s(f x)
    double angle_to_fiber = 0.0;      // radians; fibered maps only
};

/// Right-singular direction of the n-step cocycle for the smallest singular
/// value. Requires distinct exponents: est.lambda1 - est.lambda2 must exceed
/// 5 (se1 + se2), otherwise NoSplitting is thrown.
StableDirection stable_direction(const HomPolyMap& f, const HomPoint& start,
                                 int n, const LyapunovEstimate& est);

}  // namespace p2dyn
