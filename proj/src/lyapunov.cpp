#include "p2dyn/lyapunov.hpp"

#include <atomic>
#include <cmath>

#include "p2dyn/parallel.hpp"

namespace p2dyn {

namespace {

Eigen::Vector3cd unit_lift(const HomPoint& p) {
    Eigen::Vector3cd x(p.c[0], p.c[1], p.c[2]);
    return x / x.norm();
}

constexpr int kBatches = 32;

double batch_se(const std::vector<double>& v) {
    const std::size_t n = v.size();
    if (n < 2 * kBatches) {
        // fall back to the plain standard error of the mean
        double m = pairwise_mean(v);
        double s2 = 0.0;
        for (double x : v) s2 += (x - m) * (x - m);
        return std::sqrt(s2 / (n > 1 ? (n - 1.0) * n : 1.0));
    }
    std::array<double, kBatches> means{};
    for (int b = 0; b < kBatches; ++b) {
        const std::size_t lo = n * b / kBatches, hi = n * (b + 1) / kBatches;
        means[b] = pairwise_mean(
            std::span<const double>(v.data() + lo, hi - lo));
    }
    const double grand = pairwise_mean(means);
    double s2 = 0.0;
    for (double m : means) s2 += (m - grand) * (m - grand);
    return std::sqrt(s2 / (kBatches - 1.0) / kBatches);
}

}  // namespace

Eigen::Matrix<cplx, 3, 2> fs_frame(const HomPoint& p, int basis_variant) {
    const Eigen::Vector3cd x = unit_lift(p);
    std::array<Eigen::Vector3cd, 2> seeds;
    int m = 0;
    for (int k = 0; k < 3; ++k) {
        if (k == p.chart) continue;
        Eigen::Vector3cd e = Eigen::Vector3cd::Zero();
        e(k) = cplx(1.0);
        seeds[m++] = e;
    }
    if (basis_variant != 0) {
        // deterministic alternate frame for invariance checks
        const Eigen::Vector3cd a = seeds[0], b = seeds[1];
        seeds[0] = (a + b) / std::sqrt(2.0);
        seeds[1] = (a - cplx(0, 1) * b) / std::sqrt(2.0);
    }
    Eigen::Matrix<cplx, 3, 2> frame;
    Eigen::Vector3cd b1 = seeds[0] - (x.adjoint() * seeds[0])(0) * x;
    b1.normalize();
    Eigen::Vector3cd b2 =
        seeds[1] - (x.adjoint() * seeds[1])(0) * x - (b1.adjoint() * seeds[1])(0) * b1;
    b2.normalize();
    frame.col(0) = b1;
    frame.col(1) = b2;
    return frame;
}

Eigen::Matrix2cd fs_step_matrix(const HomPolyMap& F, const HomPoint& p,
                                const HomPoint& image, int basis_variant) {
    const Eigen::Vector3cd x = unit_lift(p);
    const triple xt{x(0), x(1), x(2)};
    const triple fx = eval_raw(F, xt);
    const Eigen::Vector3cd y(fx[0], fx[1], fx[2]);
    const double ny = y.norm();
    if (ny < 1e-300) throw Indeterminate("fs_cocycle_step: image degenerates");

    const Eigen::Matrix3cd J = jacobian_lift(F, xt);
    const Eigen::Matrix<cplx, 3, 2> B = fs_frame(p, basis_variant);
    const Eigen::Matrix<cplx, 3, 2> C = fs_frame(image, basis_variant);
    return (C.adjoint() * J * B) / ny;
}

CocycleStep fs_cocycle_step(const HomPolyMap& F, const HomPoint& p,
                            int basis_variant) {
    CocycleStep step;
    step.next = eval_map(F, p);
    step.m = fs_step_matrix(F, p, step.next, basis_variant);
    return step;
}

double logdet_fs_in_charts(const HomPolyMap& F, const HomPoint& p,
                           int src_chart, int img_chart) {
    const TangentFrame fr = tangent_map_in_charts(F, p, src_chart, img_chart);
    const double det = std::abs(fr.m.determinant());
    if (det < 1e-300) throw CriticalHit("logdet_fs: vanishing determinant");
    // conformal volume factor of the chart embedding: the metric determinant
    // in affine coordinates u is (1 + |u|^2)^{-3}
    const triple fx = eval_raw(F, p.c);
    const cplx piv_src = p.c[src_chart], piv_img = fx[img_chart];
    double nsrc = 0.0, nimg = 0.0;
    for (int k = 0; k < 3; ++k) {
        if (k != src_chart) nsrc += std::norm(p.c[k] / piv_src);
        if (k != img_chart) nimg += std::norm(fx[k] / piv_img);
    }
    return std::log(det) +
           1.5 * (std::log1p(nsrc) - std::log1p(nimg));
}

double logdet_fs(const HomPolyMap& F, const HomPoint& p) {
    const HomPoint fp = eval_map(F, p);
    return logdet_fs_in_charts(F, p, p.chart, fp.chart);
}

ScalarEstimate sum_exponents(const HomPolyMap& f,
                             const PointCloudMeasure& cloud) {
    const std::size_t n = cloud.points.size();
    std::vector<double> vals(n, 0.0);
    std::vector<char> ok(n, 0);
    parallel_for(n, [&](std::size_t i) {
        try {
            vals[i] = logdet_fs(f, cloud.points[i]);
            ok[i] = 1;
        } catch (const CriticalHit&) {
            ok[i] = 0;
        }
    });
    std::vector<double> kept;
    kept.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        if (ok[i]) kept.push_back(vals[i]);
    const std::size_t dropped = n - kept.size();
    if (dropped * 200 > n)
        throw CriticalHit("sum_exponents: more than 0.5% samples critical");
    ScalarEstimate est;
    est.value = pairwise_mean(kept);
    est.se = batch_se(kept);
    est.dropped = dropped;
    return est;
}

ExponentSamples exponent_samples(const HomPolyMap& f,
                                 const PointCloudMeasure& cloud, int n,
                                 int basis_variant) {
    const std::size_t count = cloud.points.size();
    ExponentSamples out;
    out.lambda1.assign(count, std::nan(""));
    out.lambda2.assign(count, std::nan(""));
    parallel_for(count, [&](std::size_t i) {
        HomPoint x = cloud.points[i];
        Eigen::Matrix2cd Q = Eigen::Matrix2cd::Identity();
        double l1 = 0.0, l2 = 0.0;
        for (int s = 0; s < n; ++s) {
            const CocycleStep st = fs_cocycle_step(f, x, basis_variant);
            const Eigen::Matrix2cd A = st.m * Q;
            // modified Gram-Schmidt with positive diagonal
            const double r11 = A.col(0).norm();
            if (r11 < 1e-300) return;  // critical passage, sample dropped
            const Eigen::Vector2cd q1 = A.col(0) / r11;
            const cplx r12 = (q1.adjoint() * A.col(1))(0);
            const Eigen::Vector2cd v2 = A.col(1) - q1 * r12;
            const double r22 = v2.norm();
            if (r22 < 1e-300) return;
            Q.col(0) = q1;
            Q.col(1) = v2 / r22;
            l1 += std::log(r11);
            l2 += std::log(r22);
            x = st.next;
        }
        out.lambda1[i] = l1 / n;
        out.lambda2[i] = l2 / n;
    });
    return out;
}

ScalarEstimate top_exponent(const HomPolyMap& f, const PointCloudMeasure& cloud,
                            int n) {
    if (n < 20) throw ConfigError("top_exponent: n >= 20");
    const ExponentSamples s = exponent_samples(f, cloud, n);
    std::vector<double> kept;
    kept.reserve(s.lambda1.size());
    for (double v : s.lambda1)
        if (!std::isnan(v)) kept.push_back(v);
    const std::size_t dropped = s.lambda1.size() - kept.size();
    if (dropped * 200 > s.lambda1.size())
        throw CriticalHit("top_exponent: more than 0.5% samples critical");
    return {pairwise_mean(kept), batch_se(kept), dropped};
}

LyapunovEstimate exponent_pair(const HomPolyMap& f,
                               const PointCloudMeasure& cloud, int n,
                               int basis_variant) {
    if (n < 20) throw ConfigError("exponent_pair: n >= 20");
    const ExponentSamples s = exponent_samples(f, cloud, n, basis_variant);
    std::vector<double> k1, k2;
    k1.reserve(s.lambda1.size());
    k2.reserve(s.lambda2.size());
    for (std::size_t i = 0; i < s.lambda1.size(); ++i) {
        if (std::isnan(s.lambda1[i])) continue;
        k1.push_back(s.lambda1[i]);
        k2.push_back(s.lambda2[i]);
    }
    if ((s.lambda1.size() - k1.size()) * 200 > s.lambda1.size())
        throw CriticalHit("exponent_pair: more than 0.5% samples critical");

    LyapunovEstimate est;
    est.lambda1 = pairwise_mean(k1);
    est.lambda2 = pairwise_mean(k2);
    est.se1 = batch_se(k1);
    est.se2 = batch_se(k2);
    if (est.lambda1 < est.lambda2) {
        std::swap(est.lambda1, est.lambda2);
        std::swap(est.se1, est.se2);
    }
    est.orbit_len = n;
    est.sample_count = k1.size();

    const ScalarEstimate det = sum_exponents(f, cloud);
    est.sum_via_det = det.value;
    est.se_det = det.se;

    const double slack = 1e-9;
    if (std::abs(est.lambda1 + est.lambda2 - est.sum_via_det) >
        3.0 * (est.se1 + est.se2) + slack)
        throw InconsistentCocycle(
            "exponent_pair: lambda1+lambda2 disagrees with the det route");
    const double floor = 0.5 * std::log(static_cast<double>(f.degree()));
    if (est.lambda2 < floor - 3.0 * est.se2 - slack)
        throw InconsistentCocycle(
            "exponent_pair: lambda2 below the 1/2 Log d floor");
    return est;
}

StableDirection stable_direction(const HomPolyMap& f, const HomPoint& start,
                                 int n, const LyapunovEstimate& est) {
    if (!(est.lambda1 - est.lambda2 > 5.0 * (est.se1 + est.se2)))
        throw NoSplitting("stable_direction: exponents are not separated");

    const auto product = [&](const HomPoint& p0) {
        Eigen::Matrix2cd P = Eigen::Matrix2cd::Identity();
        HomPoint x = p0;
        for (int s = 0; s < n; ++s) {
            const CocycleStep st = fs_cocycle_step(f, x);
            P = st.m * P;
            x = st.next;
        }
        return P;
    };
    const auto vmin = [](const Eigen::Matrix2cd& P) {
        Eigen::JacobiSVD<Eigen::Matrix2cd> svd(P, Eigen::ComputeFullV);
        return Eigen::Vector2cd(svd.matrixV().col(1));
    };

    const Eigen::Vector2cd vx = vmin(product(start));
    const CocycleStep st = fs_cocycle_step(f, start);
    const Eigen::Vector2cd pushed = st.m * vx;
    const Eigen::Vector2cd vfx = vmin(product(st.next));
    const double defect =
        std::abs(pushed(0) * vfx(1) - pushed(1) * vfx(0)) /
        (pushed.norm() * vfx.norm());

    StableDirection out;
    out.v = vx;
    out.equivariance_defect = defect;
    if (f.fibered()) {
        const Eigen::Vector3cd x = unit_lift(start);
        Eigen::Vector3cd e2 = Eigen::Vector3cd::Zero();
        e2(2) = cplx(1.0);
        const Eigen::Vector3cd t = e2 - (x.adjoint() * e2)(0) * x;
        const Eigen::Matrix<cplx, 3, 2> B = fs_frame(start);
        const Eigen::Vector2cd fib = B.adjoint() * t;
        const double c = std::abs((vx.adjoint() * fib)(0)) /
                         (vx.norm() * fib.norm());
        out.angle_to_fiber = std::acos(std::min(1.0, c));
    }
    return out;
}

}  // namespace p2dyn
