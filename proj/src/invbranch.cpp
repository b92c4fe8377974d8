#include "p2dyn/invbranch.hpp"

#include <cmath>
#include <fstream>

#include "p2dyn/parallel.hpp"
#include "p2dyn/rng.hpp"

namespace p2dyn {

HomPoint refine_preimage_newton(const HomPolyMap& f, const HomPoint& target,
                                const HomPoint& approx) {
    const int src = approx.chart;
    const int img = target.chart;

    const auto img_slots = [&] {
        std::array<int, 2> s{};
        int m = 0;
        for (int k = 0; k < 3; ++k)
            if (k != img) s[m++] = k;
        return s;
    }();
    const std::array<cplx, 2> tgt{target.c[img_slots[0]], target.c[img_slots[1]]};

    HomPoint cur = approx;
    for (int it = 0; it < 30; ++it) {
        const triple fx = eval_raw(f, cur.c);
        if (std::abs(fx[img]) < 1e-300)
            throw NewtonStall("refine_preimage_newton: image leaves the chart");
        const Eigen::Vector2cd resid(fx[img_slots[0]] / fx[img] - tgt[0],
                                     fx[img_slots[1]] / fx[img] - tgt[1]);
        const TangentFrame fr = tangent_map_in_charts(f, cur, src, img);
        if (std::abs(fr.m.determinant()) < 1e-12)
            throw NewtonStall("refine_preimage_newton: singular differential");
        const Eigen::Vector2cd step = fr.m.fullPivLu().solve(resid);
        std::array<cplx, 2> u = affine_coords(cur);
        u[0] -= step(0);
        u[1] -= step(1);
        triple next;
        int m = 0;
        for (int k = 0; k < 3; ++k)
            next[k] = (k == src) ? cplx(1.0) : u[m++];
        cur = normalize(next);
        if (cur.chart != src)
            return refine_preimage_newton(f, target, cur);  // chart moved
        if (step.norm() < 1e-12) break;
    }
    if (chordal_distance(eval_map(f, cur), target) > 1e-10)
        throw NewtonStall("refine_preimage_newton: forward residual not met");
    return cur;
}

BackwardOrbit backward_orbit(const HomPolyMap& f, const HomPoint& x0, int n,
                             std::uint64_t seed) {
    if (n > 60) throw ConfigError("backward_orbit: n <= 60");
    BackwardOrbit orbit;
    orbit.seed = seed;
    orbit.points.reserve(n + 1);
    orbit.points.push_back(x0);
    orbit.cocycle.reserve(n);

    const std::size_t branch = static_cast<std::size_t>(f.degree()) * f.degree();
    HomPoint x = x0;
    for (int s = 0; s < n; ++s) {
        const std::vector<HomPoint> pre = preimages_fibered(f, x);
        HomPoint q;
        bool found = false;
        for (std::uint64_t retry = 0; retry < 16 && !found; ++retry) {
            CounterRng rng(seed, 0, static_cast<std::uint64_t>(s), retry);
            const std::size_t idx = rng.uniform_int(branch);
            const HomPoint cand = pre[idx];
            bool collided = false;
            for (std::size_t j = 0; j < pre.size(); ++j)
                if (j != idx && chordal_distance(cand, pre[j]) < 1e-8) {
                    collided = true;
                    break;
                }
            if (collided) {
                ++orbit.resampled_collisions;
                continue;
            }
            try {
                q = refine_preimage_newton(f, x, cand);
                found = true;
            } catch (const NewtonStall&) {
                ++orbit.resampled_collisions;
            }
        }
        if (!found)
            throw CriticalCollision(
                "backward_orbit: no usable preimage branch at step " +
                std::to_string(s));
        orbit.cocycle.push_back(tangent_map(f, q));
        orbit.points.push_back(q);
        x = q;
    }
    return orbit;
}

namespace {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double den = n * sxx - sx * sx;
    LineFit f;
    f.slope = (n * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

constexpr int kFitStart = 10;  // least-squares window skips the transient

}  // namespace

ContractionProfile contraction_profile(const HomPolyMap& f,
                                       const BackwardOrbit& orbit) {
    const int n_max = static_cast<int>(orbit.points.size()) - 1;
    if (n_max < 20) throw ConfigError("contraction_profile: orbit length >= 20");

    // d(f^n) at x_{-n} equals M(x_{-1}) ... M(x_{-n}); extending the orbit
    // appends one factor on the right
    ContractionProfile prof;
    prof.n_values.reserve(n_max);
    prof.s_min.reserve(n_max);
    prof.s_max.reserve(n_max);
    Eigen::Matrix2cd P = Eigen::Matrix2cd::Identity();
    for (int k = 1; k <= n_max; ++k) {
        const Eigen::Matrix2cd M =
            fs_step_matrix(f, orbit.points[k], orbit.points[k - 1]);
        P = P * M;
        Eigen::JacobiSVD<Eigen::Matrix2cd> svd(P);
        prof.n_values.push_back(k);
        prof.s_max.push_back(svd.singularValues()(0));
        prof.s_min.push_back(svd.singularValues()(1));
    }

    std::vector<double> xs, ymin, ymax;
    for (int k = kFitStart; k <= n_max; ++k) {
        xs.push_back(k);
        ymin.push_back(std::log(prof.s_min[k - 1]));
        ymax.push_back(std::log(prof.s_max[k - 1]));
    }
    const LineFit fmin = fit_line(xs, ymin);
    const LineFit fmax = fit_line(xs, ymax);
    prof.rate_min = fmin.slope;
    prof.rate_max = fmax.slope;
    prof.intercept_min = fmin.intercept;
    prof.intercept_max = fmax.intercept;
    return prof;
}

DecayReport decay_diagnostics(const std::vector<ContractionProfile>& profiles,
                              int d) {
    if (profiles.size() < 50)
        throw InsufficientData("decay_diagnostics: need >= 50 profiles");
    DecayReport rep;
    rep.profile_count = profiles.size();
    const double logd = std::log(static_cast<double>(d));

    // (a) prefactor slope, mean over profiles of per-profile fits
    std::vector<double> slopes;
    slopes.reserve(profiles.size());
    for (const auto& p : profiles) {
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < p.n_values.size(); ++i) {
            const int n = p.n_values[i];
            if (n < kFitStart) continue;
            xs.push_back(n);
            ys.push_back(n * logd - std::log(p.s_min[i]) - std::log(p.s_max[i]));
        }
        slopes.push_back(fit_line(xs, ys).slope);
    }
    rep.prefactor_slope = pairwise_mean(slopes);
    rep.prefactor_decays = rep.prefactor_slope < 0.0;

    // (b) band of d^n / s_min^2: mean of logs over profiles, per n
    const std::size_t len = profiles.front().n_values.size();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, acc = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < len; ++i) {
        const int n = profiles.front().n_values[i];
        if (n < kFitStart) continue;
        std::vector<double> logs;
        logs.reserve(profiles.size());
        for (const auto& p : profiles)
            logs.push_back(n * logd - 2.0 * std::log(p.s_min[i]));
        const double m = pairwise_mean(logs);
        lo = std::min(lo, m);
        hi = std::max(hi, m);
        acc += m;
        ++used;
    }
    rep.band_center = std::exp(acc / used);
    rep.band_constant = std::exp(std::max(std::abs(lo), std::abs(hi)));
    rep.band_bounded = rep.band_constant <= 10.0;

    // (c) exponent-ratio classification from the fitted growth rates
    std::vector<double> rmin, rmax;
    for (const auto& p : profiles) {
        rmin.push_back(p.rate_min);
        rmax.push_back(p.rate_max);
    }
    const double ratio = pairwise_mean(rmax) / pairwise_mean(rmin);
    rep.rate_ratio = ratio;
    const int k = static_cast<int>(std::lround(ratio));
    if (std::abs(ratio - 1.0) <= 0.05) {
        rep.classification = "equal";
        rep.resonance_k = 1;
    } else if (k >= 2 && std::abs(ratio - k) <= 0.05 * k) {
        rep.classification = "resonant";
        rep.resonance_k = k;
    } else {
        rep.classification = "nonresonant";
        rep.resonance_k = 0;
    }
    return rep;
}

void export_profiles_csv(const std::vector<ContractionProfile>& profiles,
                         const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write profiles csv: " + path);
    out.precision(17);
    out << "orbit,n,s_min,s_max\n";
    for (std::size_t id = 0; id < profiles.size(); ++id) {
        const auto& p = profiles[id];
        for (std::size_t i = 0; i < p.n_values.size(); ++i)
            out << id << ',' << p.n_values[i] << ',' << p.s_min[i] << ','
                << p.s_max[i] << '\n';
    }
}

}  // namespace p2dyn
