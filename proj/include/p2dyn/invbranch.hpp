#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "p2dyn/lyapunov.hpp"
#include "p2dyn/measures.hpp"

namespace p2dyn {

/// Finite backward orbit x_0, x_{-1}, ..., x_{-n} with the one-step
/// differential recorded at each backward point.
struct BackwardOrbit {
    std::vector<HomPoint> points;       // points[k] = x_{-k}
    std::vector<TangentFrame> cocycle;  // frames at x_{-1}, ..., x_{-n}
    std::uint64_t seed = 0;
    int resampled_collisions = 0;
};

/// Uniformly random preimage at each step, refined by Newton. Coincident
/// preimage choices (within 1e-8) are resampled and counted.
BackwardOrbit backward_orbit(const HomPolyMap& f, const HomPoint& x0, int n,
                             std::uint64_t seed);

/// Newton iteration on the chart map toward f(q) = target, started at
/// approx; stops when the step drops below 1e-12 or after 30 iterations.
/// Throws NewtonStall when the forward residual stays above 1e-10.
HomPoint refine_preimage_newton(const HomPolyMap& f, const HomPoint& target,
                                const HomPoint& approx);

/// Per-n singular values of the forward cocycle from x_{-n} to x_0 and
/// least-squares growth rates fitted on n in [10, n_max].
struct ContractionProfile {
    std::vector<int> n_values;
    std::vector<double> s_min;
    std::vector<double> s_max;
    double rate_min = 0.0;        // slope of Log s_min against n
    double rate_max = 0.0;        // slope of Log s_max against n
    double intercept_min = 0.0;
    double intercept_max = 0.0;
};

ContractionProfile contraction_profile(const HomPolyMap& f,
                                       const BackwardOrbit& orbit);

struct DecayReport {
    // (a) prefactor rate: slope of Log(d^n / (s_min s_max)) against n
    double prefactor_slope = 0.0;
    bool prefactor_decays = false;
    // (b) band of d^n / s_min^2 over n in [10, n_max], aggregated over
    //     profiles by the mean of logs
    double band_constant = 0.0;  // smallest C with the curve in [1/C, C]
    bool band_bounded = false;   // band_constant <= 10
    double band_center = 0.0;    // exp of the mean log level
    // (c) exponent-ratio classification
    std::string classification;  // "equal" | "resonant" | "nonresonant"
    int resonance_k = 0;
    double rate_ratio = 0.0;
    std::size_t profile_count = 0;
};

/// Three verdicts over >= 50 profiles from the same map.
DecayReport decay_diagnostics(const std::vector<ContractionProfile>& profiles,
                              int d);

void export_profiles_csv(const std::vector<ContractionProfile>& profiles,
                         const std::string& path);

}  // namespace p2dyn
