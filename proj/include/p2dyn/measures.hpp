#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "p2dyn/green.hpp"
#include "p2dyn/polymap.hpp"
#include "p2dyn/testfn.hpp"

namespace p2dyn {

/// Weighted sample cloud approximating an invariant measure.
struct PointCloudMeasure {
    std::vector<HomPoint> points;
    std::vector<double> weights;
    struct Meta {
        std::string map_id;
        int depth = 0;
        std::size_t count = 0;
        std::uint64_t seed = 0;
    } meta;

    double weight_sum() const;
};

/// All d^2 preimages of p under a fibered map, with multiplicity: the base
/// equation is one univariate degree-d root problem, the fiber one exact
/// d-th root. Every returned point passes the forward residual check
/// chordal(f(q), p) <= 1e-8. `collisions`, when given, receives the number
/// of coincident pairs (within 1e-8).
std::vector<HomPoint> preimages_fibered(const HomPolyMap& f, const HomPoint& p,
                                        int* collisions = nullptr);

/// `count` independent uniformly-random backward words of length `depth`;
/// endpoints with uniform weights. Reproducible from the seed for any worker
/// count.
PointCloudMeasure sample_equilibrium(const HomPolyMap& f, const HomPoint& start,
                                     int depth, std::size_t count,
                                     std::uint64_t seed);

/// sum_i w_i phi(p_i)
double pair_cloud(const PointCloudMeasure& cloud,
                  const std::function<double(const HomPoint&)>& phi);

/// TestFn variant: phi evaluated in chart-2 affine coordinates.
double pair_cloud(const PointCloudMeasure& cloud, const TestFn& phi);

enum class SliceDir { Z, W };

struct PairingResult {
    double value = 0.0;
    double error = 0.0;  // two-resolution quadrature estimate
};

/// <T ^ dd^c|W|^2, phi> as the midpoint quadrature of g * phi_{z zbar}
/// over the grid box (direction Z pairs against phi_{w wbar}).
PairingResult slice_pairing(const PotentialGrid& grid, const TestFn& phi,
                            SliceDir direction);

/// Sum of the two slice pairings.
PairingResult trace_pairing(const PotentialGrid& grid, const TestFn& phi);

void export_cloud_csv(const PointCloudMeasure& cloud, const std::string& path);
PointCloudMeasure load_cloud_csv(const std::string& path);

}  // namespace p2dyn
