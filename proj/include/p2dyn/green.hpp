#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "p2dyn/polymap.hpp"

namespace p2dyn {

/// Escape-rate value of the Green function of the homogeneous lift, sup norm.
struct GreenEval {
    double value = 0.0;
    int iterations = 0;
    double residual = 0.0;  // a posteriori bound on the truncated tail
    bool converged = true;
};

/// G(x) = lim d^{-n} Log |F^n(x)|, accumulated as Log|x| plus the
/// renormalized per-step increments. Stops once the geometric tail bound
/// drops below tol.
GreenEval green_value(const HomPolyMap& F, const triple& x, double tol = 1e-9,
                      int max_iter = 200);

/// Escape rate of the fibered base (P, Q) on C^2: the same accumulation on
/// the two base components. Requires F.fibered().
GreenEval green_base(const HomPolyMap& F, const std::array<cplx, 2>& zw,
                     double tol = 1e-9, int max_iter = 200);

/// |G(F(x)) - d G(x)|; zero in exact arithmetic.
double invariance_residual(const HomPolyMap& F, const triple& x,
                           double tol = 1e-9);

/// Green value of the chart section (chart coordinate set to 1). For fibered
/// maps on chart 2 the result is clamped at 0, matching the convention that
/// the potential of the current is max of the base escape rate and 0.
double local_potential(const HomPolyMap& F, int chart,
                       const std::array<cplx, 2>& p, double tol = 1e-9,
                       int max_iter = 200);

struct GridBox {
    std::array<double, 4> lo{};  // Re z, Im z, Re w, Im w
    std::array<double, 4> hi{};
};

/// Tensor grid of potential samples at cell midpoints, with a half-resolution
/// companion grid used for quadrature error estimates.
struct PotentialGrid {
    int chart = 2;
    GridBox box;
    std::array<int, 4> res{};
    std::vector<double> values;        // row-major, axis 0 slowest
    std::vector<double> coarse;        // res/2 per axis; may be empty
    std::size_t flagged = 0;           // nodes that missed the tolerance

    double node_coord(int axis, int idx, bool coarse_grid = false) const {
        const int r = coarse_grid ? res[axis] / 2 : res[axis];
        const double h = (box.hi[axis] - box.lo[axis]) / r;
        return box.lo[axis] + (idx + 0.5) * h;
    }
    std::size_t size() const {
        return static_cast<std::size_t>(res[0]) * res[1] * res[2] * res[3];
    }
};

PotentialGrid potential_grid(const HomPolyMap& F, int chart, const GridBox& box,
                             const std::array<int, 4>& res, double tol = 1e-9);

/// Grid of an arbitrary potential; used for closed-form cross-checks.
PotentialGrid potential_grid_from_fn(
    int chart, const GridBox& box, const std::array<int, 4>& res,
    const std::function<double(cplx, cplx)>& fn);

void save_grid(const PotentialGrid& g, const std::string& path);
PotentialGrid load_grid(const std::string& path);
void export_grid_csv(const PotentialGrid& g, const std::string& path);

}  // namespace p2dyn
