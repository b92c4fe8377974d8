#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "p2dyn/homogeneous.hpp"

namespace p2dyn {

/// Degree-d endomorphism of the projective plane given by three homogeneous
/// polynomials with dense coefficient tables indexed by exponent pairs (i, j),
/// the t-exponent being d - i - j. Immutable after construction.
class HomPolyMap {
  public:
    static constexpr int kMaxDegree = 8;

    HomPolyMap(int degree, std::array<std::vector<cplx>, 3> components,
               bool fibered, std::string name = {});

    int degree() const { return degree_; }
    bool fibered() const { return fibered_; }
    const std::string& name() const { return name_; }

    /// Coefficient of z^i w^j t^(d-i-j) in component c.
    cplx coeff(int c, int i, int j) const { return comp_[c][index(i, j)]; }
    const std::vector<cplx>& component(int c) const { return comp_[c]; }

    /// Scale of t^d in the third component (fibered maps only).
    cplx fiber_coeff() const { return fiber_coeff_; }

    /// Base-map coefficients: P(zeta, 1) and Q(zeta, 1), ascending powers,
    /// length d+1 (fibered maps only).
    const std::vector<cplx>& base_p() const { return base_p_; }
    const std::vector<cplx>& base_q() const { return base_q_; }

    std::size_t table_size() const { return comp_[0].size(); }
    int index(int i, int j) const { return offsets_[i] + j; }

  private:
    int degree_;
    std::array<std::vector<cplx>, 3> comp_;
    bool fibered_;
    cplx fiber_coeff_{1.0, 0.0};
    std::vector<cplx> base_p_, base_q_;
    std::array<int, kMaxDegree + 2> offsets_{};
    std::string name_;
};

/// Raw (unnormalized) image of a representative; Horner evaluation.
triple eval_raw(const HomPolyMap& F, const triple& x);

/// normalize(F(p)); throws Indeterminate when the image triple degenerates.
HomPoint eval_map(const HomPolyMap& F, const HomPoint& p);

/// 3x3 complex Jacobian of the homogeneous lift at x.
Eigen::Matrix3cd jacobian_lift(const HomPolyMap& F, const triple& x);

/// Differential of the dehomogenized map between the affine charts of source
/// and image.
struct TangentFrame {
    HomPoint base;
    int src_chart = 0;
    int img_chart = 0;
    Eigen::Matrix2cd m;
};

TangentFrame tangent_map(const HomPolyMap& F, const HomPoint& p);

/// Like tangent_map but with source/image charts imposed by the caller
/// (both coordinates must be nonzero at p and F(p)).
TangentFrame tangent_map_in_charts(const HomPolyMap& F, const HomPoint& p,
                                   int src_chart, int img_chart);

struct NondegReport {
    bool pass = false;
    double min_ratio = 0.0;   // min over trials of |F(p)|/|p|^d, sup norms
    int trials = 0;
    double floor = 0.0;
};

/// Probabilistic nondegeneracy check: evaluates F on random points, including
/// points pushed close to each coordinate plane, and compares the worst
/// contraction ratio against a floor. Throws DegenerateMap when a trial
/// evaluates to the zero triple.
NondegReport check_nondegenerate(const HomPolyMap& F, int trials,
                                 std::uint64_t seed, double floor = 1e-6);

/// JSON map file: {"degree": d, "components": [[{"exps":[i,j,k],"re":..,"im":..},..],..],
///                 "fibered": bool}
HomPolyMap load_map_json(const std::string& text, const std::string& name = {});
HomPolyMap load_map_file(const std::string& path);
std::string map_to_json(const HomPolyMap& F);

}  // namespace p2dyn
