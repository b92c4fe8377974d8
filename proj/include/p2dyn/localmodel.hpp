#pragma once

#include <functional>
#include <string>
#include <vector>

#include "p2dyn/testfn.hpp"

namespace p2dyn {
namespace localmodel {

/// Local-model potential on D = ]-1,1[^2 x (unit disc).
double g0_eval(cplx z, cplx w);

/// Membership in the positivity region of the potential, D included.
bool in_omega(cplx z, cplx w);

/// Parametrization (u, v, theta) -> (u+iv, sqrt(-u) e^{i theta}) of the zero
/// hypersurface; wsq carries |w|^2 = -u exactly.
struct PhiNode {
    cplx z;
    cplx w;
    double wsq;
};
PhiNode phi_param(double u, double v, double theta);

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // two-resolution estimate
};

using Integrand = std::function<double(cplx z, cplx w)>;

/// 4D midpoint quadrature over D of integrand restricted to the positivity
/// region; res nodes per real axis.
QuadResult quad_omega(const Integrand& f, int res);

/// Quadrature against the pushforward of parameter-box Lebesgue measure:
/// 3D midpoint over ]-1,0] x ]-1,1[ x ]0,2pi[ of f composed with the
/// parametrization (unit weight, not surface measure).
QuadResult quad_m0(const Integrand& f, int res);

struct PairCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double err_lhs = 0.0;
    double err_rhs = 0.0;
    bool pass = false;
};

/// <T11, phi>: potential against the z-Laplacian of phi over the positivity
/// region vs 1/8 of the hypersurface integral.
PairCheck pair_T11(const TestFn& phi, int res);

/// <T22, phi>: potential against the w-Laplacian of phi vs the Lebesgue part
/// plus the |w|^2/2-weighted hypersurface part.
PairCheck pair_T22(const TestFn& phi, int res);

struct Mu0Check {
    double mu_lhs = 0.0;
    double mu_rhs = 0.0;
    double err_lhs = 0.0;
    double err_rhs = 0.0;
    double psi_identity_err = 0.0;  // max |(1/8 + s/2)/(1+4s) - 1/8| sampled
    bool pass = false;
};

/// mu = (1/8) Leb on the hypersurface vs the T11 pairing, plus the density
/// identity (1/8 + s/2)/(1 + 4s) = 1/8.
Mu0Check pair_mu0(const TestFn& phi, int res);

struct CoupeCheck {
    double direct = 0.0;
    double closed_form = 0.0;
    double err_direct = 0.0;
    double err_closed = 0.0;
    bool pass = false;
};

/// Fixed-z slice: potential against phi_{w wbar} over the w-annulus vs the
/// closed form (full-disc integral for u >= 0; annulus integral plus the
/// -u/2-weighted circle average for u < 0).
CoupeCheck lemma_coupe_check(double u, double v, const TestFn& phi, int res);

/// Standard verification suite: five test functions with varied centers,
/// widths and w-anisotropy.
std::vector<TestFn> default_test_suite();

struct SuiteRecord {
    std::string op;      // pair_T11 | pair_T22 | pair_mu0 | lemma_coupe
    std::string fn;      // test function tag
    double lhs = 0.0;
    double rhs = 0.0;
    double err = 0.0;
    bool pass = false;
};

struct SuiteReport {
    std::vector<SuiteRecord> records;
    bool all_pass = true;
};

/// Runs the three pairings on the standard suite plus lemma slices on a
/// (u, v) sample; res is the 4D per-axis resolution (3D runs at 2*res).
SuiteReport run_suite(int res, int coupe_pairs = 10);

}  // namespace localmodel
}  // namespace p2dyn
