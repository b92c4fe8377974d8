#pragma once

#include <vector>

#include "p2dyn/homogeneous.hpp"

namespace p2dyn {

/// All complex roots (with multiplicity) of sum c_k z^k, coefficients
/// ascending, degree <= 16. Companion-matrix eigenvalues with one Newton
/// polish per root. Throws IllConditioned when a polished root misses the
/// residual bound 1e-8 * coefficient scale.
std::vector<cplx> roots_univariate(const std::vector<cplx>& coeffs);

/// p(x) and p'(x) by Horner, ascending coefficients.
std::pair<cplx, cplx> horner_with_derivative(const std::vector<cplx>& coeffs,
                                             cplx x);

}  // namespace p2dyn
