#include "p2dyn/roots.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace p2dyn {

std::pair<cplx, cplx> horner_with_derivative(const std::vector<cplx>& coeffs,
                                             cplx x) {
    cplx p(0.0), dp(0.0);
    for (std::size_t k = coeffs.size(); k-- > 0;) {
        dp = dp * x + p;
        p = p * x + coeffs[k];
    }
    return {p, dp};
}

std::vector<cplx> roots_univariate(const std::vector<cplx>& coeffs) {
    if (coeffs.size() < 2) throw ConfigError("roots_univariate: degree >= 1");
    const int deg = static_cast<int>(coeffs.size()) - 1;
    if (deg > 16) throw ConfigError("roots_univariate: degree <= 16");
    const cplx lead = coeffs.back();
    if (std::abs(lead) == 0.0)
        throw ConfigError("roots_univariate: zero leading coefficient");

    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = cplx(1.0);
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -coeffs[i] / lead;

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    if (es.info() != Eigen::Success)
        throw RootFailure("roots_univariate: eigensolver failed");

    double cscale = 0.0;
    for (const cplx& c : coeffs) cscale = std::max(cscale, std::abs(c));

    std::vector<cplx> roots(deg);
    for (int i = 0; i < deg; ++i) {
        cplx r = es.eigenvalues()(i);
        auto [p, dp] = horner_with_derivative(coeffs, r);
        if (std::abs(dp) > 1e-300) {
            const cplx r2 = r - p / dp;
            const cplx p2 = horner_with_derivative(coeffs, r2).first;
            if (std::abs(p2) < std::abs(p)) r = r2;
        }
        const double scale =
            cscale * std::pow(std::max(1.0, std::abs(r)), deg);
        if (std::abs(horner_with_derivative(coeffs, r).first) > 1e-8 * scale)
            throw IllConditioned("roots_univariate: residual bound failed");
        roots[i] = r;
    }
    // deterministic order
    std::sort(roots.begin(), roots.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

}  // namespace p2dyn
