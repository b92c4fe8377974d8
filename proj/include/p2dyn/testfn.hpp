#pragma once

#include <array>
#include <string>

#include "p2dyn/green.hpp"
#include "p2dyn/homogeneous.hpp"

namespace p2dyn {

/// Compactly supported test function on a chart box with closed-form mixed
/// second derivatives. Two families:
///   bump4    product of quartic bumps (1-s^2)^2 in the 4 real coordinates
///   wradial  quartic bumps in Re z, Im z times a quartic bump in |w|^2
struct TestFn {
    enum class Family { Bump4, WRadial };

    Family family = Family::Bump4;
    std::array<double, 4> center{};     // wradial: slots 2,3 hold (m, r) of
    std::array<double, 4> halfwidth{};  // the |w|^2 window [m-r, m+r]

    double value(cplx z, cplx w) const;
    double lap_z(cplx z, cplx w) const;  // d^2 phi / dz dzbar
    double lap_w(cplx z, cplx w) const;  // d^2 phi / dw dwbar

    /// Closed support box in the four real coordinates.
    GridBox support() const;

    static TestFn bump(const std::array<double, 4>& center,
                       const std::array<double, 4>& halfwidth);
    /// m = center of the |w|^2 window, r = its half width (m + r < 1 keeps
    /// the support inside the unit disc).
    static TestFn w_radial(double zc_re, double zc_im, double zh_re,
                           double zh_im, double m, double r);

    std::string to_json() const;
    static TestFn from_json(const std::string& text);
};

}  // namespace p2dyn
