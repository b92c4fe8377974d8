#include "p2dyn/testfn.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

namespace p2dyn {

namespace {

inline double bump1(double s) {
    const double q = 1.0 - s * s;
    return q > 0.0 ? q * q : 0.0;
}
inline double dbump1(double s) {
    return std::abs(s) < 1.0 ? 4.0 * s * s * s - 4.0 * s : 0.0;
}
inline double ddbump1(double s) {
    return std::abs(s) < 1.0 ? 12.0 * s * s - 4.0 : 0.0;
}

}  // namespace

double TestFn::value(cplx z, cplx w) const {
    const double s0 = (z.real() - center[0]) / halfwidth[0];
    const double s1 = (z.imag() - center[1]) / halfwidth[1];
    if (family == Family::Bump4) {
        const double s2 = (w.real() - center[2]) / halfwidth[2];
        const double s3 = (w.imag() - center[3]) / halfwidth[3];
        return bump1(s0) * bump1(s1) * bump1(s2) * bump1(s3);
    }
    const double q = (std::norm(w) - center[2]) / halfwidth[2];
    return bump1(s0) * bump1(s1) * bump1(q);
}

double TestFn::lap_z(cplx z, cplx w) const {
    const double s0 = (z.real() - center[0]) / halfwidth[0];
    const double s1 = (z.imag() - center[1]) / halfwidth[1];
    const double d2 = ddbump1(s0) / (halfwidth[0] * halfwidth[0]) * bump1(s1) +
                      ddbump1(s1) / (halfwidth[1] * halfwidth[1]) * bump1(s0);
    double wpart;
    if (family == Family::Bump4) {
        const double s2 = (w.real() - center[2]) / halfwidth[2];
        const double s3 = (w.imag() - center[3]) / halfwidth[3];
        wpart = bump1(s2) * bump1(s3);
    } else {
        wpart = bump1((std::norm(w) - center[2]) / halfwidth[2]);
    }
    return 0.25 * d2 * wpart;
}

double TestFn::lap_w(cplx z, cplx w) const {
    const double s0 = (z.real() - center[0]) / halfwidth[0];
    const double s1 = (z.imag() - center[1]) / halfwidth[1];
    const double zpart = bump1(s0) * bump1(s1);
    if (family == Family::Bump4) {
        const double s2 = (w.real() - center[2]) / halfwidth[2];
        const double s3 = (w.imag() - center[3]) / halfwidth[3];
        const double d2 = ddbump1(s2) / (halfwidth[2] * halfwidth[2]) * bump1(s3) +
                          ddbump1(s3) / (halfwidth[3] * halfwidth[3]) * bump1(s2);
        return 0.25 * d2 * zpart;
    }
    // phi_w = b(q(w)), q = (|w|^2 - m)/r: Delta_w = b'' |grad q|^2 + b' Delta q
    const double r = halfwidth[2];
    const double q = (std::norm(w) - center[2]) / r;
    const double lap =
        ddbump1(q) * 4.0 * std::norm(w) / (r * r) + dbump1(q) * 4.0 / r;
    return 0.25 * lap * zpart;
}

GridBox TestFn::support() const {
    GridBox b;
    b.lo[0] = center[0] - halfwidth[0];
    b.hi[0] = center[0] + halfwidth[0];
    b.lo[1] = center[1] - halfwidth[1];
    b.hi[1] = center[1] + halfwidth[1];
    if (family == Family::Bump4) {
        for (int a = 2; a < 4; ++a) {
            b.lo[a] = center[a] - halfwidth[a];
            b.hi[a] = center[a] + halfwidth[a];
        }
    } else {
        const double rad = std::sqrt(std::max(0.0, center[2] + halfwidth[2]));
        b.lo[2] = b.lo[3] = -rad;
        b.hi[2] = b.hi[3] = rad;
    }
    return b;
}

TestFn TestFn::bump(const std::array<double, 4>& center,
                    const std::array<double, 4>& halfwidth) {
    TestFn f;
    f.family = Family::Bump4;
    f.center = center;
    f.halfwidth = halfwidth;
    for (double h : halfwidth)
        if (!(h > 0)) throw ConfigError("TestFn: halfwidth must be positive");
    return f;
}

TestFn TestFn::w_radial(double zc_re, double zc_im, double zh_re, double zh_im,
                        double m, double r) {
    TestFn f;
    f.family = Family::WRadial;
    f.center = {zc_re, zc_im, m, 0.0};
    f.halfwidth = {zh_re, zh_im, r, 1.0};
    if (!(zh_re > 0) || !(zh_im > 0) || !(r > 0))
        throw ConfigError("TestFn: halfwidth must be positive");
    return f;
}

std::string TestFn::to_json() const {
    nlohmann::json j{
        {"family", family == Family::Bump4 ? "bump4" : "wradial"},
        {"center", center},
        {"halfwidth", halfwidth}};
    return j.dump();
}

TestFn TestFn::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    TestFn f;
    const std::string fam = j.at("family").get<std::string>();
    if (fam == "bump4")
        f.family = Family::Bump4;
    else if (fam == "wradial")
        f.family = Family::WRadial;
    else
        throw ConfigError("TestFn: unknown family " + fam);
    const auto c = j.at("center");
    const auto h = j.at("halfwidth");
    for (int a = 0; a < 4; ++a) {
        f.center[a] = c.at(a).get<double>();
        f.halfwidth[a] = h.at(a).get<double>();
    }
    return f;
}

}  // namespace p2dyn
