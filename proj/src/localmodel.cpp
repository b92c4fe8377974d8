#include "p2dyn/localmodel.hpp"

#include <cmath>
#include <numbers>

#include "p2dyn/parallel.hpp"

namespace p2dyn {
namespace localmodel {

namespace {
constexpr double kPi = std::numbers::pi;
}

double g0_eval(cplx z, cplx w) {
    if (std::abs(z.real()) >= 1.0 || std::abs(z.imag()) >= 1.0 ||
        std::norm(w) >= 1.0)
        throw OutOfDomain("g0_eval: point outside D");
    return z.real() + std::norm(w);
}

bool in_omega(cplx z, cplx w) {
    return std::norm(w) < 1.0 && z.real() + std::norm(w) > 0.0;
}

PhiNode phi_param(double u, double v, double theta) {
    const double s = -u;  // |w|^2, exact
    const double r = std::sqrt(s);
    return {cplx(u, v), std::polar(r, theta), s};
}

namespace {

double tensor4_midpoint(const Integrand& f, int res) {
    // box [-1,1]^4, indicator of the positivity region at node centers
    const double h = 2.0 / res;
    const double cell = h * h * h * h;
    std::vector<double> slabs(res);
    parallel_for(res, [&](std::size_t i0) {
        const double x0 = -1.0 + (i0 + 0.5) * h;
        double acc = 0.0;
        for (int i1 = 0; i1 < res; ++i1) {
            const double x1 = -1.0 + (i1 + 0.5) * h;
            const cplx z(x0, x1);
            for (int i2 = 0; i2 < res; ++i2) {
                const double x2 = -1.0 + (i2 + 0.5) * h;
                for (int i3 = 0; i3 < res; ++i3) {
                    const double x3 = -1.0 + (i3 + 0.5) * h;
                    const cplx w(x2, x3);
                    if (!in_omega(z, w)) continue;
                    acc += f(z, w);
                }
            }
        }
        slabs[i0] = acc * cell;
    });
    return pairwise_sum(slabs);
}

double tensor3_midpoint(const Integrand& f, int res) {
    // parameter box ]-1,0] x ]-1,1[ x ]0,2pi[, unit weight
    const int nu = res, nv = 2 * res, nt = 2 * res;
    const double hu = 1.0 / nu, hv = 2.0 / nv, ht = 2.0 * kPi / nt;
    const double cell = hu * hv * ht;
    std::vector<double> slabs(nu);
    parallel_for(nu, [&](std::size_t iu) {
        const double u = -1.0 + (iu + 0.5) * hu;
        double acc = 0.0;
        for (int iv = 0; iv < nv; ++iv) {
            const double v = -1.0 + (iv + 0.5) * hv;
            for (int it = 0; it < nt; ++it) {
                const double theta = (it + 0.5) * ht;
                const PhiNode n = phi_param(u, v, theta);
                acc += f(n.z, n.w);
            }
        }
        slabs[iu] = acc * cell;
    });
    return pairwise_sum(slabs);
}

QuadResult with_refinement(const std::function<double(int)>& run, int res) {
    QuadResult q;
    q.value = run(res);
    const double coarse = run(res / 2);
    q.error = std::abs(q.value - coarse);
    return q;
}

bool support_inside_domain(const TestFn& phi) {
    const GridBox s = phi.support();
    if (s.lo[0] <= -1.0 || s.hi[0] >= 1.0 || s.lo[1] <= -1.0 || s.hi[1] >= 1.0)
        return false;
    // w-support must sit inside the unit disc
    if (phi.family == TestFn::Family::WRadial)
        return phi.center[2] + phi.halfwidth[2] < 1.0;
    const double cr = std::max(std::abs(s.lo[2]), std::abs(s.hi[2]));
    const double ci = std::max(std::abs(s.lo[3]), std::abs(s.hi[3]));
    return cr * cr + ci * ci < 1.0;
}

bool verdict(double lhs, double rhs, double err) {
    return std::abs(lhs - rhs) <=
           err + 1e-3 * std::max({std::abs(lhs), std::abs(rhs), 1.0});
}

}  // namespace

QuadResult quad_omega(const Integrand& f, int res) {
    if (res < 8) throw ConfigError("quad_omega: res >= 8");
    return with_refinement([&](int r) { return tensor4_midpoint(f, r); }, res);
}

QuadResult quad_m0(const Integrand& f, int res) {
    if (res < 8) throw ConfigError("quad_m0: res >= 8");
    return with_refinement([&](int r) { return tensor3_midpoint(f, r); }, res);
}

PairCheck pair_T11(const TestFn& phi, int res) {
    if (!support_inside_domain(phi))
        throw SupportViolation("pair_T11: support not inside D");
    const QuadResult lhs = quad_omega(
        [&](cplx z, cplx w) {
            return (z.real() + std::norm(w)) * phi.lap_z(z, w);
        },
        res);
    const QuadResult m0 = quad_m0(
        [&](cplx z, cplx w) { return phi.value(z, w); }, 2 * res);
    PairCheck out{lhs.value, 0.125 * m0.value, lhs.error, 0.125 * m0.error,
                  false};
    out.pass = verdict(out.lhs, out.rhs, out.err_lhs + out.err_rhs);
    return out;
}

PairCheck pair_T22(const TestFn& phi, int res) {
    if (!support_inside_domain(phi))
        throw SupportViolation("pair_T22: support not inside D");
    const QuadResult lhs = quad_omega(
        [&](cplx z, cplx w) {
            return (z.real() + std::norm(w)) * phi.lap_w(z, w);
        },
        res);
    const QuadResult leb =
        quad_omega([&](cplx z, cplx w) { return phi.value(z, w); }, res);
    const QuadResult m0 = quad_m0(
        [&](cplx z, cplx w) { return 0.5 * std::norm(w) * phi.value(z, w); },
        2 * res);
    PairCheck out;
    out.lhs = lhs.value;
    out.rhs = leb.value + m0.value;
    out.err_lhs = lhs.error;
    out.err_rhs = leb.error + m0.error;
    out.pass = verdict(out.lhs, out.rhs, out.err_lhs + out.err_rhs);
    return out;
}

Mu0Check pair_mu0(const TestFn& phi, int res) {
    if (!support_inside_domain(phi))
        throw SupportViolation("pair_mu0: support not inside D");
    const QuadResult m0 = quad_m0(
        [&](cplx z, cplx w) { return phi.value(z, w); }, 2 * res);
    const QuadResult t11 = quad_omega(
        [&](cplx z, cplx w) {
            return (z.real() + std::norm(w)) * phi.lap_z(z, w);
        },
        res);
    Mu0Check out;
    out.mu_lhs = 0.125 * m0.value;
    out.mu_rhs = t11.value;
    out.err_lhs = 0.125 * m0.error;
    out.err_rhs = t11.error;

    // density identity (1/8 + s/2) / (1 + 4s) = 1/8
    double worst = 0.0;
    for (double s : {0.0, 0.25, 1.0, 0.1, 0.37, 0.81}) {
        const double r = (0.125 + 0.5 * s) / (1.0 + 4.0 * s);
        worst = std::max(worst, std::abs(r - 0.125));
    }
    // quadrature form: psi0 * (1/8 + |w|^2/2) integrates like 1/8
    const QuadResult weighted = quad_m0(
        [&](cplx z, cplx w) {
            const double s = std::norm(w);
            return (0.125 + 0.5 * s) / (1.0 + 4.0 * s) * phi.value(z, w);
        },
        2 * res);
    const double scale = std::max(1.0, std::abs(m0.value));
    worst = std::max(worst,
                     std::abs(weighted.value - 0.125 * m0.value) / scale);
    out.psi_identity_err = worst;
    out.pass = verdict(out.mu_lhs, out.mu_rhs, out.err_lhs + out.err_rhs) &&
               worst <= 1e-12;
    return out;
}

CoupeCheck lemma_coupe_check(double u, double v, const TestFn& phi, int res) {
    if (!(u > -1.0 && u < 1.0 && v > -1.0 && v < 1.0))
        throw ConfigError("lemma_coupe_check: (u, v) outside ]-1,1[^2");
    const cplx z(u, v);
    const double inner2 = std::max(0.0, -u);  // annulus inner radius squared

    const auto disc2d = [&](const std::function<double(cplx)>& g, bool annulus,
                            int r) {
        const double h = 2.0 / r;
        double acc = 0.0;
        for (int i = 0; i < r; ++i) {
            const double a = -1.0 + (i + 0.5) * h;
            for (int j = 0; j < r; ++j) {
                const double b = -1.0 + (j + 0.5) * h;
                const cplx w(a, b);
                const double n = std::norm(w);
                if (n >= 1.0) continue;
                if (annulus && n <= inner2) continue;
                acc += g(w);
            }
        }
        return acc * h * h;
    };

    const auto run_direct = [&](int r) {
        return disc2d(
            [&](cplx w) { return (u + std::norm(w)) * phi.lap_w(z, w); }, true,
            r);
    };
    const auto run_closed = [&](int r) {
        double val = disc2d([&](cplx w) { return phi.value(z, w); },
                            /*annulus=*/u < 0.0, r);
        if (u < 0.0) {
            const double rad = std::sqrt(-u);
            const int nt = 8 * r;
            const double ht = 2.0 * kPi / nt;
            double circ = 0.0;
            for (int it = 0; it < nt; ++it)
                circ += phi.value(z, std::polar(rad, (it + 0.5) * ht));
            val += (-u / 2.0) * circ * ht;
        }
        return val;
    };

    CoupeCheck out;
    out.direct = run_direct(res);
    out.err_direct = std::abs(out.direct - run_direct(res / 2));
    out.closed_form = run_closed(res);
    out.err_closed = std::abs(out.closed_form - run_closed(res / 2));
    out.pass = verdict(out.direct, out.closed_form,
                       out.err_direct + out.err_closed);
    return out;
}

std::vector<TestFn> default_test_suite() {
    return {
        TestFn::bump({0.0, 0.0, 0.0, 0.0}, {0.8, 0.8, 0.55, 0.55}),
        TestFn::bump({0.3, -0.2, 0.2, 0.1}, {0.5, 0.6, 0.4, 0.35}),
        TestFn::bump({-0.2, 0.1, -0.15, 0.2}, {0.6, 0.5, 0.25, 0.5}),
        TestFn::bump({0.1, 0.0, 0.0, -0.1}, {0.3, 0.9, 0.5, 0.4}),
        TestFn::w_radial(0.0, 0.0, 0.7, 0.7, 0.3, 0.25),
    };
}

SuiteReport run_suite(int res, int coupe_pairs) {
    SuiteReport rep;
    const auto suite = default_test_suite();
    const auto push = [&](SuiteRecord r) {
        rep.all_pass = rep.all_pass && r.pass;
        rep.records.push_back(std::move(r));
    };
    for (std::size_t i = 0; i < suite.size(); ++i) {
        const std::string tag = "fn" + std::to_string(i);
        const PairCheck a = pair_T11(suite[i], res);
        push({"pair_T11", tag, a.lhs, a.rhs, a.err_lhs + a.err_rhs, a.pass});
        const PairCheck b = pair_T22(suite[i], res);
        push({"pair_T22", tag, b.lhs, b.rhs, b.err_lhs + b.err_rhs, b.pass});
        const Mu0Check c = pair_mu0(suite[i], res);
        push({"pair_mu0", tag, c.mu_lhs, c.mu_rhs,
              c.err_lhs + c.err_rhs + c.psi_identity_err, c.pass});
    }
    // lemma slices on a fixed (u, v) sample, three test functions
    const std::array<TestFn, 3> coupe_fns{suite[0], suite[1], suite[4]};
    for (int k = 0; k < coupe_pairs; ++k) {
        const double u = -0.85 + 1.7 * (k + 0.5) / coupe_pairs;
        const double v = 0.6 * std::sin(2.0 * k + 0.5);
        for (std::size_t j = 0; j < coupe_fns.size(); ++j) {
            const CoupeCheck c = lemma_coupe_check(u, v, coupe_fns[j], 4 * res);
            push({"lemma_coupe(u=" + std::to_string(u) + ")",
                  "fn" + std::to_string(j), c.direct, c.closed_form,
                  c.err_direct + c.err_closed, c.pass});
        }
    }
    return rep;
}

}  // namespace localmodel
}  // namespace p2dyn
