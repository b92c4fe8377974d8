#include "p2dyn/green.hpp"

#include <atomic>
#include <cmath>
#include <cstring>
#include <fstream>

#include "p2dyn/parallel.hpp"

namespace p2dyn {

namespace {

/// Sum of coefficient moduli, maximized over components: |F(u)| <= cf for
/// |u| <= 1 (sup norms), so log cf caps every per-step increment from above.
double coeff_scale(const HomPolyMap& F) {
    double cf = 0.0;
    for (int c = 0; c < 3; ++c) {
        double s = 0.0;
        for (const cplx& a : F.component(c)) s += std::abs(a);
        cf = std::max(cf, s);
    }
    return cf;
}

double coeff_scale_base(const HomPolyMap& F) {
    double cf = 0.0;
    for (const auto* v : {&F.base_p(), &F.base_q()}) {
        double s = 0.0;
        for (const cplx& a : *v) s += std::abs(a);
        cf = std::max(cf, s);
    }
    return cf;
}

std::array<cplx, 2> eval_base(const HomPolyMap& F, const std::array<cplx, 2>& zw) {
    const int d = F.degree();
    std::array<cplx, HomPolyMap::kMaxDegree + 1> zp, wp;
    zp[0] = wp[0] = cplx(1.0);
    for (int k = 1; k <= d; ++k) {
        zp[k] = zp[k - 1] * zw[0];
        wp[k] = wp[k - 1] * zw[1];
    }
    cplx p(0.0), q(0.0);
    for (int i = 0; i <= d; ++i) {
        p += F.base_p()[i] * zp[i] * wp[d - i];
        q += F.base_q()[i] * zp[i] * wp[d - i];
    }
    return {p, q};
}

template <typename Vec>
double sup_norm(const Vec& v) {
    double m = 0.0;
    for (const cplx& x : v) m = std::max(m, std::abs(x));
    return m;
}

/// Shared escape-rate accumulator over a renormalized orbit.
template <typename Vec, typename Step>
GreenEval escape_rate(Vec x, int degree, double cap0, double tol, int max_iter,
                      Step step) {
    const double m0 = sup_norm(x);
    if (m0 < 1e-300) throw ZeroVector("green: zero start vector");
    for (cplx& c : x) c /= m0;

    GreenEval out;
    out.value = std::log(m0);
    const double inv_d = 1.0 / degree;
    double scale = inv_d;  // d^{-(n+1)}
    double bmax = 0.0;
    for (int n = 0; n < max_iter; ++n) {
        const Vec fx = step(x);
        const double m = sup_norm(fx);
        if (m < 1e-300) throw Indeterminate("green: orbit hit the zero triple");
        const double term = std::log(m);
        out.value += scale * term;
        bmax = std::max(bmax, std::abs(term));
        out.iterations = n + 1;
        // tail bound: every further increment is at most max(observed, log cf)
        out.residual = std::max(bmax, cap0) * scale / (degree - 1.0);
        if (out.residual < tol) return out;
        x = fx;
        for (cplx& c : x) c /= m;
        scale *= inv_d;
    }
    out.converged = false;
    return out;
}

}  // namespace

GreenEval green_value(const HomPolyMap& F, const triple& x, double tol,
                      int max_iter) {
    const double cap0 = std::max(0.0, std::log(coeff_scale(F)));
    return escape_rate(
        x, F.degree(), cap0, tol, max_iter,
        [&](const triple& u) { return eval_raw(F, u); });
}

GreenEval green_base(const HomPolyMap& F, const std::array<cplx, 2>& zw,
                     double tol, int max_iter) {
    if (!F.fibered()) throw ConfigError("green_base: map is not fibered");
    const double cap0 = std::max(0.0, std::log(coeff_scale_base(F)));
    return escape_rate(
        zw, F.degree(), cap0, tol, max_iter,
        [&](const std::array<cplx, 2>& u) { return eval_base(F, u); });
}

double invariance_residual(const HomPolyMap& F, const triple& x, double tol) {
    const GreenEval g0 = green_value(F, x, tol);
    const GreenEval g1 = green_value(F, eval_raw(F, x), tol);
    return std::abs(g1.value - F.degree() * g0.value);
}

double local_potential(const HomPolyMap& F, int chart,
                       const std::array<cplx, 2>& p, double tol, int max_iter) {
    triple x;
    int m = 0;
    for (int k = 0; k < 3; ++k) x[k] = (k == chart) ? cplx(1.0) : p[m++];
    const double v = green_value(F, x, tol, max_iter).value;
    if (F.fibered() && chart == 2) return std::max(v, 0.0);
    return v;
}

namespace {

PotentialGrid fill_grid(int chart, const GridBox& box,
                        const std::array<int, 4>& res,
                        const std::function<double(cplx, cplx)>& fn,
                        std::atomic<std::size_t>* flag_counter) {
    for (int a = 0; a < 4; ++a) {
        if (res[a] < 16) throw ConfigError("potential_grid: resolution >= 16");
        if (res[a] % 2) throw ConfigError("potential_grid: resolution must be even");
        if (!(box.lo[a] < box.hi[a])) throw ConfigError("potential_grid: empty box");
    }
    PotentialGrid g;
    g.chart = chart;
    g.box = box;
    g.res = res;
    g.values.assign(g.size(), 0.0);
    const auto coord = [&](int axis, std::size_t idx, int r) {
        const double h = (box.hi[axis] - box.lo[axis]) / r;
        return box.lo[axis] + (idx + 0.5) * h;
    };
    const auto fill = [&](std::vector<double>& dst, const std::array<int, 4>& r) {
        const std::size_t n =
            static_cast<std::size_t>(r[0]) * r[1] * r[2] * r[3];
        dst.assign(n, 0.0);
        parallel_for(n, [&](std::size_t idx) {
            std::size_t rem = idx;
            const std::size_t i3 = rem % r[3]; rem /= r[3];
            const std::size_t i2 = rem % r[2]; rem /= r[2];
            const std::size_t i1 = rem % r[1]; rem /= r[1];
            const std::size_t i0 = rem;
            const cplx z(coord(0, i0, r[0]), coord(1, i1, r[1]));
            const cplx w(coord(2, i2, r[2]), coord(3, i3, r[3]));
            dst[idx] = fn(z, w);
        });
    };
    fill(g.values, res);
    fill(g.coarse, {res[0] / 2, res[1] / 2, res[2] / 2, res[3] / 2});
    if (flag_counter) g.flagged = flag_counter->load();
    return g;
}

}  // namespace

PotentialGrid potential_grid(const HomPolyMap& F, int chart, const GridBox& box,
                             const std::array<int, 4>& res, double tol) {
    std::atomic<std::size_t> flagged{0};
    auto fn = [&](cplx z, cplx w) {
        triple x;
        int m = 0;
        std::array<cplx, 2> p{z, w};
        for (int k = 0; k < 3; ++k) x[k] = (k == chart) ? cplx(1.0) : p[m++];
        const GreenEval e = green_value(F, x, tol);
        if (!e.converged) flagged.fetch_add(1, std::memory_order_relaxed);
        double v = e.value;
        if (F.fibered() && chart == 2) v = std::max(v, 0.0);
        return v;
    };
    PotentialGrid g = fill_grid(chart, box, res, fn, &flagged);
    if (g.flagged * 1000 > g.size() + g.coarse.size())
        throw NoConvergence("potential_grid: more than 0.1% of nodes missed tol");
    return g;
}

PotentialGrid potential_grid_from_fn(
    int chart, const GridBox& box, const std::array<int, 4>& res,
    const std::function<double(cplx, cplx)>& fn) {
    return fill_grid(chart, box, res, fn, nullptr);
}

void save_grid(const PotentialGrid& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write grid file: " + path);
    const char magic[8] = {'P', '2', 'G', 'R', 'I', 'D', '0', '1'};
    out.write(magic, 8);
    auto put_i32 = [&](int v) { out.write(reinterpret_cast<const char*>(&v), 4); };
    auto put_f64 = [&](double v) { out.write(reinterpret_cast<const char*>(&v), 8); };
    put_i32(g.chart);
    for (int a = 0; a < 4; ++a) put_f64(g.box.lo[a]);
    for (int a = 0; a < 4; ++a) put_f64(g.box.hi[a]);
    for (int a = 0; a < 4; ++a) put_i32(g.res[a]);
    put_i32(g.coarse.empty() ? 0 : 1);
    out.write(reinterpret_cast<const char*>(g.values.data()),
              static_cast<std::streamsize>(g.values.size() * 8));
    if (!g.coarse.empty())
        out.write(reinterpret_cast<const char*>(g.coarse.data()),
                  static_cast<std::streamsize>(g.coarse.size() * 8));
}

PotentialGrid load_grid(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open grid file: " + path);
    char magic[8];
    in.read(magic, 8);
    if (std::memcmp(magic, "P2GRID01", 8) != 0)
        throw ConfigError("bad grid file magic: " + path);
    PotentialGrid g;
    auto get_i32 = [&] { int v; in.read(reinterpret_cast<char*>(&v), 4); return v; };
    auto get_f64 = [&] { double v; in.read(reinterpret_cast<char*>(&v), 8); return v; };
    g.chart = get_i32();
    for (int a = 0; a < 4; ++a) g.box.lo[a] = get_f64();
    for (int a = 0; a < 4; ++a) g.box.hi[a] = get_f64();
    for (int a = 0; a < 4; ++a) g.res[a] = get_i32();
    const bool has_coarse = get_i32() != 0;
    g.values.resize(g.size());
    in.read(reinterpret_cast<char*>(g.values.data()),
            static_cast<std::streamsize>(g.values.size() * 8));
    if (has_coarse) {
        std::size_t n = 1;
        for (int a = 0; a < 4; ++a) n *= static_cast<std::size_t>(g.res[a] / 2);
        g.coarse.resize(n);
        in.read(reinterpret_cast<char*>(g.coarse.data()),
                static_cast<std::streamsize>(g.coarse.size() * 8));
    }
    if (!in) throw ConfigError("truncated grid file: " + path);
    return g;
}

void export_grid_csv(const PotentialGrid& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write csv: " + path);
    out << "i0,i1,i2,i3,z_re,z_im,w_re,w_im,value\n";
    out.precision(17);
    std::size_t idx = 0;
    for (int i0 = 0; i0 < g.res[0]; ++i0)
        for (int i1 = 0; i1 < g.res[1]; ++i1)
            for (int i2 = 0; i2 < g.res[2]; ++i2)
                for (int i3 = 0; i3 < g.res[3]; ++i3, ++idx)
                    out << i0 << ',' << i1 << ',' << i2 << ',' << i3 << ','
                        << g.node_coord(0, i0) << ',' << g.node_coord(1, i1)
                        << ',' << g.node_coord(2, i2) << ','
                        << g.node_coord(3, i3) << ',' << g.values[idx] << '\n';
}

}  // namespace p2dyn
