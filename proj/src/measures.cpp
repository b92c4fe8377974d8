#include "p2dyn/measures.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "p2dyn/parallel.hpp"
#include "p2dyn/rng.hpp"
#include "p2dyn/roots.hpp"

namespace p2dyn {

double PointCloudMeasure::weight_sum() const {
    return pairwise_sum(weights);
}

namespace {

cplx eval_base_pair(const std::vector<cplx>& coeffs, cplx b0, cplx b1, int d) {
    // sum coeffs[i] b0^i b1^(d-i)
    cplx acc(0.0);
    cplx b0p(1.0);
    std::vector<cplx> b1p(d + 1);
    b1p[0] = cplx(1.0);
    for (int k = 1; k <= d; ++k) b1p[k] = b1p[k - 1] * b1;
    for (int i = 0; i <= d; ++i) {
        acc += coeffs[i] * b0p * b1p[d - i];
        b0p *= b0;
    }
    return acc;
}

}  // namespace

std::vector<HomPoint> preimages_fibered(const HomPolyMap& f, const HomPoint& p,
                                        int* collisions) {
    if (!f.fibered()) throw ConfigError("preimages_fibered: map is not fibered");
    const int d = f.degree();
    const cplx p0 = p.c[0], p1 = p.c[1], p2 = p.c[2];
    if (std::abs(p0) < 1e-12 && std::abs(p1) < 1e-12)
        throw DegenerateFiber("preimages_fibered: target is [0:0:1]");

    // base equation p1 * P(zeta,1) - p0 * Q(zeta,1) = 0
    std::vector<cplx> r(d + 1);
    double scale = 0.0;
    for (int k = 0; k <= d; ++k) {
        r[k] = p1 * f.base_p()[k] - p0 * f.base_q()[k];
        scale = std::max(scale, std::abs(r[k]));
    }
    if (scale < 1e-300)
        throw RootFailure("preimages_fibered: base equation vanishes");

    int at_infinity = 0;
    while (r.size() > 1 && std::abs(r.back()) <= 1e-12 * scale) {
        r.pop_back();
        ++at_infinity;  // one base preimage at [1:0] per dropped degree
    }

    std::vector<std::array<cplx, 2>> bases;
    bases.reserve(d);
    for (int k = 0; k < at_infinity; ++k) bases.push_back({cplx(1.0), cplx(0.0)});
    if (r.size() > 1)
        for (const cplx& zeta : roots_univariate(r))
            bases.push_back({zeta, cplx(1.0)});

    std::vector<HomPoint> out;
    out.reserve(static_cast<std::size_t>(d) * d);
    for (const auto& b : bases) {
        const cplx pb = eval_base_pair(f.base_p(), b[0], b[1], d);
        const cplx qb = eval_base_pair(f.base_q(), b[0], b[1], d);
        const cplx alpha = std::abs(p0) >= std::abs(p1) ? pb / p0 : qb / p1;
        const cplx rhs = alpha * p2 / f.fiber_coeff();
        if (std::abs(rhs) == 0.0) {
            const HomPoint q = normalize({b[0], b[1], cplx(0.0)});
            for (int k = 0; k < d; ++k) out.push_back(q);  // d-fold root t'=0
        } else {
            const double rho = std::pow(std::abs(rhs), 1.0 / d);
            const double phase = std::arg(rhs) / d;
            for (int k = 0; k < d; ++k) {
                const double a = phase + 2.0 * std::numbers::pi * k / d;
                out.push_back(
                    normalize({b[0], b[1], std::polar(rho, a)}));
            }
        }
    }

    for (const HomPoint& q : out)
        if (chordal_distance(eval_map(f, q), p) > 1e-8)
            throw RootFailure("preimages_fibered: forward residual check failed");

    if (collisions) {
        int hits = 0;
        for (std::size_t i = 0; i < out.size(); ++i)
            for (std::size_t j = i + 1; j < out.size(); ++j)
                if (chordal_distance(out[i], out[j]) < 1e-8) ++hits;
        *collisions = hits;
    }
    return out;
}

PointCloudMeasure sample_equilibrium(const HomPolyMap& f, const HomPoint& start,
                                     int depth, std::size_t count,
                                     std::uint64_t seed) {
    if (depth < 10) throw ConfigError("sample_equilibrium: depth >= 10");
    if (count < 1000) throw ConfigError("sample_equilibrium: count >= 1000");
    if (std::abs(start.c[0]) < 1e-12 && std::abs(start.c[1]) < 1e-12)
        throw ExceptionalStart("sample_equilibrium: start is [0:0:1]");

    PointCloudMeasure cloud;
    cloud.points.resize(count);
    cloud.weights.assign(count, 1.0 / static_cast<double>(count));
    cloud.meta = {f.name(), depth, count, seed};

    const std::size_t branch = static_cast<std::size_t>(f.degree()) * f.degree();
    std::atomic<std::size_t> degenerate{0};
    parallel_for(count, [&](std::size_t k) {
        HomPoint x = start;
        for (int s = 0; s < depth; ++s) {
            std::vector<HomPoint> pre;
            try {
                pre = preimages_fibered(f, x);
            } catch (const DegenerateFiber&) {
                degenerate.fetch_add(1, std::memory_order_relaxed);
                return;
            }
            CounterRng rng(seed, k, static_cast<std::uint64_t>(s));
            x = pre[rng.uniform_int(branch)];
        }
        cloud.points[k] = x;
    });
    if (degenerate.load() * 100 > count)
        throw ExceptionalStart(
            "sample_equilibrium: more than 1% of walks degenerated");
    return cloud;
}

double pair_cloud(const PointCloudMeasure& cloud,
                  const std::function<double(const HomPoint&)>& phi) {
    std::vector<double> vals(cloud.points.size());
    parallel_for(cloud.points.size(), [&](std::size_t i) {
        vals[i] = cloud.weights[i] * phi(cloud.points[i]);
    });
    return pairwise_sum(vals);
}

double pair_cloud(const PointCloudMeasure& cloud, const TestFn& phi) {
    return pair_cloud(cloud, [&](const HomPoint& p) {
        if (std::abs(p.c[2]) < 1e-12) return 0.0;  // outside any chart-2 box
        return phi.value(p.c[0] / p.c[2], p.c[1] / p.c[2]);
    });
}

namespace {

bool strictly_inside(const GridBox& inner, const GridBox& outer) {
    for (int a = 0; a < 4; ++a)
        if (!(inner.lo[a] > outer.lo[a] && inner.hi[a] < outer.hi[a]))
            return false;
    return true;
}

double grid_quadrature(const PotentialGrid& g, bool coarse,
                       const std::function<double(cplx, cplx, double)>& fn) {
    const int f = coarse ? 2 : 1;
    const std::array<int, 4> r{g.res[0] / f, g.res[1] / f, g.res[2] / f,
                               g.res[3] / f};
    const std::vector<double>& vals = coarse ? g.coarse : g.values;
    double cell = 1.0;
    for (int a = 0; a < 4; ++a) cell *= (g.box.hi[a] - g.box.lo[a]) / r[a];

    const std::size_t n = vals.size();
    std::vector<double> terms(n);
    parallel_for(n, [&](std::size_t idx) {
        std::size_t rem = idx;
        const int i3 = static_cast<int>(rem % r[3]); rem /= r[3];
        const int i2 = static_cast<int>(rem % r[2]); rem /= r[2];
        const int i1 = static_cast<int>(rem % r[1]); rem /= r[1];
        const int i0 = static_cast<int>(rem);
        const cplx z(g.node_coord(0, i0, coarse), g.node_coord(1, i1, coarse));
        const cplx w(g.node_coord(2, i2, coarse), g.node_coord(3, i3, coarse));
        terms[idx] = fn(z, w, vals[idx]);
    });
    return pairwise_sum(terms) * cell;
}

}  // namespace

PairingResult slice_pairing(const PotentialGrid& grid, const TestFn& phi,
                            SliceDir direction) {
    if (!strictly_inside(phi.support(), grid.box))
        throw SupportViolation("slice_pairing: support touches the grid box");
    auto integrand = [&](cplx z, cplx w, double g) {
        return direction == SliceDir::W ? g * phi.lap_z(z, w)
                                        : g * phi.lap_w(z, w);
    };
    PairingResult res;
    res.value = grid_quadrature(grid, false, integrand);
    if (!grid.coarse.empty()) {
        const double sc = grid_quadrature(grid, true, integrand);
        res.error = std::abs(res.value - sc);
    }
    return res;
}

PairingResult trace_pairing(const PotentialGrid& grid, const TestFn& phi) {
    const PairingResult a = slice_pairing(grid, phi, SliceDir::W);
    const PairingResult b = slice_pairing(grid, phi, SliceDir::Z);
    return {a.value + b.value, a.error + b.error};
}

void export_cloud_csv(const PointCloudMeasure& cloud, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write cloud csv: " + path);
    out.precision(17);
    out << "re0,im0,re1,im1,re2,im2,weight\n";
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        const triple& c = cloud.points[i].c;
        out << c[0].real() << ',' << c[0].imag() << ',' << c[1].real() << ','
            << c[1].imag() << ',' << c[2].real() << ',' << c[2].imag() << ','
            << cloud.weights[i] << '\n';
    }
}

PointCloudMeasure load_cloud_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open cloud csv: " + path);
    PointCloudMeasure cloud;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::array<double, 7> v{};
        char comma;
        for (int k = 0; k < 7; ++k) {
            ss >> v[k];
            if (k < 6) ss >> comma;
        }
        cloud.points.push_back(normalize(
            {cplx(v[0], v[1]), cplx(v[2], v[3]), cplx(v[4], v[5])}));
        cloud.weights.push_back(v[6]);
    }
    return cloud;
}

}  // namespace p2dyn
