#include "p2dyn/polymap.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "p2dyn/rng.hpp"

namespace p2dyn {

using json = nlohmann::json;

HomPolyMap::HomPolyMap(int degree, std::array<std::vector<cplx>, 3> components,
                       bool fibered, std::string name)
    : degree_(degree), comp_(std::move(components)), fibered_(fibered),
      name_(std::move(name)) {
    if (degree_ < 2 || degree_ > kMaxDegree)
        throw ConfigError("map degree must be in [2, 8], got " +
                          std::to_string(degree_));
    const std::size_t want =
        static_cast<std::size_t>((degree_ + 1) * (degree_ + 2) / 2);
    for (const auto& c : comp_)
        if (c.size() != want)
            throw ConfigError("component table size mismatch");
    int off = 0;
    for (int i = 0; i <= degree_; ++i) {
        offsets_[i] = off;
        off += degree_ + 1 - i;
    }

    if (fibered_) {
        // first two components must not involve t, third must be c * t^d
        for (int c = 0; c < 2; ++c)
            for (int i = 0; i <= degree_; ++i)
                for (int j = 0; j <= degree_ - i; ++j)
                    if (i + j < degree_ && std::abs(coeff(c, i, j)) > 0)
                        throw ConfigError("fibered map: component " +
                                          std::to_string(c) + " depends on t");
        for (int i = 0; i <= degree_; ++i)
            for (int j = 0; j <= degree_ - i; ++j)
                if ((i > 0 || j > 0) && std::abs(coeff(2, i, j)) > 0)
                    throw ConfigError("fibered map: third component is not c*t^d");
        fiber_coeff_ = coeff(2, 0, 0);
        if (std::abs(fiber_coeff_) == 0.0)
            throw ConfigError("fibered map: zero fiber coefficient");
        base_p_.resize(degree_ + 1);
        base_q_.resize(degree_ + 1);
        for (int i = 0; i <= degree_; ++i) {
            base_p_[i] = coeff(0, i, degree_ - i);
            base_q_[i] = coeff(1, i, degree_ - i);
        }
    }
}

triple eval_raw(const HomPolyMap& F, const triple& x) {
    const int d = F.degree();
    const cplx z = x[0], w = x[1], t = x[2];
    std::array<cplx, HomPolyMap::kMaxDegree + 1> tpow;
    tpow[0] = cplx(1.0);
    for (int k = 1; k <= d; ++k) tpow[k] = tpow[k - 1] * t;

    triple out;
    for (int c = 0; c < 3; ++c) {
        cplx acc(0.0);
        for (int i = d; i >= 0; --i) {
            cplx inner(0.0);
            for (int j = d - i; j >= 0; --j)
                inner = inner * w + F.coeff(c, i, j) * tpow[d - i - j];
            acc = acc * z + inner;
        }
        out[c] = acc;
    }
    return out;
}

HomPoint eval_map(const HomPolyMap& F, const HomPoint& p) {
    try {
        return normalize(eval_raw(F, p.c));
    } catch (const ZeroVector&) {
        throw Indeterminate("eval_map: image triple degenerates");
    }
}

namespace {

cplx eval_partial(const HomPolyMap& F, int c, int var, const triple& x) {
    const int d = F.degree();
    std::array<cplx, HomPolyMap::kMaxDegree + 1> zp, wp, tp;
    zp[0] = wp[0] = tp[0] = cplx(1.0);
    for (int k = 1; k <= d; ++k) {
        zp[k] = zp[k - 1] * x[0];
        wp[k] = wp[k - 1] * x[1];
        tp[k] = tp[k - 1] * x[2];
    }
    cplx acc(0.0);
    for (int i = 0; i <= d; ++i) {
        for (int j = 0; j <= d - i; ++j) {
            const int k = d - i - j;
            const cplx a = F.coeff(c, i, j);
            if (a == cplx(0.0)) continue;
            switch (var) {
                case 0:
                    if (i > 0) acc += a * double(i) * zp[i - 1] * wp[j] * tp[k];
                    break;
                case 1:
                    if (j > 0) acc += a * double(j) * zp[i] * wp[j - 1] * tp[k];
                    break;
                default:
                    if (k > 0) acc += a * double(k) * zp[i] * wp[j] * tp[k - 1];
            }
        }
    }
    return acc;
}

}  // namespace

Eigen::Matrix3cd jacobian_lift(const HomPolyMap& F, const triple& x) {
    Eigen::Matrix3cd J;
    for (int c = 0; c < 3; ++c)
        for (int v = 0; v < 3; ++v) J(c, v) = eval_partial(F, c, v, x);
    return J;
}

TangentFrame tangent_map_in_charts(const HomPolyMap& F, const HomPoint& p,
                                   int src_chart, int img_chart) {
    const triple fx = eval_raw(F, p.c);
    if (std::abs(fx[img_chart]) < 1e-300)
        throw Indeterminate("tangent_map: image chart coordinate vanishes");

    const Eigen::Matrix3cd J = jacobian_lift(F, p.c);
    std::array<int, 2> src_slots{}, img_slots{};
    int m = 0;
    for (int k = 0; k < 3; ++k)
        if (k != src_chart) src_slots[m++] = k;
    m = 0;
    for (int k = 0; k < 3; ++k)
        if (k != img_chart) img_slots[m++] = k;

    // d(F_a / F_jc) along the source-chart slots, quotient rule
    TangentFrame frame;
    frame.base = p;
    frame.src_chart = src_chart;
    frame.img_chart = img_chart;
    const cplx den = fx[img_chart];
    for (int r = 0; r < 2; ++r) {
        const int a = img_slots[r];
        for (int s = 0; s < 2; ++s) {
            const int b = src_slots[s];
            frame.m(r, s) = (J(a, b) * den - fx[a] * J(img_chart, b)) / (den * den);
        }
    }
    return frame;
}

TangentFrame tangent_map(const HomPolyMap& F, const HomPoint& p) {
    const HomPoint fp = eval_map(F, p);
    return tangent_map_in_charts(F, p, p.chart, fp.chart);
}

NondegReport check_nondegenerate(const HomPolyMap& F, int trials,
                                 std::uint64_t seed, double floor) {
    if (trials < 100) throw ConfigError("check_nondegenerate: trials >= 100");
    NondegReport rep;
    rep.trials = trials;
    rep.floor = floor;
    double worst = std::numeric_limits<double>::infinity();
    CounterRng rng(seed, 0x6e64636bULL);
    for (int t = 0; t < trials; ++t) {
        triple x{rng.uniform_complex(-1, 1), rng.uniform_complex(-1, 1),
                 rng.uniform_complex(-1, 1)};
        // every third trial, push one coordinate near a coordinate plane to
        // expose common factors
        if (t % 3 == 1) x[t / 3 % 3] *= 1e-8;
        HomPoint p;
        try {
            p = normalize(x);
        } catch (const ZeroVector&) {
            continue;
        }
        const triple fx = eval_raw(F, p.c);
        const double r = max_abs(fx);  // |p| = 1 in sup norm
        if (r < 1e-300)
            throw DegenerateMap("check_nondegenerate: zero image at trial " +
                                std::to_string(t));
        worst = std::min(worst, r);
    }
    rep.min_ratio = worst;
    rep.pass = worst > floor;
    return rep;
}

HomPolyMap load_map_json(const std::string& text, const std::string& name) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("map file: invalid json: ") + e.what());
    }
    if (!j.contains("degree") || !j.contains("components"))
        throw ConfigError("map file: missing degree/components");
    const int d = j.at("degree").get<int>();
    if (d < 2 || d > HomPolyMap::kMaxDegree)
        throw ConfigError("map file: degree out of range");
    const auto& comps = j.at("components");
    if (!comps.is_array() || comps.size() != 3)
        throw ConfigError("map file: expected 3 components");

    const std::size_t table = static_cast<std::size_t>((d + 1) * (d + 2) / 2);
    std::array<std::vector<cplx>, 3> tabs;
    for (int c = 0; c < 3; ++c) {
        tabs[c].assign(table, cplx(0.0));
        for (const auto& term : comps[c]) {
            const auto& e = term.at("exps");
            const int i = e.at(0).get<int>(), jj = e.at(1).get<int>(),
                      k = e.at(2).get<int>();
            if (i < 0 || jj < 0 || k < 0 || i + jj + k != d)
                throw ConfigError("map file: exponents not homogeneous of the "
                                  "declared degree");
            int off = 0;
            for (int a = 0; a < i; ++a) off += d + 1 - a;
            tabs[c][off + jj] += cplx(term.at("re").get<double>(),
                                      term.value("im", 0.0));
        }
    }
    const bool fib = j.value("fibered", false);
    return HomPolyMap(d, std::move(tabs), fib, name);
}

HomPolyMap load_map_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open map file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_map_json(ss.str(), path);
}

std::string map_to_json(const HomPolyMap& F) {
    json comps = json::array();
    const int d = F.degree();
    for (int c = 0; c < 3; ++c) {
        json terms = json::array();
        for (int i = 0; i <= d; ++i)
            for (int j = 0; j <= d - i; ++j) {
                const cplx a = F.coeff(c, i, j);
                if (a == cplx(0.0)) continue;
                terms.push_back({{"exps", {i, j, d - i - j}},
                                 {"re", a.real()},
                                 {"im", a.imag()}});
            }
        comps.push_back(terms);
    }
    json j{{"degree", d}, {"components", comps}, {"fibered", F.fibered()}};
    return j.dump(2);
}

}  // namespace p2dyn
