#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include <array>
#include <cmath>
#include <vector>

namespace wavestab::detail {

struct Rule {
    std::vector<double> x, w;  // on [-1, 1]
};

template <unsigned P>
Rule make_rule() {
    using G = boost::math::quadrature::gauss<double, P>;
    const auto& a = G::abscissa();
    const auto& w = G::weights();
    Rule r;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) {
            r.x.push_back(0.0);
            r.w.push_back(w[i]);
        } else {
            r.x.push_back(-a[i]);
            r.w.push_back(w[i]);
            r.x.push_back(a[i]);
            r.w.push_back(w[i]);
        }
    }
    return r;
}

inline const Rule& panel_rule() {
    static const Rule r = make_rule<15>();
    return r;
}

inline const Rule& tensor_rule() {
    static const Rule r = make_rule<30>();
    return r;
}

constexpr int kMaxDim = 6;
using Acc = std::array<double, kMaxDim>;

// Composite rule with 2^level equal panels; f(x, out) fills out[0..dim).
template <class F>
Acc composite(F&& f, double a, double b, int dim, int level) {
    const Rule& r = panel_rule();
    const long panels = 1L << level;
    const double h = (b - a) / static_cast<double>(panels);
    Acc acc{};
    Acc tmp{};
    for (long p = 0; p < panels; ++p) {
        const double mid = a + (static_cast<double>(p) + 0.5) * h;
        Acc pacc{};
        for (size_t i = 0; i < r.x.size(); ++i) {
            f(mid + 0.5 * h * r.x[i], tmp.data());
            for (int k = 0; k < dim; ++k) pacc[k] += r.w[i] * tmp[k];
        }
        for (int k = 0; k < dim; ++k) acc[k] += 0.5 * h * pacc[k];
    }
    return acc;
}

struct AdaptResult {
    Acc value{};
    int level = 0;
};

// Doubles the panel count until successive estimates agree to rtol (max norm).
template <class F>
AdaptResult integrate(F&& f, double a, double b, int dim, double rtol, int max_level,
                      int fixed_level) {
    AdaptResult res;
    if (fixed_level >= 0) {
        res.value = composite(f, a, b, dim, fixed_level);
        res.level = fixed_level;
        return res;
    }
    Acc prev = composite(f, a, b, dim, 0);
    for (int lev = 1; lev <= max_level; ++lev) {
        Acc cur = composite(f, a, b, dim, lev);
        double diff = 0.0, scale = 0.0;
        for (int k = 0; k < dim; ++k) {
            diff = std::max(diff, std::abs(cur[k] - prev[k]));
            scale = std::max(scale, std::abs(cur[k]));
        }
        res.value = cur;
        res.level = lev;
        if (diff <= rtol * scale || diff == 0.0) return res;
        prev = cur;
    }
    return res;
}

}  // namespace wavestab::detail
