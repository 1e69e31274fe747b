#pragma once

#include <cmath>
#include <limits>

#include "wavestab/errors.hpp"

namespace wavestab::detail {

// Safeguarded Newton on a sign-changing bracket [a, b].
template <class F, class DF>
double solve_bracket(F&& fn, DF&& dfn, double a, double b) {
    double fa = fn(a), fb = fn(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0) == (fb > 0)) throw WaveError(ErrorCode::RootBracketFailure, "no sign change");
    if (fa > 0) {
        std::swap(a, b);
        std::swap(fa, fb);
    }
    // now fn(a) < 0 < fn(b)
    double x = 0.5 * (a + b);
    double best = x, fbest = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 300; ++it) {
        const double fx = fn(x);
        if (std::abs(fx) < fbest) {
            fbest = std::abs(fx);
            best = x;
        }
        if (fx == 0.0) return x;
        if (fx < 0) a = x; else b = x;
        const double width = std::abs(b - a);
        if (width <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x)))
            break;
        const double d = dfn(x);
        double xn = (d != 0.0) ? x - fx / d : 0.5 * (a + b);
        const double lo = std::min(a, b), hi = std::max(a, b);
        if (!(xn > lo && xn < hi) || (it % 8 == 7)) xn = 0.5 * (a + b);
        if (xn == x) break;
        x = xn;
    }
    return best;
}

}  // namespace wavestab::detail
