#include "wavestab/portrait.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "roots.hpp"

namespace wavestab {

namespace {

constexpr int kGrid = 2048;

double Wv(const SystemSpec& sys, double c, const std::vector<double>& lam, double v) {
    return eval_potential(sys, v, c, lam, 1)[1];
}

}  // namespace

std::vector<double> critical_points(const SystemSpec& sys, double c,
                                    const std::vector<double>& lambda) {
    std::vector<double> xs(kGrid + 1), ws(kGrid + 1);
    for (int i = 0; i <= kGrid; ++i) {
        xs[i] = sys.lo + (sys.hi - sys.lo) * i / kGrid;
        ws[i] = Wv(sys, c, lambda, xs[i]);
    }
    std::vector<double> out;
    auto fn = [&](double v) { return Wv(sys, c, lambda, v); };
    auto dfn = [&](double v) { return eval_potential(sys, v, c, lambda, 2)[2]; };
    for (int i = 0; i < kGrid; ++i) {
        if (ws[i] == 0.0) {
            out.push_back(xs[i]);
            continue;
        }
        if ((ws[i] < 0) != (ws[i + 1] < 0) && ws[i + 1] != 0.0)
            out.push_back(detail::solve_bracket(fn, dfn, xs[i], xs[i + 1]));
    }
    if (ws[kGrid] == 0.0) out.push_back(xs[kGrid]);
    return out;
}

PhasePortrait classify_portrait(const SystemSpec& sys, double c,
                                const std::vector<double>& lambda) {
    const auto cps = critical_points(sys, c, lambda);
    std::vector<double> curv(cps.size());
    bool any_saddle = false, any_center = false;
    for (size_t i = 0; i < cps.size(); ++i) {
        curv[i] = eval_potential(sys, cps[i], c, lambda, 2)[2];
        any_saddle |= curv[i] < 0;
        any_center |= curv[i] > 0;
    }
    if (!any_saddle) throw WaveError(ErrorCode::NoSaddle, "potential has no saddle (local max) on the domain");
    if (!any_center) throw WaveError(ErrorCode::NoCenter, "potential has no center (local min) on the domain");
    size_t i = 0;
    for (; i + 1 < cps.size(); ++i)
        if (curv[i] < 0 && curv[i + 1] > 0) break;
    if (i + 1 >= cps.size())
        throw WaveError(ErrorCode::PatternViolation, "no saddle with a center immediately to its right");

    PhasePortrait p;
    p.c = c;
    p.lambda = lambda;
    p.v_s = cps[i];
    p.v_0 = cps[i + 1];
    p.mu_s = eval_potential(sys, p.v_s, c, lambda, 0)[0];
    p.mu_0 = eval_potential(sys, p.v_0, c, lambda, 0)[0];
    if (!(p.mu_0 < p.mu_s)) throw WaveError(ErrorCode::PatternViolation, "mu_0 >= mu_s");

    // W - mu_s relative to the saddle, free of cancellation near v_s.
    const double wv_s = Wv(sys, c, lambda, p.v_s);
    auto excess = [&](double v) {
        const std::array<double, 3> nd{v, p.v_s, p.v_s};
        return wv_s * (v - p.v_s) + (v - p.v_s) * (v - p.v_s) * dd_W(sys, c, lambda, nd);
    };
    auto dexcess = [&](double v) { return Wv(sys, c, lambda, v); };
    const double right = (i + 2 < cps.size()) ? cps[i + 2] : sys.hi;
    const int n = kGrid;
    double prev_x = p.v_0, prev_e = excess(p.v_0);
    for (int k = 1; k <= n; ++k) {
        const double x = p.v_0 + (right - p.v_0) * k / n;
        const double e = excess(x);
        if (e >= 0.0) {
            p.v_sup = (e == 0.0) ? x : detail::solve_bracket(excess, dexcess, prev_x, x);
            return p;
        }
        prev_x = x;
        prev_e = e;
    }
    (void)prev_e;
    if (i + 2 < cps.size())
        throw WaveError(ErrorCode::PatternViolation,
                        "a further critical point interleaves before the saddle level is re-attained");
    throw WaveError(ErrorCode::NoConjugate, "potential never re-attains the saddle level right of the center");
}

OrbitData orbit_roots(const SystemSpec& sys, const Params& params, const PhasePortrait& pp) {
    const double mu = params.mu;
    if (!(mu > pp.mu_0 && mu < pp.mu_s)) {
        std::ostringstream os;
        os << "mu=" << mu << " not in (" << pp.mu_0 << "," << pp.mu_s << ")";
        throw WaveError(ErrorCode::MuOutOfRange, os.str());
    }
    const double c = params.c;
    const auto& lam = params.lambda;
    // Anchor Z at the nearer critical point: Z = (mu - mu_a) - W_v(a)(v-a) - (v-a)^2 W[v,a,a].
    const bool near_center = (mu - pp.mu_0) < (pp.mu_s - mu);
    const double a = near_center ? pp.v_0 : pp.v_s;
    const double mua = near_center ? pp.mu_0 : pp.mu_s;
    const double wva = Wv(sys, c, lam, a);
    auto Z = [&](double v) {
        const std::array<double, 3> nd{v, a, a};
        return (mu - mua) - wva * (v - a) - (v - a) * (v - a) * dd_W(sys, c, lam, nd);
    };
    auto Zv = [&](double v) { return -Wv(sys, c, lam, v); };

    OrbitData o;
    o.v2 = detail::solve_bracket(Z, Zv, pp.v_s, pp.v_0);
    o.v3 = detail::solve_bracket(Z, Zv, pp.v_0, pp.v_sup);
    const int n = kGrid;
    double prev = pp.v_s;
    for (int k = 1; k <= n; ++k) {
        const double x = pp.v_s - (pp.v_s - sys.lo) * k / n;
        if (Z(x) >= 0.0) {
            o.v1 = detail::solve_bracket(Z, Zv, x, prev);
            break;
        }
        prev = x;
    }
    o.delta = 0.5 * (o.v3 - o.v2);
    o.m = 0.5 * (o.v2 + o.v3);
    o.h_s = pp.v_sup - pp.v_s;
    o.rho = o.v1 ? (o.v2 - *o.v1) / (o.v3 - o.v2) : 0.0;
    return o;
}

}  // namespace wavestab
