#include "wavestab/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "gauss.hpp"

namespace wavestab {

using detail::Acc;

double reduced_R(const SystemSpec& sys, double v, double w, double z, double c,
                 const std::vector<double>& lambda) {
    const std::array<double, 3> nd{v, w, z};
    return dd_W(sys, c, lambda, nd);
}

double reduced_R_quadrature(const SystemSpec& sys, double v, double w, double z, double c,
                            const std::vector<double>& lambda) {
    const auto& r = detail::tensor_rule();
    double acc = 0.0;
    for (size_t i = 0; i < r.x.size(); ++i) {
        const double t = 0.5 * (r.x[i] + 1.0);
        for (size_t j = 0; j < r.x.size(); ++j) {
            const double s = 0.5 * (r.x[j] + 1.0);
            const double arg = w + t * (z - w) + t * s * (v - z);
            acc += 0.25 * r.w[i] * r.w[j] * t * eval_potential(sys, arg, c, lambda, 2)[2];
        }
    }
    return acc;
}

namespace {

void put_grad(const SystemSpec& sys, const Params& p, double v, double scale, double* out) {
    const std::array<double, 1> nd{v};
    const Vec g = dd_gradZ(sys, p.c, p.lambda, nd);
    for (int k = 0; k < sys.dim(); ++k) out[k] = scale * g[k];
}

ActionGradient pack(const SystemSpec& sys, double theta, const Acc& grad, Route route, int level) {
    ActionGradient ag;
    ag.theta = theta;
    ag.grad = Vec(sys.dim());
    for (int k = 0; k < sys.dim(); ++k) ag.grad[k] = grad[k];
    ag.period = ag.grad[0];
    ag.route = route;
    ag.level = level;
    return ag;
}

}  // namespace

ActionGradient theta_and_grad(const SystemSpec& sys, const Params& p, const OrbitData& o,
                              const QuadOptions& opts) {
    const double m = o.m, delta = o.delta;
    const double v2 = o.v2, v3 = o.v3;
    const int dim = sys.dim();
    bool violated = false;
    auto fn = [&](double th, double* out) {
        const double vv = m + delta * std::sin(th);
        const std::array<double, 3> nd{vv, v2, v3};
        const double R = dd_W(sys, p.c, p.lambda, nd);
        if (!(R > 0.0)) {
            violated = true;
            for (int k = 0; k <= dim; ++k) out[k] = 0.0;
            return;
        }
        const double kap = sys.kappa(vv);
        const double ct = std::cos(th);
        out[dim] = std::sqrt(kap * R / 2.0) * ct * ct;
        put_grad(sys, p, vv, std::sqrt(2.0 * kap / R), out);
    };
    const double hp = 0.5 * std::numbers::pi;
    auto res = detail::integrate(fn, -hp, hp, dim + 1, opts.rtol, opts.max_level, opts.fixed_level);
    if (violated)
        throw WaveError(ErrorCode::AssumptionViolation, "reduced potential not positive on [v2,v3]");
    const double theta = (v3 - v2) * (v3 - v2) * res.value[dim];
    return pack(sys, theta, res.value, Route::Harmonic, res.level);
}

ActionGradient theta_and_grad_soliton_regime(const SystemSpec& sys, const Params& p,
                                             const OrbitData& o, const QuadOptions& opts) {
    if (!o.v1) throw WaveError(ErrorCode::Usage, "soliton parametrization needs v1");
    const double v1 = *o.v1, v2 = o.v2, v3 = o.v3;
    const double L = v3 - v2;
    const double rho = (v2 - v1) / L;
    const int dim = sys.dim();
    const double sig_m = 0.5;
    bool violated = false;

    // sigma = rho sinh^2(t/2) removes the 1/sqrt(sigma(sigma+rho)) kernel.
    auto fa = [&](double t, double* out) {
        const double sh = std::sinh(0.5 * t);
        const double sig = rho * sh * sh;
        const double vv = v2 + sig * L;
        const std::array<double, 3> nd{vv, v1, v2};
        const double negR = -dd_W(sys, p.c, p.lambda, nd);
        if (!(negR > 0.0)) {
            violated = true;
            for (int k = 0; k <= dim; ++k) out[k] = 0.0;
            return;
        }
        const double kap = sys.kappa(vv);
        out[dim] = 2.0 * L * L * std::sqrt(2.0 * kap * negR) * sig * (sig + rho);
        put_grad(sys, p, vv, std::sqrt(2.0 * kap / negR), out);
    };
    // sigma = 1 - s^2 with the fourth divided difference absorbing the zero at v3.
    auto fb = [&](double s, double* out) {
        const double sig = 1.0 - s * s;
        const double vv = v3 - s * s * L;
        const std::array<double, 4> nd{vv, v1, v2, v3};
        const double X = dd_W(sys, p.c, p.lambda, nd);
        if (!(X > 0.0)) {
            violated = true;
            for (int k = 0; k <= dim; ++k) out[k] = 0.0;
            return;
        }
        const double kap = sys.kappa(vv);
        const double root = std::sqrt(sig * (sig + rho));
        out[dim] = 2.0 * L * L * std::sqrt(2.0 * kap * L * X) * s * root * 2.0 * s;
        put_grad(sys, p, vv, 2.0 * std::sqrt(2.0 * kap / (L * X)) / root, out);
    };
    const double tA = 2.0 * std::asinh(std::sqrt(sig_m / rho));
    const double sB = std::sqrt(1.0 - sig_m);
    auto ra = detail::integrate(fa, 0.0, tA, dim + 1, opts.rtol, opts.max_level, opts.fixed_level);
    auto rb = detail::integrate(fb, 0.0, sB, dim + 1, opts.rtol, opts.max_level, opts.fixed_level);
    if (violated)
        throw WaveError(ErrorCode::AssumptionViolation, "reduced potential changes sign on the orbit");
    Acc tot{};
    for (int k = 0; k <= dim; ++k) tot[k] = ra.value[k] + rb.value[k];
    return pack(sys, tot[dim], tot, Route::Soliton, std::max(ra.level, rb.level));
}

ActionGradient action_gradient(const SystemSpec& sys, const Params& params, const OrbitData& orbit,
                               const QuadOptions& opts) {
    if (opts.force_route == static_cast<int>(Route::Soliton))
        return theta_and_grad_soliton_regime(sys, params, orbit, opts);
    if (opts.force_route == static_cast<int>(Route::Harmonic))
        return theta_and_grad(sys, params, orbit, opts);
    if (orbit.v1 && orbit.rho < kSolitonRouteRho)
        return theta_and_grad_soliton_regime(sys, params, orbit, opts);
    return theta_and_grad(sys, params, orbit, opts);
}

ActionEval evaluate_action(const SystemSpec& sys, const Params& params, const QuadOptions& opts) {
    ActionEval e;
    e.portrait = classify_portrait(sys, params.c, params.lambda);
    e.orbit = orbit_roots(sys, params, e.portrait);
    e.ag = action_gradient(sys, params, e.orbit, opts);
    return e;
}

double boussinesq_momentum(const SystemSpec& sys, double c, const std::vector<double>& lambda,
                           const PhasePortrait& pp, double rtol) {
    const double vs = pp.v_s, vsup = pp.v_sup, h = vsup - vs;
    bool violated = false;
    auto fn = [&](double s, double* out) {
        const double sig = 1.0 - s * s;
        const double vv = vsup - s * s * h;
        const std::array<double, 4> nd{vv, vs, vs, vsup};
        const double X = dd_W(sys, c, lambda, nd);
        if (!(X > 0.0)) violated = true;
        out[0] = std::sqrt(2.0 * sys.kappa(vv) * h * std::max(X, 0.0)) * s * sig * 2.0 * s;
    };
    auto r = detail::integrate(fn, 0.0, 1.0, 1, rtol, 14, -1);
    if (violated)
        throw WaveError(ErrorCode::AssumptionViolation, "homoclinic potential changes sign");
    return 2.0 * h * h * r.value[0];
}

namespace {

// Quantities along the homoclinic loop at fixed end state, parametrized by s with
// sigma = 1 - s^2 and V = v^s - s^2 h.
struct LoopCtx {
    const SystemSpec& sys;
    double c;
    std::vector<double> lambda;
    double vs, us, vsup, h;
    Vec S;  // impulse-matrix image of the end-state gradient
};

// -Q(U - U_s) / (V - v_s)^2
double impulse_ratio(const LoopCtx& L, double v) {
    if (L.sys.N == 1) return 1.0 / (2.0 * L.sys.b);
    const std::array<double, 2> nd{v, L.vs};
    return dd_gradZ(L.sys, L.c, L.lambda, nd)[2] / L.sys.b;
}

// S . dZ/dv at v
double S_dot_W(const LoopCtx& L, double v) {
    if (L.sys.N == 1) return -(v - L.vs) / L.sys.b;
    const std::array<double, 2> nd{v, L.vs};
    const double e = dd_gradZ(L.sys, L.c, L.lambda, nd)[2];
    const double gv = eval_g(L.sys, v, L.c, L.lambda[1], 1)[1];
    return -(v - L.vs) * (gv + e) / L.sys.b;
}

}  // namespace

MomentumReport momentum_derivatives(const SystemSpec& sys, double c, const EndState& st,
                                    MomentumMethod method) {
    MomentumReport rep;
    rep.method = method;
    const Params p0 = params_for_state(sys, st.v, st.u, c);
    const PhasePortrait pp = classify_portrait(sys, c, p0.lambda);
    rep.M = boussinesq_momentum(sys, c, p0.lambda, pp, 1e-13);

    if (method != MomentumMethod::FiniteDifference) {
        LoopCtx L{sys, c, p0.lambda, pp.v_s, st.u.value_or(0.0), pp.v_sup, pp.v_sup - pp.v_s, Vec()};
        const GradZ gs = grad_Z(sys, L.vs, c, p0.lambda);
        L.S = Vec::Zero(sys.dim());
        L.S[0] = -gs.V[sys.dim() - 1];
        L.S[sys.dim() - 1] = -1.0;
        if (sys.N == 1) {
            L.S[1] = L.vs / sys.b;
        } else {
            L.S[1] = gs.V[2] / sys.b;
            L.S[2] = L.vs / sys.b;
        }
        const double Wv_sup = eval_potential(sys, L.vsup, c, p0.lambda, 1)[1];
        const double s_sup = -L.h * L.h * impulse_ratio(L, L.vsup);
        const double dh = -s_sup / Wv_sup;  // d_c v^s along the fixed-end-state family
        auto fn = [&](double s, double* out) {
            const double sig = 1.0 - s * s;
            const double vv = L.vsup - s * s * L.h;
            const std::array<double, 4> n4{vv, L.vs, L.vs, L.vsup};
            const double X = dd_W(sys, c, L.lambda, n4);
            const double kap = sys.kappa(vv);
            const double A = std::sqrt(2.0 * kap / (L.h * X));
            const double E = impulse_ratio(L, vv);
            out[0] = 2.0 * L.h * L.h * A * sig * E;
            const std::array<double, 5> nvv{vv, vv, L.vs, L.vs, L.vsup};
            const std::array<double, 5> nss{vv, L.vs, L.vs, L.vsup, L.vsup};
            const double dX = L.S.dot(dd_gradZ(sys, c, L.lambda, n4)) +
                              dd_W(sys, c, L.lambda, nvv) * sig * dh +
                              dd_W(sys, c, L.lambda, nss) * dh;
            const double dlogA = 0.5 * sys.kappa.deriv(vv, 1) / kap * sig * dh - 0.5 * dh / L.h -
                                 0.5 * dX / X;
            double ds_over_sig = S_dot_W(L, vv) * dh;
            if (sys.N == 2) ds_over_sig += sig * L.h * L.h / (sys.b * sys.b * sys.tau(vv));
            out[1] = -2.0 * (A * dlogA * (-sig * L.h * L.h * E) + A * ds_over_sig);
        };
        auto r = detail::integrate(fn, 0.0, 1.0, 2, 1e-13, 14, -1);
        rep.dM_integral = r.value[0];
        rep.d2M_integral = r.value[1];
    }

    if (method != MomentumMethod::Integral) {
        auto M_at = [&](double cc) {
            const Params pc = params_for_state(sys, st.v, st.u, cc);
            const PhasePortrait q = classify_portrait(sys, cc, pc.lambda);
            if (std::abs(q.v_s - st.v) > 1e-8 * std::max(1.0, std::abs(st.v)))
                throw WaveError(ErrorCode::PatternViolation, "end state is no longer the saddle");
            return boussinesq_momentum(sys, cc, pc.lambda, q, 1e-14);
        };
        try {
            double h = 0.02 * std::max(1.0, std::abs(c));
            auto diffs = [&](double hh, double& d1, double& d2) {
                const double mp = M_at(c + hh), mm = M_at(c - hh);
                d1 = (mp - mm) / (2.0 * hh);
                d2 = (mp - 2.0 * rep.M + mm) / (hh * hh);
            };
            double d1a, d2a, d1b, d2b;
            diffs(h, d1a, d2a);
            double r1 = 0.0, r2 = 0.0, prev1 = NAN, prev2 = NAN;
            for (int it = 0; it < 10; ++it) {
                diffs(0.5 * h, d1b, d2b);
                r1 = (4.0 * d1b - d1a) / 3.0;
                r2 = (4.0 * d2b - d2a) / 3.0;
                rep.fd_step = 0.5 * h;
                if (std::isfinite(prev2) && std::abs(r2 - prev2) <= 1e-9 * std::max(1.0, std::abs(r2)) &&
                    std::abs(r1 - prev1) <= 1e-10 * std::max(1.0, std::abs(r1)))
                    break;
                prev1 = r1;
                prev2 = r2;
                d1a = d1b;
                d2a = d2b;
                h *= 0.5;
            }
            rep.dM_fd = r1;
            rep.d2M_fd = r2;
            rep.fd_available = true;
        } catch (const WaveError&) {
            rep.fd_available = false;
        }
    }

    if (method == MomentumMethod::FiniteDifference && !rep.fd_available)
        throw WaveError(ErrorCode::PerturbationLeavesWindow, "portrait lost under c-perturbation");
    rep.dM = rep.dM_integral ? *rep.dM_integral : rep.dM_fd.value_or(NAN);
    rep.d2M = rep.d2M_integral ? *rep.d2M_integral : rep.d2M_fd.value_or(NAN);
    return rep;
}

}  // namespace wavestab
