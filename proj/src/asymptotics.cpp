#include "wavestab/asymptotics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wavestab {

namespace {

double spectral_norm(const Mat& A) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (A + A.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

Mat sym(const Vec& x, const Vec& y) { return x * y.transpose() + y * x.transpose(); }

// The bracket shared by both limits: alpha VV + beta (VW + WV) + a^2/2 WW + t TT + a^2/4 (VZ + ZV)
Mat hessian_bracket(const AsymFrame& f, double tsign) {
    const Frame& v = f.vec;
    const double a2 = f.coeffs.a * f.coeffs.a;
    return f.alpha * v.V * v.V.transpose() + f.beta * sym(v.V, v.W) +
           0.5 * a2 * v.W * v.W.transpose() + tsign * v.T * v.T.transpose() +
           0.25 * a2 * sym(v.V, v.Z);
}

}  // namespace

LimitCoeffs limit_coeffs(const SystemSpec& sys, double c, const std::vector<double>& lambda,
                         const PhasePortrait& pp, Limit which) {
    LimitCoeffs L;
    L.which = which;
    const double v = which == Limit::Harmonic ? pp.v_0 : pp.v_s;
    const auto w = eval_potential(sys, v, c, lambda, 4);
    const double W2 = w[2], W3 = w[3], W4 = w[4];
    const double num = (5.0 / 3.0) * W3 * W3 - W2 * W4;
    if (which == Limit::Harmonic) {
        L.a = std::sqrt(2.0 / W2);
        L.b = -W3 / (3.0 * W2 * W2);
        L.cc = num / (6.0 * std::numbers::sqrt2 * std::pow(W2, 3.5));
    } else {
        L.a = std::sqrt(-2.0 / W2);
        L.b = W3 / (3.0 * W2 * W2);
        L.cc = num / (6.0 * std::numbers::sqrt2 * std::pow(-W2, 3.5));
        L.p = 1.0 / eval_potential(sys, pp.v_sup, c, lambda, 1)[1];
    }
    return L;
}

YDerivs y_derivs(const SystemSpec& sys, double v, double c, const std::vector<double>& lambda) {
    const auto w = eval_potential(sys, v, c, lambda, 4);
    // R and its partials at (v, v, v)
    const double R = w[2] / 2.0, R1 = w[3] / 6.0, R11 = w[4] / 12.0, R12 = w[4] / 24.0;
    const double k = sys.kappa(v), k1 = sys.kappa.deriv(v, 1), k2 = sys.kappa.deriv(v, 2);
    const double Lv = k1 / (2.0 * k) - R1 / (2.0 * R);
    const double Lz = -R1 / (2.0 * R);
    const double Lvv = 0.5 * (k2 / k - (k1 / k) * (k1 / k)) - 0.5 * (R11 / R - R1 * R1 / (R * R));
    const double Lzz = -0.5 * (R11 / R - R1 * R1 / (R * R));
    const double Lwz = -0.5 * (R12 / R - R1 * R1 / (R * R));
    YDerivs y;
    y.Y = std::sqrt(2.0 * k / std::abs(R));
    y.v = Lv;
    y.z = Lz;
    y.vv = Lvv + Lv * Lv;
    y.zz = Lzz + Lz * Lz;
    y.wz = Lwz + Lz * Lz;
    return y;
}

AsymFrame frame_vectors(const SystemSpec& sys, double c, const std::vector<double>& lambda,
                        const PhasePortrait& pp, Limit which) {
    AsymFrame f;
    f.which = which;
    f.coeffs = limit_coeffs(sys, c, lambda, pp, which);
    const double v = which == Limit::Harmonic ? pp.v_0 : pp.v_s;
    f.vec = frame_at(sys, v, c, lambda);
    if (which == Limit::Soliton) {
        f.Vsup = grad_Z(sys, pp.v_sup, c, lambda).V;
        f.S = build_S(sys) * f.vec.V;
        f.h_s = pp.v_sup - pp.v_s;
    }
    const YDerivs y = y_derivs(sys, v, c, lambda);
    const double a = f.coeffs.a, b = f.coeffs.b;
    f.Y = y.Y;
    f.alpha = b * (y.v + 2.0 * y.z) + a * a * (0.25 * y.vv + y.zz - y.wz);
    f.beta = b + 0.5 * a * a * y.v;
    if (which == Limit::Harmonic) {
        const double k = sys.kappa(v);
        f.alpha_closed = 1.5 * f.coeffs.cc / a + 0.75 * b * sys.kappa.deriv(v, 1) / k +
                         a * a / 8.0 * sys.kappa.deriv(v, 2) / k;
        f.Xi0 = std::numbers::pi * a * std::sqrt(2.0 * k);
    }
    return f;
}

AsymFrame harmonic_hessian_prediction(const SystemSpec& sys, double c,
                                      const std::vector<double>& lambda, const PhasePortrait& pp) {
    AsymFrame f = frame_vectors(sys, c, lambda, pp, Limit::Harmonic);
    f.predicted_H = std::numbers::pi * f.Y * hessian_bracket(f, -1.0);
    return f;
}

AsymFrame soliton_hessian_prediction(const SystemSpec& sys, double c,
                                     const std::vector<double>& lambda, const PhasePortrait& pp,
                                     bool with_M2) {
    AsymFrame f = frame_vectors(sys, c, lambda, pp, Limit::Soliton);
    const double a2 = f.coeffs.a * f.coeffs.a;
    f.leading = f.Y * 2.0 * a2 / (f.h_s * f.h_s) * f.vec.V * f.vec.V.transpose();
    f.predicted_H = f.Y * hessian_bracket(f, +1.0);
    if (with_M2) {
        EndState st{pp.v_s, std::nullopt};
        if (sys.N == 2) st.u = eval_g(sys, pp.v_s, c, lambda[1], 0)[0];
        const MomentumReport m = momentum_derivatives(sys, c, st, MomentumMethod::Both);
        f.M2 = m.fd_available ? *m.d2M_fd : m.d2M;
    }
    return f;
}

Mat soliton_singular_part(const AsymFrame& f, double rho) {
    return f.leading * (1.0 + rho) / (rho * rho) + f.predicted_H * std::log(rho);
}

HessianComparison compare_hessian(const SystemSpec& sys, const Params& params, Limit which) {
    HessianComparison out;
    out.which = which;
    out.report = stability_verdict(sys, params);
    out.H_num = out.report.H;
    const PhasePortrait& pp = out.report.base.portrait;
    const OrbitData& o = out.report.base.orbit;
    if (which == Limit::Harmonic) {
        const AsymFrame f = harmonic_hessian_prediction(sys, params.c, params.lambda, pp);
        out.small = o.delta;
        out.H_pred = f.predicted_H;
        out.rel_residual = spectral_norm(out.H_num - out.H_pred) / spectral_norm(out.H_pred);
        return out;
    }
    if (!o.v1) throw WaveError(ErrorCode::AssumptionViolation, "soliton comparison needs v1");
    const AsymFrame f = soliton_hessian_prediction(sys, params.c, params.lambda, pp);
    const double rho = o.rho;
    out.small = rho;
    out.H_pred = soliton_singular_part(f, rho);
    out.residual = out.H_num - out.H_pred;
    out.E_res_E = out.residual(0, 0);
    out.leading_ratio = out.H_num(0, 0) * rho * rho / (f.leading(0, 0) * (1.0 + rho));
    out.SHS = f.S->dot(out.H_num * *f.S);
    out.M2 = f.M2.value_or(NAN);
    out.SHS_error = std::abs(out.SHS - out.M2);
    return out;
}

Sigma0 sigma0_sequence(const SystemSpec& sys, double c, const std::vector<double>& lambda,
                       const PhasePortrait& pp) {
    const AsymFrame f = harmonic_hessian_prediction(sys, c, lambda, pp);
    if (std::abs(f.alpha) < 1e-12 * std::max(1.0, std::abs(f.beta)))
        throw WaveError(ErrorCode::DegenerateAlpha0, "alpha_0 vanishes");
    if (sys.N == 2) {
        const auto g = eval_g(sys, pp.v_0, c, lambda[1], 1);
        if (std::abs(g[1]) < 1e-12 * std::max(1.0, std::abs(g[0])))
            throw WaveError(ErrorCode::DegenerateSlaving, "g_v vanishes at the center");
    }
    const Mat S = build_S(sys);
    const Mat P = basis_P(f.vec, S, sys.N);
    Sigma0 out;
    out.alpha0 = f.alpha;
    out.Sigma = congruence(P, f.predicted_H / (std::numbers::pi * f.Y));
    out.signs = leading_minor_signs(out.Sigma, 1e-13);
    out.n = out.signs.empty() ? negative_signature(out.Sigma).n : sign_changes(out.signs);
    return out;
}

RootExpansionResiduals root_expansion_check(const SystemSpec& sys, const Params& params,
                                            const PhasePortrait& pp, Limit which) {
    RootExpansionResiduals r;
    r.which = which;
    const OrbitData o = orbit_roots(sys, params, pp);
    const LimitCoeffs L = limit_coeffs(sys, params.c, params.lambda, pp, which);
    if (which == Limit::Harmonic) {
        const double e = params.mu - pp.mu_0, se = std::sqrt(e);
        r.eps = e;
        r.v2 = std::abs(o.v2 - (pp.v_0 - L.a * se + L.b * e));
        r.v3 = std::abs(o.v3 - (pp.v_0 + L.a * se + L.b * e));
        r.m = std::abs(o.m - (pp.v_0 + L.b * e));
        r.delta = std::abs(o.delta - L.a * se);
    } else {
        const double e = pp.mu_s - params.mu, se = std::sqrt(e);
        r.eps = e;
        r.v2 = std::abs(o.v2 - (pp.v_s + L.a * se + L.b * e));
        if (o.v1) r.v1 = std::abs(*o.v1 - (pp.v_s - L.a * se + L.b * e));
        r.v3 = std::abs(o.v3 - (pp.v_sup - *L.p * e));
    }
    return r;
}

namespace {

// Bisection in log(eps) for a quantity monotone in eps.
template <class F>
double log_bisect(F&& fn, double target, double lo, double hi, bool increasing) {
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        const bool above = fn(mid) > target;
        if (above == increasing) hi = mid; else lo = mid;
        if (hi / lo - 1.0 < 1e-15) break;
    }
    return std::sqrt(lo * hi);
}

double floor_eps(const PhasePortrait& pp) {
    return 1e-15 * std::max({1.0, std::abs(pp.mu_0), std::abs(pp.mu_s)});
}

}  // namespace

double mu_for_delta(const SystemSpec& sys, const PhasePortrait& pp, double delta) {
    const double span = pp.mu_s - pp.mu_0;
    auto fn = [&](double e) {
        const Params p{pp.mu_0 + e, pp.lambda, pp.c};
        try {
            return orbit_roots(sys, p, pp).delta;
        } catch (const WaveError&) {
            return 0.0;
        }
    };
    return pp.mu_0 + log_bisect(fn, delta, floor_eps(pp), span * (1 - 1e-12), true);
}

double mu_for_rho(const SystemSpec& sys, const PhasePortrait& pp, double rho) {
    const double span = pp.mu_s - pp.mu_0;
    auto fn = [&](double e) {
        const Params p{pp.mu_s - e, pp.lambda, pp.c};
        try {
            const OrbitData o = orbit_roots(sys, p, pp);
            return o.v1 ? o.rho : INFINITY;
        } catch (const WaveError&) {
            return 0.0;
        }
    };
    return pp.mu_s - log_bisect(fn, rho, floor_eps(pp), span * (1 - 1e-12), true);
}

}  // namespace wavestab
