// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "instances.hpp"
#include "wavestab/algebra.hpp"
#include "wavestab/asymlib.hpp"
#include "wavestab/asymptotics.hpp"
#include "wavestab/constant_states.hpp"
#include "wavestab/errors.hpp"
#include "wavestab/stability.hpp"

using namespace wavestab;
using namespace wavestab::testing;

namespace {

constexpr double kPi = std::numbers::pi;
int failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::printf("AC%-2d %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string num(double x) {
    char b[32];
    std::snprintf(b, sizeof b, "%.4g", x);
    return b;
}

// Runs one criterion; an exception is a failure with its message.
void criterion(int id, const std::function<bool(std::string&)>& body) {
    std::string detail;
    try {
        report(id, body(detail), detail);
    } catch (const std::exception& e) {
        report(id, false, std::string("exception: ") + e.what());
    }
}

struct Instance {
    std::string name;
    SystemSpec sys;
    double c;
    std::vector<double> lambda;
    PhasePortrait pp;
};

Instance make_kdv() {
    Instance in{"cubic N=1", kdv(), 0.0, kKdvLambda, {}};
    in.pp = classify_portrait(in.sys, in.c, in.lambda);
    return in;
}

Instance make_ek() {
    Instance in{"Euler-Korteweg N=2", ek(), kEkSpeed, {}, {}};
    in.lambda = params_for_state(in.sys, -1.0, 0.0, in.c).lambda;
    in.pp = classify_portrait(in.sys, in.c, in.lambda);
    return in;
}

Params at(const Instance& in, double mu) { return Params{mu, in.lambda, in.c}; }

ConstantState center_state(const Instance& in) {
    ConstantState s{in.pp.v_0, std::nullopt};
    if (in.sys.N == 2) s.u = eval_g(in.sys, in.pp.v_0, in.c, in.lambda[1], 0)[0];
    return s;
}

}  // namespace

int main() {
    const Instance K = make_kdv();
    const Instance E = make_ek();
    const std::vector<const Instance*> both{&K, &E};

    // 3x3 grid around the cubic instance
    std::vector<Params> grid;
    for (double mu : {-0.1, 0.0, 0.1})
        for (double c : {-0.05, 0.0, 0.05}) grid.push_back(Params{mu, kKdvLambda, c});

    criterion(1, [&](std::string& d) {
        double worst = 0.0;
        for (const Params& p : grid) {
            const ActionGradient ag = evaluate_action(K.sys, p).ag;
            const Vec x = p.to_vec();
            for (int i = 0; i < x.size(); ++i) {
                const double h = 1e-5 * std::max(1.0, std::abs(x[i]));
                Vec xp = x, xm = x;
                xp[i] += h;
                xm[i] -= h;
                const double fd = (evaluate_action(K.sys, Params::from_vec(xp)).ag.theta -
                                   evaluate_action(K.sys, Params::from_vec(xm)).ag.theta) / (2 * h);
                worst = std::max(worst, rel(ag.grad[i], fd));
            }
        }
        d = "max rel |grad - FD| = " + num(worst) + " (tol 1e-6)";
        return worst <= 1e-6;
    });

    criterion(2, [&](std::string& d) {
        double worst = 0.0;
        for (const Params& p : grid) {
            const ActionGradient ag = evaluate_action(K.sys, p).ag;
            worst = std::max(worst, rel(ag.grad[0], ag.period));
        }
        d = "max rel |d_mu Theta - period| = " + num(worst) + " (tol 1e-7)";
        return worst <= 1e-7;
    });

    criterion(3, [&](std::string& d) {
        const double Xi0 = *harmonic_hessian_prediction(K.sys, K.c, K.lambda, K.pp).Xi0;
        double lo = 1e300, hi = 0.0;
        for (double e : {1e-2, 1e-3, 1e-4, 1e-5}) {
            const double q = std::abs(evaluate_action(K.sys, at(K, K.pp.mu_0 + e)).ag.period - Xi0) / e;
            lo = std::min(lo, q);
            hi = std::max(hi, q);
        }
        // Richardson on the linear term
        const double e = 1e-5;
        const double x1 = evaluate_action(K.sys, at(K, K.pp.mu_0 + e)).ag.period;
        const double x2 = evaluate_action(K.sys, at(K, K.pp.mu_0 + 2 * e)).ag.period;
        const double extrap = 2 * x1 - x2;
        d = "|Xi-Xi0|/eps in [" + num(lo) + ", " + num(hi) + "], extrapolated Xi0 - 2pi = " +
            num(extrap - 2 * kPi);
        return hi < 10.0 && hi / lo < 1.5 && std::abs(extrap - 2 * kPi) <= 1e-8 &&
               std::abs(Xi0 - 2 * kPi) <= 1e-12;
    });

    criterion(4, [&](std::string& d) {
        const double e = 1e-3;
        const double th = evaluate_action(K.sys, at(K, K.pp.mu_0 + e)).ag.theta;
        const double r = rel(th / e, 2 * kPi);
        d = "rel |Theta/eps - Xi0| = " + num(r) + " at eps = 1e-3 (tol 1e-2)";
        return r <= 1e-2;
    });

    criterion(5, [&](std::string& d) {
        bool ok = true;
        for (const Instance* in : both) {
            std::string seq;
            double prev = 0.0;
            for (double delta : {2e-2, 1e-2, 5e-3, 2.5e-3, 1.25e-3}) {
                const double mu = mu_for_delta(in->sys, in->pp, delta);
                const double r = compare_hessian(in->sys, at(*in, mu), Limit::Harmonic).rel_residual;
                if (prev > 0.0) {
                    const double q = r / prev;
                    char b[24];
                    std::snprintf(b, sizeof b, " %.6f", q);
                    seq += b;
                    ok = ok && q >= 0.25 && q <= 0.75;
                }
                prev = r;
            }
            d += in->name + " ratios" + seq + ";  ";
        }
        d += "required in [0.25, 0.75]";
        return ok;
    });

    criterion(6, [&](std::string& d) {
        bool ok = true;
        for (const Instance* in : both) {
            const int N = in->sys.N;
            const Sigma0 s0 = sigma0_sequence(in->sys, in->c, in->lambda, in->pp);
            std::vector<int> expect{1, s0.alpha0 > 0 ? 1 : -1, -1, -1};
            if (N == 2) expect.push_back(1);
            const AsymFrame fr = frame_vectors(in->sys, in->c, in->lambda, in->pp, Limit::Harmonic);
            const Mat P = basis_P(fr.vec, build_S(in->sys), N);
            for (double delta : {1e-2, 1e-3}) {
                const double mu = mu_for_delta(in->sys, in->pp, delta);
                const HessianReport r = stability_verdict(in->sys, at(*in, mu));
                const std::vector<int> got = leading_minor_signs(congruence(P, r.H));
                const bool good = r.signature == N && r.verdict == Verdict::CoPeriodicOrbitallyStable &&
                                  got == expect && s0.signs == expect;
                ok = ok && good;
                d += in->name + " delta=" + num(delta) + " n=" + std::to_string(r.signature) + " " +
                     to_string(r.verdict) + (good ? "" : " (mismatch)") + "; ";
            }
        }
        return ok;
    });

    criterion(7, [&](std::string& d) {
        const double M = boussinesq_momentum(K.sys, K.c, K.lambda, K.pp);
        const LimitCoeffs L = limit_coeffs(K.sys, K.c, K.lambda, K.pp, Limit::Soliton);
        const double e = 1e-6;
        const double th = evaluate_action(K.sys, at(K, K.pp.mu_s - e)).ag.theta;
        const double res = std::abs(th - L.a * std::sqrt(K.sys.kappa(K.pp.v_s) / 2) * e * std::log(e) - M);
        d = "|M - 24/5| = " + num(std::abs(M - 4.8)) + ", corrected residual at 1e-6 = " + num(res);
        return std::abs(M - 4.8) <= 1e-9 && res <= 1e-4;
    });

    criterion(8, [&](std::string& d) {
        bool ok = true;
        for (const Instance* in : both) {
            const double mu = mu_for_rho(in->sys, in->pp, 1e-3);
            const double q = compare_hessian(in->sys, at(*in, mu), Limit::Soliton).leading_ratio;
            ok = ok && std::abs(q - 1.0) <= 0.02;
            d += in->name + " ratio " + num(q) + "; ";
        }
        return ok;
    });

    criterion(9, [&](std::string& d) {
        bool ok = true;
        for (const Instance* in : both) {
            const MomentumReport m = momentum_derivatives(
                in->sys, in->c, EndState{in->pp.v_s, in->sys.N == 2 ? std::optional<double>(0.0) : std::nullopt});
            const double agree = rel(*m.d2M_integral, *m.d2M_fd);
            double prev = 1e300, last = 0.0;
            bool dec = true;
            for (double rho : {1e-1, 1e-2, 1e-3}) {
                const double mu = mu_for_rho(in->sys, in->pp, rho);
                const HessianComparison hc = compare_hessian(in->sys, at(*in, mu), Limit::Soliton);
                last = std::abs(hc.SHS - *m.d2M_fd);
                dec = dec && last < prev;
                prev = last;
            }
            const bool good = dec && last <= 0.05 * std::abs(*m.d2M_fd) && agree <= 1e-4;
            ok = ok && good;
            d += in->name + " M''=" + num(*m.d2M_fd) + " |SHS-M''|@1e-3=" + num(last) +
                 (dec ? " decreasing" : " NOT decreasing") + " int/fd rel " + num(agree) + "; ";
        }
        return ok;
    });

    criterion(10, [&](std::string& d) {
        // cubic instance: positive curvature, n = N near the soliton end
        const double mu = mu_for_rho(K.sys, K.pp, 1e-3);
        const HessianReport rk = stability_verdict(K.sys, at(K, mu));
        bool ok = rk.signature == 1 && rk.verdict == Verdict::CoPeriodicOrbitallyStable;
        d = "cubic n=" + std::to_string(rk.signature) + "; ";

        // quartic family: walk c down until the oracle curvature is clearly negative
        const SystemSpec q = ek(-0.02);
        double seen = 0.0;
        std::optional<double> found;
        double M2 = 0.0;
        for (int k = 9; k >= 1 && !found; --k) {
            const double c = 0.1 * k;
            try {
                const MomentumReport m = momentum_derivatives(q, c, EndState{-1.0, 0.0}, MomentumMethod::FiniteDifference);
                seen = std::max(seen, std::abs(*m.d2M_fd));
                if (*m.d2M_fd < -0.1 * seen) {
                    found = c;
                    M2 = *m.d2M_fd;
                }
            } catch (const WaveError&) {
            }
        }
        if (!found) {
            d += "no negative-curvature point found";
            return false;
        }
        const Params p = params_for_state(q, -1.0, 0.0, *found);
        const PhasePortrait pp = classify_portrait(q, *found, p.lambda);
        d += "quartic c=" + num(*found) + " M''=" + num(M2);
        for (double rho : {1e-2, 1e-3}) {
            const HessianReport r = stability_verdict(q, Params{mu_for_rho(q, pp, rho), p.lambda, *found});
            ok = ok && r.signature == 3 && r.verdict == Verdict::SpectrallyUnstable;
            d += " rho=" + num(rho) + ": n=" + std::to_string(r.signature) + " " + to_string(r.verdict);
        }
        return ok;
    });

    criterion(11, [&](std::string& d) {
        std::mt19937 rng(2024);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double worst = 0.0;
        int systems = 0, tries = 0;
        while (systems < 20 && tries < 2000) {
            ++tries;
            SystemSpec s;
            s.N = u(rng) < 0 ? 1 : 2;
            s.b = (u(rng) < 0 ? -1.0 : 1.0) * (1.0 + 0.5 * std::abs(u(rng)));
            s.f = Poly({0.0, 0.0, 0.3 * u(rng), -(0.5 + 0.5 * std::abs(u(rng))) / 6.0, 0.01 * u(rng)});
            s.kappa = Poly({1.0 + 0.5 * std::abs(u(rng)), 0.05 * u(rng)});
            s.tau = Poly({1.0 + 0.5 * std::abs(u(rng)), 0.05 * u(rng)});
            s.lo = -6;
            s.hi = 6;
            const double c = 0.5 * u(rng);
            try {
                s.validate();
                const Params p = params_for_state(s, -1.0 + 0.3 * u(rng), s.N == 2 ? std::optional<double>(0.3 * u(rng)) : std::nullopt, c);
                const PhasePortrait pp = classify_portrait(s, c, p.lambda);
                for (Limit l : {Limit::Harmonic, Limit::Soliton}) {
                    const AsymFrame f = frame_vectors(s, c, p.lambda, pp, l);
                    worst = std::max(worst, verify_orthogonality(f.vec, build_S(s)).max);
                }
                ++systems;
            } catch (const WaveError&) {
            }
        }
        d = std::to_string(systems) + " systems, max residual " + num(worst) + " (tol 1e-12)";
        return systems == 20 && worst <= 1e-12;
    });

    criterion(12, [&](std::string& d) {
        std::mt19937 rng(99);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        std::vector<std::array<double, 3>> tr(100);
        for (auto& t : tr) t = {u(rng), u(rng), u(rng)};
        const double rk = symmetry_check_R(K.sys, K.c, K.lambda, tr);
        const double re = symmetry_check_R(E.sys, E.c, E.lambda, tr);
        d = "residuals " + num(rk) + ", " + num(re) + " (tol 1e-12)";
        return rk <= 1e-12 && re <= 1e-12;
    });

    criterion(13, [&](std::string& d) {
        const SmoothFn one{[](double, int k) { return k == 0 ? 1.0 : 0.0; }, nullptr};
        const SmoothFn lin{[](double x, int k) { return k == 0 ? x : (k == 1 ? 1.0 : 0.0); }, nullptr};
        const double l4 = std::log(4.0);
        const LogSeries g1 = G_expansion(one), gx = G_expansion(lin);
        const std::vector<double> want1{-1.0, 0.0, 0.0, l4, 0.5, -3.0 / 16};
        const std::vector<double> wantx{0.0, 0.5, 0.0, 1.0, 0.5 - l4 / 2, -3.0 / 8};
        const std::vector<double> got1{g1.a[0], g1.a[1], g1.a[2], g1.b[0], g1.b[1], g1.b[2]};
        const std::vector<double> gotx{gx.a[0], gx.a[1], gx.a[2], gx.b[0], gx.b[1], gx.b[2]};
        double coef = 0.0;
        for (int i = 0; i < 6; ++i)
            coef = std::max({coef, std::abs(got1[i] - want1[i]), std::abs(gotx[i] - wantx[i])});
        double C = 0.0;
        for (const LogSeries* s : {&g1, &gx})
            for (double rho = 1e-1; rho >= 0.99e-4; rho /= std::sqrt(10.0)) {
                const double e = std::abs(G_numeric(s == &g1 ? one : lin, rho) - s->eval(rho));
                C = std::max(C, e / (rho * rho * rho * std::abs(std::log(rho))));
            }
        double hw = 0.0;
        for (double rho : {1e-1, 1e-2, 1e-3, 1e-4}) {
            const double exact = 2.0 / rho - 2.0 / (1.0 + rho + std::sqrt(1.0 + rho));
            hw = std::max(hw, rel(H_numeric(one, rho), exact));
        }
        const Poly W({0.0, 0.0, 0.5, 1.0 / 6.0});
        const RootExpansion re = root_coeffs(W);
        double lo = 1e300, hi = 0.0;
        for (double e : {1e-2, 1e-3, 1e-4, 1e-5})
            for (int sg : {1, -1}) {
                const double q = std::abs(exact_root(W, e, sg) - re.z(e, sg)) / (e * e);
                lo = std::min(lo, q);
                hi = std::max(hi, q);
            }
        d = "coef err " + num(coef) + ", max G err/(rho^3|ln rho|) " + num(C) + ", H rel err " + num(hw) +
            ", root err/eps^2 in [" + num(lo) + ", " + num(hi) + "]";
        return coef <= 1e-12 && C <= 1.0 && hw <= 1e-12 && hi <= 1.0 && hi / lo < 3.0;
    });

    criterion(14, [&](std::string& d) {
        bool ok = true;
        for (const Instance* in : both) {
            const ConstantState st = center_state(*in);
            const ConstantStateReport r = coperiodic_threshold(in->sys, st, in->c, in->lambda);
            const double Xi0 = *harmonic_hessian_prediction(in->sys, in->c, in->lambda, in->pp).Xi0;
            bool iff = true;
            for (double f : {0.2, 0.5, 0.9, 0.999, 1.0, 1.001, 1.1, 2.0, 5.0})
                iff = iff && coperiodic_stable(in->sys, st, in->c, f * *r.Xi_star, 64) == (f <= 1.0);
            const bool good = r.Xi_star && std::abs(*r.Xi_star - Xi0) <= 1e-10 && iff &&
                              r.kernel_dim_at_Xi_star == 2;
            ok = ok && good;
            d += in->name + " |Xi*-Xi0|=" + num(std::abs(*r.Xi_star - Xi0)) + " kernel " +
                 std::to_string(r.kernel_dim_at_Xi_star) + (iff ? "" : " iff violated") + "; ";
        }
        return ok;
    });

    criterion(15, [&](std::string& d) {
        bool ok = true;
        for (const Instance* in : both) {
            const int N = in->sys.N;
            const double dh = stability_verdict(in->sys, at(*in, mu_for_delta(in->sys, in->pp, 1e-2))).det;
            const double ds = stability_verdict(in->sys, at(*in, mu_for_rho(in->sys, in->pp, 1e-3))).det;
            const MomentumReport m = momentum_derivatives(
                in->sys, in->c, EndState{in->pp.v_s, N == 2 ? std::optional<double>(0.0) : std::nullopt},
                MomentumMethod::FiniteDifference);
            const bool h_ok = N == 1 ? dh < 0 : dh > 0;
            const double sgn = (*m.d2M_fd * ds > 0) ? 1.0 : -1.0;
            const bool s_ok = N == 1 ? sgn < 0 : sgn > 0;
            ok = ok && h_ok && s_ok;
            d += in->name + " det_harm " + num(dh) + ", sign(M''det_sol) " + num(sgn) + "; ";
        }
        return ok;
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
