#include "wavestab/stability.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace wavestab {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::CoPeriodicOrbitallyStable: return "CoPeriodicOrbitallyStable";
        case Verdict::SpectrallyUnstable: return "SpectrallyUnstable";
        case Verdict::Inconclusive: return "Inconclusive";
        case Verdict::Degenerate: return "Degenerate";
    }
    return "?";
}

namespace {

// Largest step along coordinate i that keeps a quantity with gradient G and
// current value gap positive by a margin.
double gap_cap(double gap, double Gi, double frac) {
    if (Gi == 0.0) return INFINITY;
    return frac * gap / std::abs(Gi);
}

}  // namespace

HessianResult hessian_action(const SystemSpec& sys, const Params& params,
                             const HessianOptions& hopts) {
    HessianResult out;
    out.base = evaluate_action(sys, params);
    const int d = sys.dim();
    const Vec p = params.to_vec();
    const auto& pp = out.base.portrait;

    QuadOptions q;
    q.fixed_level = std::min(out.base.ag.level + 1, 16);
    q.force_route = static_cast<int>(out.base.ag.route);

    // mu - mu_0 and mu_s - mu have parameter gradients V_0 and -V_s
    const Vec V0 = grad_Z(sys, pp.v_0, pp.c, pp.lambda).V;
    const Vec Vs = grad_Z(sys, pp.v_s, pp.c, pp.lambda).V;
    const double gap0 = params.mu - pp.mu_0;
    const double gaps = pp.mu_s - params.mu;

    Vec h(d);
    for (int i = 0; i < d; ++i) {
        double hi = std::max(1e-5, 1e-4 * std::abs(p[i]));
        hi = std::min(hi, gap_cap(gap0, V0[i], hopts.harmonic_step_fraction));
        hi = std::min(hi, gap_cap(gaps, Vs[i], hopts.soliton_step_fraction));
        h[i] = hi;
    }

    auto grad_at = [&](const Vec& x) {
        const Params px = Params::from_vec(x);
        return evaluate_action(sys, px, q).ag.grad;
    };

    for (int attempt = 0; attempt <= 5; ++attempt) {
        Mat A(d, d);
        bool failed = false;
        for (int i = 0; i < d && !failed; ++i) {
            Vec xp = p, xm = p;
            xp[i] += h[i];
            xm[i] -= h[i];
            try {
                A.col(i) = (grad_at(xp) - grad_at(xm)) / (2.0 * h[i]);
            } catch (const WaveError&) {
                failed = true;
            }
        }
        if (!failed) {
            const double nrm = A.norm();
            out.asymmetry = nrm > 0 ? (A - A.transpose()).norm() / nrm : 0.0;
            out.H = 0.5 * (A + A.transpose());
            out.steps = h;
            if (out.asymmetry < hopts.max_asymmetry) return out;
        }
        h *= 0.5;
    }
    if (out.H.size() == 0)
        throw WaveError(ErrorCode::PerturbationLeavesWindow,
                        "parameter perturbation leaves the orbit window");
    return out;  // asymmetry stays above threshold; caller sees it
}

std::vector<int> leading_minor_signs(const Mat& H, double rel_tol) {
    const int n = static_cast<int>(H.rows());
    const double scale = std::max(H.cwiseAbs().maxCoeff(), 1e-300);
    std::vector<int> s{1};
    for (int k = 1; k <= n; ++k) {
        const double D = H.topLeftCorner(k, k).determinant();
        if (std::abs(D) <= rel_tol * std::pow(scale, k)) return {};
        s.push_back(D > 0 ? 1 : -1);
    }
    return s;
}

int sign_changes(const std::vector<int>& s) {
    int n = 0;
    for (size_t i = 1; i < s.size(); ++i)
        if (s[i] != s[i - 1]) ++n;
    return n;
}

SignatureResult negative_signature(const Mat& H, double tol_eig) {
    SignatureResult r;
    Eigen::SelfAdjointEigenSolver<Mat> es(H, Eigen::EigenvaluesOnly);
    r.eigenvalues = es.eigenvalues();
    Vec counted = r.eigenvalues;
    if (tol_eig >= 0) {
        r.tol = tol_eig;
    } else {
        // Diagonal equilibration is a congruence, so inertia is unchanged; it keeps
        // the O(1) directions visible next to a 1/rho^2 one.
        const double dmax = H.diagonal().cwiseAbs().maxCoeff();
        Vec d(H.rows());
        for (int i = 0; i < d.size(); ++i)
            d[i] = 1.0 / std::sqrt(std::max(std::abs(H(i, i)), 1e-12 * dmax + 1e-300));
        const Mat Hs = d.asDiagonal() * H * d.asDiagonal();
        Eigen::SelfAdjointEigenSolver<Mat> ss(Hs, Eigen::EigenvaluesOnly);
        counted = ss.eigenvalues();
        r.tol = 1e-7 * counted.cwiseAbs().maxCoeff();
    }
    for (int i = 0; i < counted.size(); ++i) {
        if (counted[i] < -r.tol) ++r.n;
        if (std::abs(counted[i]) <= r.tol) r.degenerate = true;
    }
    r.minor_signs = leading_minor_signs(H);
    if (!r.minor_signs.empty()) r.sylvester_n = sign_changes(r.minor_signs);
    return r;
}

Verdict verdict_from(int n, int N, bool degenerate) {
    if (degenerate) return Verdict::Degenerate;
    const int k = n - N;
    if (k == 0) return Verdict::CoPeriodicOrbitallyStable;
    if (k % 2 != 0) return Verdict::SpectrallyUnstable;
    return Verdict::Inconclusive;
}

HessianReport stability_verdict(const SystemSpec& sys, const Params& params,
                                const HessianOptions& opts) {
    HessianResult hr = hessian_action(sys, params, opts);
    HessianReport rep;
    rep.H = hr.H;
    rep.d2mu = hr.H(0, 0);
    rep.det = hr.H.determinant();
    rep.sig = negative_signature(hr.H);
    rep.signature = rep.sig.n;
    rep.eigenvalues = rep.sig.eigenvalues;
    rep.step_used = hr.steps;
    rep.asymmetry = hr.asymmetry;
    rep.base = hr.base;
    const double scale = rep.eigenvalues.cwiseAbs().maxCoeff();
    const bool degenerate = rep.sig.degenerate || std::abs(rep.d2mu) <= 1e-7 * scale;
    rep.verdict = verdict_from(rep.signature, sys.N, degenerate);
    return rep;
}

}  // namespace wavestab
