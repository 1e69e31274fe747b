#include "wavestab/constant_states.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace wavestab {

namespace {

double ustar(const SystemSpec& sys, const ConstantState& s) {
    if (sys.N == 2 && !s.u) throw WaveError(ErrorCode::Usage, "N = 2 state needs u");
    return s.u.value_or(0.0);
}

// Mode-relative tolerance for the eigenvalue tests.
double mode_tol(const Mat& M) { return 1e-10 * std::max(1.0, M.cwiseAbs().maxCoeff()); }

}  // namespace

std::vector<std::complex<double>> dispersion_relation(const SystemSpec& sys,
                                                      const ConstantState& s, double c, double xi) {
    using cd = std::complex<double>;
    const double v = s.v;
    const double f2 = sys.f.deriv(v, 2), k = sys.kappa(v);
    if (sys.N == 1) return {cd(0.0, xi * (f2 + c / sys.b + k * xi * xi))};
    const double u = ustar(sys, s);
    const double mid = c / sys.b + sys.tau.deriv(v, 1) * u;
    const double disc = sys.tau(v) * (f2 + k * xi * xi + 0.5 * sys.tau.deriv(v, 2) * u * u);
    const cd r = std::sqrt(cd(disc, 0.0));
    const cd i(0.0, 1.0);
    return {i * xi * sys.b * (mid + r), i * xi * sys.b * (mid - r)};
}

Mat sigma_star(const SystemSpec& sys, const ConstantState& s, double c, double xi) {
    const double v = s.v;
    const double f2 = sys.f.deriv(v, 2), k = sys.kappa(v);
    if (sys.N == 1) return Mat::Constant(1, 1, f2 + c / sys.b + k * xi * xi);
    const double u = ustar(sys, s);
    const double off = c / sys.b + sys.tau.deriv(v, 1) * u;
    Mat M(2, 2);
    M << f2 + k * xi * xi + 0.5 * sys.tau.deriv(v, 2) * u * u, off, off, sys.tau(v);
    return M;
}

Mat sigma_star_via_W(const SystemSpec& sys, const ConstantState& s, double c,
                     const std::vector<double>& lambda, double xi) {
    const double v = s.v;
    const double Wvv = eval_potential(sys, v, c, lambda, 2)[2];
    const double k = sys.kappa(v);
    if (sys.N == 1) return Mat::Constant(1, 1, -Wvv + k * xi * xi);
    const double u = ustar(sys, s);
    const double off = c / sys.b + sys.tau.deriv(v, 1) * u;
    const double t = sys.tau(v);
    Mat M(2, 2);
    M << -Wvv + k * xi * xi + off * off / t, off, off, t;
    return M;
}

ConstantStateReport coperiodic_threshold(const SystemSpec& sys, const ConstantState& s, double c,
                                         const std::vector<double>& lambda) {
    ConstantStateReport r;
    const double v = s.v;
    if (sys.N == 2) {
        const double u = ustar(sys, s);
        r.hyperbolic = sys.f.deriv(v, 2) + 0.5 * sys.tau.deriv(v, 2) * u * u >= 0.0;
    }
    // localized spectrum: scan xi, any real part means instability
    double worst = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double xi = 1e-3 + 0.025 * i;
        for (const auto& z : dispersion_relation(sys, s, c, xi))
            worst = std::max(worst, std::abs(z.real()));
    }
    r.spectrally_stable_localized = worst == 0.0;
    r.Wvv = eval_potential(sys, v, c, lambda, 2)[2];
    if (r.Wvv > 0.0) {
        r.Xi_star = 2.0 * std::numbers::pi * std::sqrt(sys.kappa(v) / r.Wvv);
        r.kernel_dim_at_Xi_star = coperiodic_kernel_dim(sys, s, c, *r.Xi_star);
    }
    return r;
}

bool coperiodic_stable(const SystemSpec& sys, const ConstantState& s, double c, double Xi,
                       int lmax) {
    for (int l = 1; l <= lmax; ++l) {
        const Mat M = sigma_star(sys, s, c, 2.0 * std::numbers::pi * l / Xi);
        Eigen::SelfAdjointEigenSolver<Mat> es(M, Eigen::EigenvaluesOnly);
        if (es.eigenvalues()[0] < -mode_tol(M)) return false;
    }
    return true;
}

int coperiodic_kernel_dim(const SystemSpec& sys, const ConstantState& s, double c, double Xi,
                          int lmax) {
    int dim = 0;
    for (int l = 1; l <= lmax; ++l) {
        const Mat M = sigma_star(sys, s, c, 2.0 * std::numbers::pi * l / Xi);
        Eigen::SelfAdjointEigenSolver<Mat> es(M, Eigen::EigenvaluesOnly);
        for (int i = 0; i < es.eigenvalues().size(); ++i)
            if (std::abs(es.eigenvalues()[i]) <= mode_tol(M)) dim += 2;  // modes +l and -l
    }
    return dim;
}

}  // namespace wavestab
