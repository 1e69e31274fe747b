#pragma once

#include <optional>
#include <vector>

#include "wavestab/algebra.hpp"
#include "wavestab/quadrature.hpp"
#include "wavestab/stability.hpp"

namespace wavestab {

enum class Limit { Harmonic, Soliton };

struct LimitCoeffs {
    double a = 0.0, b = 0.0, cc = 0.0;
    std::optional<double> p;  // soliton only
    Limit which = Limit::Harmonic;
};

LimitCoeffs limit_coeffs(const SystemSpec& sys, double c, const std::vector<double>& lambda,
                         const PhasePortrait& pp, Limit which);

// Log-derivatives of Y(v,w,z) = sqrt(2 kappa(v) / |R(v,w,z)|) at coincident nodes.
struct YDerivs {
    double Y = 0.0;
    double v = 0.0, z = 0.0;           // Y_v / Y, Y_z / Y
    double vv = 0.0, zz = 0.0, wz = 0.0;  // second partials over Y
};
YDerivs y_derivs(const SystemSpec& sys, double v, double c, const std::vector<double>& lambda);

struct AsymFrame {
    Limit which = Limit::Harmonic;
    LimitCoeffs coeffs;
    Frame vec;
    std::optional<Vec> Vsup;
    std::optional<Vec> S;
    double alpha = 0.0;
    double alpha_closed = 0.0;  // harmonic closed form in a, b, c and kappa
    double beta = 0.0;
    std::optional<double> Xi0;
    double Y = 0.0;
    // Harmonic: full prediction. Soliton: the ln(rho) block (includes the factor Y).
    Mat predicted_H;
    // Soliton: Y * 2 a^2 / h^2 * V V, multiplies (1 + rho) / rho^2.
    Mat leading;
    double h_s = 0.0;
    std::optional<double> M2;
};

AsymFrame frame_vectors(const SystemSpec& sys, double c, const std::vector<double>& lambda,
                        const PhasePortrait& pp, Limit which);

AsymFrame harmonic_hessian_prediction(const SystemSpec& sys, double c,
                                      const std::vector<double>& lambda, const PhasePortrait& pp);

// with_M2 fills the M'' slot from the momentum module (finite-difference oracle preferred).
AsymFrame soliton_hessian_prediction(const SystemSpec& sys, double c,
                                     const std::vector<double>& lambda, const PhasePortrait& pp,
                                     bool with_M2 = true);

// Predicted soliton Hessian truncated after the ln(rho) block.
Mat soliton_singular_part(const AsymFrame& f, double rho);

struct HessianComparison {
    Limit which = Limit::Harmonic;
    double small = 0.0;  // delta or rho
    Mat H_num, H_pred;
    double rel_residual = 0.0;  // harmonic, spectral norm
    // soliton
    Mat residual;
    double E_res_E = 0.0;
    double leading_ratio = 0.0;  // d2mu rho^2 / (Y 2 a^2 / h^2 (1 + rho))
    double SHS = 0.0;
    double M2 = 0.0;
    double SHS_error = 0.0;
    HessianReport report;
};

HessianComparison compare_hessian(const SystemSpec& sys, const Params& params, Limit which);

struct Sigma0 {
    Mat Sigma;
    std::vector<int> signs;
    int n = 0;
    double alpha0 = 0.0;
};

Sigma0 sigma0_sequence(const SystemSpec& sys, double c, const std::vector<double>& lambda,
                       const PhasePortrait& pp);

struct RootExpansionResiduals {
    Limit which = Limit::Harmonic;
    double eps = 0.0;  // mu - mu_0 or mu_s - mu
    double v2 = 0.0, v3 = 0.0;
    std::optional<double> v1;
    double m = 0.0, delta = 0.0;  // harmonic only
};

RootExpansionResiduals root_expansion_check(const SystemSpec& sys, const Params& params,
                                            const PhasePortrait& pp, Limit which);

// mu with orbit parameter delta (harmonic) or rho (soliton) equal to target, by bisection.
double mu_for_delta(const SystemSpec& sys, const PhasePortrait& pp, double delta);
double mu_for_rho(const SystemSpec& sys, const PhasePortrait& pp, double rho);

}  // namespace wavestab
