#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "wavestab/model.hpp"

namespace wavestab {

struct ConstantState {
    double v = 0.0;
    std::optional<double> u;  // N = 2 only
};

// Spectrum of the Fourier symbol of the linearization about a constant state, at wavenumber xi.
std::vector<std::complex<double>> dispersion_relation(const SystemSpec& sys,
                                                      const ConstantState& s, double c, double xi);

// Second variation of the Lagrangian at Fourier mode xi (1x1 or 2x2).
Mat sigma_star(const SystemSpec& sys, const ConstantState& s, double c, double xi);
// Same matrix written through W_vv; equality with sigma_star is an identity.
Mat sigma_star_via_W(const SystemSpec& sys, const ConstantState& s, double c,
                     const std::vector<double>& lambda, double xi);

struct ConstantStateReport {
    bool hyperbolic = true;
    bool spectrally_stable_localized = true;  // from a wavenumber scan
    std::optional<double> Xi_star;
    int kernel_dim_at_Xi_star = 0;
    double Wvv = 0.0;
};

ConstantStateReport coperiodic_threshold(const SystemSpec& sys, const ConstantState& s, double c,
                                         const std::vector<double>& lambda);

// Sigma_star(2 pi l / Xi) >= 0 for 1 <= |l| <= lmax.
bool coperiodic_stable(const SystemSpec& sys, const ConstantState& s, double c, double Xi,
                       int lmax = 64);

// Number of zero eigenvalues over modes 1 <= |l| <= lmax.
int coperiodic_kernel_dim(const SystemSpec& sys, const ConstantState& s, double c, double Xi,
                          int lmax = 64);

}  // namespace wavestab
