#pragma once

#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "wavestab/model.hpp"

namespace wavestab {

// Zeros of W - eps near a nondegenerate minimum of W at 0 (W(0) = W'(0) = 0).
struct RootExpansion {
    double alpha = 0.0, beta = 0.0, gamma = 0.0, eta = 0.0;

    // Truncated expansion of z_sign(eps) and of its derivative; sign is +1 or -1.
    double z(double eps, int sign) const;
    double dz(double eps, int sign) const;
};

RootExpansion root_coeffs(const Poly& W);

// Zero of W - eps on the sign side of 0, by bracketing and Newton.
double exact_root(const Poly& W, double eps, int sign);

// Function on [0,1) with analytic derivatives to order 3. When `regular` is set the
// function is regular(x) / sqrt(1-x); quadrature near 1 then substitutes x = 1 - s^2
// and uses regular directly, so 1 - x is never formed.
struct SmoothFn {
    std::function<double(double x, int k)> d;
    std::function<double(double x)> regular;
    double operator()(double x) const { return d(x, 0); }
    bool inv_sqrt_endpoint() const { return static_cast<bool>(regular); }
    // s * g(x) with s = sqrt(1-x) supplied by the caller; s = 0 means plain g(x)
    double scaled(double x, double s) const {
        if (s <= 0.0) return d(x, 0);
        return regular ? regular(x) : s * d(x, 0);
    }
};

// sum_k (a_k rho^k ln rho + b_k rho^k) + inv / rho
struct LogSeries {
    std::vector<double> a, b;
    double inv = 0.0;
    double eval(double rho) const;
};

LogSeries G_expansion(const SmoothFn& g);
LogSeries F_expansion(const SmoothFn& f);
LogSeries H_expansion(const SmoothFn& h);

// Term-by-term derivative of a series without 1/rho term.
LogSeries differentiate(const LogSeries& s);

double G_numeric(const SmoothFn& g, double rho);
double F_numeric(const SmoothFn& f, double rho);
double H_numeric(const SmoothFn& h, double rho);

// int_0^1 phi(x) dx. On the right half with inv_sqrt_endpoint set, phi(x, s) must
// return s * phi(x) with s = sqrt(1-x); elsewhere it is called with s = 0 and returns phi(x).
double integrate01(const std::function<double(double x, double s)>& phi, bool inv_sqrt_endpoint);

// s * g[0,...,0,x] with k zeros, accurate for all x in [0,1); s as in integrate01.
double dd_at_zero(const SmoothFn& g, int k, double x, double s = 0.0);

// Largest |R(v,w,z) - R(permutation)| over the given triples.
double symmetry_check_R(const SystemSpec& sys, double c, const std::vector<double>& lambda,
                        const std::vector<std::array<double, 3>>& triples);

}  // namespace wavestab
