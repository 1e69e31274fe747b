#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wavestab/errors.hpp"

namespace wavestab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Polynomial with ascending coefficients.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<double> coeffs) : c_(std::move(coeffs)) {}

    const std::vector<double>& coeffs() const { return c_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool empty() const { return c_.empty(); }

    double operator()(double v) const { return deriv(v, 0); }
    double deriv(double v, int k) const;

    // Divided difference p[x0,...,xm]; nodes may coincide.
    double divdiff(std::span<const double> nodes) const;

    Poly derivative() const;
    Poly operator*(const Poly& o) const;
    Poly operator+(const Poly& o) const;
    Poly scaled(double s) const;

private:
    std::vector<double> c_;
};

struct SystemSpec {
    int N = 1;
    double b = 1.0;
    Poly f;
    Poly kappa{std::vector<double>{1.0}};
    Poly tau{std::vector<double>{1.0}};
    double lo = -1.0;
    double hi = 1.0;

    // Throws InvalidSystem when b == 0 or kappa/tau fail positivity on the domain.
    void validate() const;
    bool in_domain(double v) const { return v >= lo && v <= hi; }
    int dim() const { return N + 2; }
};

SystemSpec system_from_json_text(const std::string& text);

// Parameter ordering everywhere: (mu, lambda_1[, lambda_2], c).
struct Params {
    double mu = 0.0;
    std::vector<double> lambda;
    double c = 0.0;

    Vec to_vec() const;
    static Params from_vec(const Vec& p);
};

struct GradZ {
    Vec V;
    Vec Wv;
    Vec Zvv;
};

// [W, W_v, ..., d^order W] at v.
std::vector<double> eval_potential(const SystemSpec& sys, double v, double c,
                                   const std::vector<double>& lambda, int order);

// [g, g_v, ...] for N = 2; order up to 4 is accepted.
std::vector<double> eval_g(const SystemSpec& sys, double v, double c, double lambda2,
                           int order);

// [q, q_v, ...]; lambda2 ignored when N = 1.
std::vector<double> eval_q(const SystemSpec& sys, double v, double c, double lambda2,
                           int order);

GradZ grad_Z(const SystemSpec& sys, double v, double c, const std::vector<double>& lambda);

// Parameter Hessian of Z at fixed v (analytic).
Mat hess_Z(const SystemSpec& sys, double v, double c, const std::vector<double>& lambda);

Vec T_vector(const SystemSpec& sys, double v);

Params params_for_state(const SystemSpec& sys, double v_star, std::optional<double> u_star,
                        double c);

// Divided differences in v of the potential and of the parameter gradient of Z.
double dd_W(const SystemSpec& sys, double c, const std::vector<double>& lambda,
            std::span<const double> nodes);
Vec dd_gradZ(const SystemSpec& sys, double c, const std::vector<double>& lambda,
             std::span<const double> nodes);

// Z = mu - W.
inline double eval_Z(const SystemSpec& sys, const Params& p, double v) {
    return p.mu - eval_potential(sys, v, p.c, p.lambda, 0)[0];
}

// Impulse Q(U) = U.B^{-1}U / 2 for U of length N.
double impulse(const SystemSpec& sys, const Vec& U);

}  // namespace wavestab
