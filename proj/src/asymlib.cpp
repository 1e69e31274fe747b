#include "wavestab/asymlib.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gauss.hpp"
#include "roots.hpp"
#include "wavestab/quadrature.hpp"

namespace wavestab {

double RootExpansion::z(double eps, int sign) const {
    const double s = sign > 0 ? 1.0 : -1.0;
    return s * std::sqrt(2.0 * eps / alpha) - beta * eps / (3.0 * alpha * alpha) +
           s * eta * std::pow(eps, 1.5);
}

double RootExpansion::dz(double eps, int sign) const {
    const double s = sign > 0 ? 1.0 : -1.0;
    return s / std::sqrt(2.0 * alpha * eps) - beta / (3.0 * alpha * alpha) +
           s * 1.5 * eta * std::sqrt(eps);
}

RootExpansion root_coeffs(const Poly& W) {
    RootExpansion r;
    r.alpha = W.deriv(0.0, 2);
    r.beta = W.deriv(0.0, 3);
    r.gamma = W.deriv(0.0, 4);
    if (!(r.alpha > 0.0)) throw WaveError(ErrorCode::NonpositiveAlpha, "W''(0) must be positive");
    r.eta = ((5.0 / 3.0) * r.beta * r.beta - r.alpha * r.gamma) /
            (6.0 * r.alpha * r.alpha * r.alpha * std::sqrt(2.0 * r.alpha));
    return r;
}

double exact_root(const Poly& W, double eps, int sign) {
    const double a = W.deriv(0.0, 2);
    double far = (sign > 0 ? 1.0 : -1.0) * 2.0 * std::sqrt(2.0 * eps / a);
    auto fn = [&](double z) { return W(z) - eps; };
    auto dfn = [&](double z) { return W.deriv(z, 1); };
    for (int i = 0; i < 60 && fn(far) < 0.0; ++i) far *= 1.5;
    return detail::solve_bracket(fn, dfn, 0.0, far);
}

double LogSeries::eval(double rho) const {
    const double L = std::log(rho);
    double acc = inv / rho, pk = 1.0;
    for (size_t k = 0; k < std::max(a.size(), b.size()); ++k) {
        if (k < a.size()) acc += a[k] * pk * L;
        if (k < b.size()) acc += b[k] * pk;
        pk *= rho;
    }
    return acc;
}

namespace {

constexpr double kSplit = 0.5;

double adapt(const std::function<double(double)>& f, double a, double b) {
    auto w = [&](double x, double* out) { out[0] = f(x); };
    return detail::integrate(w, a, b, 1, 1e-15, 14, -1).value[0];
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

double integrate01(const std::function<double(double, double)>& phi, bool inv_sqrt_endpoint) {
    auto plain = [&](double x) { return phi(x, 0.0); };
    double left = adapt(plain, 0.0, kSplit);
    double right;
    if (inv_sqrt_endpoint) {
        right = adapt([&](double s) { return 2.0 * phi(1.0 - s * s, s); }, 0.0,
                      std::sqrt(1.0 - kSplit));
    } else {
        right = adapt(plain, kSplit, 1.0);
    }
    return left + right;
}

double dd_at_zero(const SmoothFn& g, int k, double x, double sw) {
    if (k == 0) return g.scaled(x, sw);
    if (x < kSplit) {
        // Taylor remainder form: int_0^1 (1-s)^{k-1}/(k-1)! g^{(k)}(s x) ds
        const auto& r = detail::tensor_rule();
        double acc = 0.0;
        for (size_t i = 0; i < r.x.size(); ++i) {
            const double s = 0.5 * (r.x[i] + 1.0);
            acc += 0.5 * r.w[i] * std::pow(1.0 - s, k - 1) * g.d(s * x, k);
        }
        return (sw > 0.0 ? sw : 1.0) * acc / factorial(k - 1);
    }
    const double w = sw > 0.0 ? sw : 1.0;
    double t = g.scaled(x, sw), xp = 1.0;
    for (int j = 0; j < k; ++j) {
        t -= w * g.d(0.0, j) * xp / factorial(j);
        xp *= x;
    }
    return t / xp;
}

LogSeries G_expansion(const SmoothFn& g) {
    const double ln4 = std::log(4.0);
    const double g0 = g.d(0.0, 0), g1 = g.d(0.0, 1), g2 = g.d(0.0, 2);
    auto I = [&](int k) {
        return integrate01([&](double x, double sw) { return dd_at_zero(g, k, x, sw); },
                           g.inv_sqrt_endpoint());
    };
    LogSeries s;
    s.a = {-g0, 0.5 * g1, -3.0 / 16.0 * g2};
    s.b = {I(1) + g0 * ln4, 0.5 * (g0 + (1.0 - ln4) * g1 - I(2)),
           (-3.0 * g0 - 6.0 * g1 + 0.5 * g2 * (-7.0 + 6.0 * ln4) + 6.0 * I(3)) / 16.0};
    return s;
}

LogSeries F_expansion(const SmoothFn& f) {
    // F' is the G-integral of x f / 2; integrate the series term by term from F(0).
    SmoothFn g{[f](double x, int k) {
                   const double lead = x * f.d(x, k);
                   return 0.5 * (k == 0 ? lead : lead + k * f.d(x, k - 1));
               },
               nullptr};
    if (f.regular) g.regular = [f](double x) { return 0.5 * x * f.regular(x); };
    const LogSeries G = G_expansion(g);
    LogSeries s;
    s.a = {0.0, 0.0, 0.0};
    s.b = {integrate01([&](double x, double sw) { return x * f.scaled(x, sw); },
                       f.inv_sqrt_endpoint()),
           0.0, 0.0};
    for (int k = 0; k < 2; ++k) {
        s.a[k + 1] = G.a[k] / (k + 1);
        s.b[k + 1] = (G.b[k] - G.a[k] / (k + 1)) / (k + 1);
    }
    return s;
}

LogSeries differentiate(const LogSeries& s) {
    // rho^k ln rho -> k rho^{k-1} ln rho + rho^{k-1}
    LogSeries d;
    const size_t K = std::max(s.a.size(), s.b.size());
    d.inv = s.a.empty() ? 0.0 : s.a[0];
    d.a.assign(K - 1, 0.0);
    d.b.assign(K - 1, 0.0);
    for (size_t k = 1; k < K; ++k) {
        const double ak = k < s.a.size() ? s.a[k] : 0.0;
        const double bk = k < s.b.size() ? s.b[k] : 0.0;
        d.a[k - 1] = k * ak;
        d.b[k - 1] = k * bk + ak;
    }
    return d;
}

LogSeries H_expansion(const SmoothFn& h) {
    SmoothFn g{[h](double x, int k) { return -2.0 * h.d(x, k); }, nullptr};
    if (h.regular) g.regular = [h](double x) { return -2.0 * h.regular(x); };
    return differentiate(G_expansion(g));
}

namespace {

// int_0^1 phi(x) w(x, rho) dx where w has the 1/sqrt(x(x+rho)) factor already removed
// through x = rho sinh^2(t/2) on [0, kSplit].
double singular_integral(const SmoothFn& g, double rho,
                         const std::function<double(double x)>& extra) {
    const double T = 2.0 * std::asinh(std::sqrt(kSplit / rho));
    const double left = adapt(
        [&](double t) {
            const double sh = std::sinh(0.5 * t);
            const double x = rho * sh * sh;
            return g(x) * extra(x);
        },
        0.0, T);
    auto outer = [&](double x, double sw) {
        return g.scaled(x, sw) * extra(x) / std::sqrt(x * (x + rho));
    };
    double right;
    if (g.inv_sqrt_endpoint()) {
        right = adapt([&](double s) { return 2.0 * outer(1.0 - s * s, s); }, 0.0,
                      std::sqrt(1.0 - kSplit));
    } else {
        right = adapt([&](double x) { return outer(x, 0.0); }, kSplit, 1.0);
    }
    return left + right;
}

}  // namespace

double G_numeric(const SmoothFn& g, double rho) {
    return singular_integral(g, rho, [](double) { return 1.0; });
}

double F_numeric(const SmoothFn& f, double rho) {
    return singular_integral(f, rho, [rho](double x) { return x * (x + rho); });
}

double H_numeric(const SmoothFn& h, double rho) {
    return singular_integral(h, rho, [rho](double x) { return 1.0 / (x + rho); });
}

double symmetry_check_R(const SystemSpec& sys, double c, const std::vector<double>& lambda,
                        const std::vector<std::array<double, 3>>& triples) {
    double worst = 0.0;
    for (auto t : triples) {
        const double ref = reduced_R(sys, t[0], t[1], t[2], c, lambda);
        std::sort(t.begin(), t.end());
        do {
            worst = std::max(worst, std::abs(reduced_R(sys, t[0], t[1], t[2], c, lambda) - ref));
        } while (std::next_permutation(t.begin(), t.end()));
    }
    return worst;
}

}  // namespace wavestab
