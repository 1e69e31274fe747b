#include "wavestab/model.hpp"

#include "json.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace wavestab {

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::Domain: return "DomainError";
    case ErrorCode::SingularSlaving: return "SingularSlaving";
    case ErrorCode::Usage: return "UsageError";
    case ErrorCode::InvalidSystem: return "InvalidSystem";
    case ErrorCode::NoSaddle: return "NoSaddle";
    case ErrorCode::NoCenter: return "NoCenter";
    case ErrorCode::NoConjugate: return "NoConjugate";
    case ErrorCode::PatternViolation: return "PatternViolation";
    case ErrorCode::MuOutOfRange: return "MuOutOfRange";
    case ErrorCode::RootBracketFailure: return "RootBracketFailure";
    case ErrorCode::AssumptionViolation: return "AssumptionViolation";
    case ErrorCode::PerturbationLeavesWindow: return "PerturbationLeavesWindow";
    case ErrorCode::DegenerateAlpha0: return "DegenerateAlpha0";
    case ErrorCode::DegenerateSlaving: return "DegenerateSlaving";
    case ErrorCode::SingularBasis: return "SingularBasis";
    case ErrorCode::NonpositiveAlpha: return "NonpositiveAlpha";
    case ErrorCode::Config: return "ConfigError";
    }
    return "Unknown";
}

double Poly::deriv(double v, int k) const {
    const int n = static_cast<int>(c_.size());
    if (k >= n) return 0.0;
    double acc = 0.0;
    for (int i = n - 1; i >= k; --i) {
        double fall = 1.0;
        for (int j = 0; j < k; ++j) fall *= static_cast<double>(i - j);
        acc = acc * v + fall * c_[i];
    }
    return acc;
}

double Poly::divdiff(std::span<const double> nodes) const {
    const int m = static_cast<int>(nodes.size()) - 1;
    const int n = degree();
    if (m < 0 || n < m) return 0.0;
    // complete homogeneous symmetric polynomials h_d(x0..xm), d = 0..n-m
    const int D = n - m;
    std::vector<double> h(D + 1);
    h[0] = 1.0;
    for (int d = 1; d <= D; ++d) h[d] = h[d - 1] * nodes[0];
    for (int j = 1; j <= m; ++j)
        for (int d = 1; d <= D; ++d) h[d] += nodes[j] * h[d - 1];
    double s = 0.0;
    for (int k = m; k <= n; ++k) s += c_[k] * h[k - m];
    return s;
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return Poly({0.0});
    std::vector<double> d(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = static_cast<double>(i) * c_[i];
    return Poly(d);
}

Poly Poly::operator*(const Poly& o) const {
    if (c_.empty() || o.c_.empty()) return Poly();
    std::vector<double> r(c_.size() + o.c_.size() - 1, 0.0);
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return Poly(r);
}

Poly Poly::operator+(const Poly& o) const {
    std::vector<double> r(std::max(c_.size(), o.c_.size()), 0.0);
    for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return Poly(r);
}

Poly Poly::scaled(double s) const {
    std::vector<double> r = c_;
    for (auto& x : r) x *= s;
    return Poly(r);
}

namespace {

void check_positive(const Poly& p, double lo, double hi, const char* name) {
    const int n = 1000;
    for (int i = 0; i <= n; ++i) {
        const double v = lo + (hi - lo) * i / n;
        if (!(p(v) > 0.0)) {
            std::ostringstream os;
            os << name << " is not positive at v=" << v;
            throw WaveError(ErrorCode::InvalidSystem, os.str());
        }
    }
}

void check_domain(const SystemSpec& sys, double v) {
    if (!sys.in_domain(v) || !std::isfinite(v)) {
        std::ostringstream os;
        os << "v=" << v << " outside domain [" << sys.lo << "," << sys.hi << "]";
        throw WaveError(ErrorCode::Domain, os.str());
    }
}

// n(v) = -((c/b) v + lambda2), the numerator of the slaving function.
Poly slaving_numerator(const SystemSpec& sys, double c, double lambda2) {
    return Poly({-lambda2, -c / sys.b});
}

// Divided-difference table of r = 1/tau: r[i][j] = r[x_i..x_j].
struct RecipTable {
    std::array<std::array<double, 6>, 6> r{};
};

RecipTable recip_table(const Poly& tau, std::span<const double> x) {
    const int m = static_cast<int>(x.size());
    std::array<std::array<double, 6>, 6> t{};
    for (int i = 0; i < m; ++i)
        for (int k = i; k < m; ++k) t[i][k] = tau.divdiff(x.subspan(i, k - i + 1));
    RecipTable out;
    for (int len = 0; len < m; ++len) {
        for (int i = 0; i + len < m; ++i) {
            const int j = i + len;
            const double ti = t[i][i];
            if (ti == 0.0) throw WaveError(ErrorCode::SingularSlaving, "tau vanishes");
            if (len == 0) {
                out.r[i][j] = 1.0 / ti;
                continue;
            }
            double s = 0.0;
            for (int k = i + 1; k <= j; ++k) s += t[i][k] * out.r[k][j];
            out.r[i][j] = -s / ti;
        }
    }
    return out;
}

// (P/tau)[x0..xm] by the Leibniz rule.
double dd_poly_over_tau(const Poly& P, const RecipTable& rt, std::span<const double> x) {
    const int m = static_cast<int>(x.size()) - 1;
    double s = 0.0;
    for (int i = 0; i <= m; ++i) s += P.divdiff(x.subspan(0, i + 1)) * rt.r[i][m];
    return s;
}

}  // namespace

void SystemSpec::validate() const {
    if (N != 1 && N != 2) throw WaveError(ErrorCode::InvalidSystem, "N must be 1 or 2");
    if (b == 0.0 || !std::isfinite(b)) throw WaveError(ErrorCode::InvalidSystem, "b must be nonzero");
    if (!(lo < hi)) throw WaveError(ErrorCode::InvalidSystem, "empty domain");
    if (f.empty()) throw WaveError(ErrorCode::InvalidSystem, "f missing");
    if (kappa.empty()) throw WaveError(ErrorCode::InvalidSystem, "kappa missing");
    check_positive(kappa, lo, hi, "kappa");
    if (N == 2) {
        if (tau.empty()) throw WaveError(ErrorCode::InvalidSystem, "tau missing");
        check_positive(tau, lo, hi, "tau");
    }
}

SystemSpec system_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw WaveError(ErrorCode::Config, std::string("malformed JSON: ") + e.what());
    }
    SystemSpec s;
    try {
        s.N = j.at("N").get<int>();
        s.b = j.at("b").get<double>();
        s.f = Poly(j.at("f").get<std::vector<double>>());
        s.kappa = Poly(j.at("kappa").get<std::vector<double>>());
        if (s.N == 2) s.tau = Poly(j.at("tau").get<std::vector<double>>());
        auto d = j.at("domain").get<std::vector<double>>();
        if (d.size() != 2) throw WaveError(ErrorCode::Config, "domain needs two entries");
        s.lo = d[0];
        s.hi = d[1];
    } catch (const nlohmann::json::exception& e) {
        throw WaveError(ErrorCode::Config, std::string("system schema: ") + e.what());
    }
    s.validate();
    return s;
}

Vec Params::to_vec() const {
    Vec p(static_cast<Eigen::Index>(lambda.size()) + 2);
    p[0] = mu;
    for (size_t i = 0; i < lambda.size(); ++i) p[static_cast<Eigen::Index>(i) + 1] = lambda[i];
    p[p.size() - 1] = c;
    return p;
}

Params Params::from_vec(const Vec& p) {
    Params r;
    r.mu = p[0];
    r.lambda.assign(p.data() + 1, p.data() + p.size() - 1);
    r.c = p[p.size() - 1];
    return r;
}

std::vector<double> eval_g(const SystemSpec& sys, double v, double c, double lambda2,
                           int order) {
    if (sys.N != 2) throw WaveError(ErrorCode::Usage, "slaving function needs N=2");
    check_domain(sys, v);
    const double t0 = sys.tau(v);
    if (t0 == 0.0) throw WaveError(ErrorCode::SingularSlaving, "tau(v)=0");
    const Poly n = slaving_numerator(sys, c, lambda2);
    std::vector<double> g(order + 1);
    static const int binom[5][5] = {{1}, {1, 1}, {1, 2, 1}, {1, 3, 3, 1}, {1, 4, 6, 4, 1}};
    for (int k = 0; k <= order; ++k) {
        double s = n.deriv(v, k);
        for (int j = 1; j <= k; ++j) s -= binom[k][j] * sys.tau.deriv(v, j) * g[k - j];
        g[k] = s / t0;
    }
    return g;
}

std::vector<double> eval_q(const SystemSpec& sys, double v, double c, double lambda2,
                           int order) {
    check_domain(sys, v);
    std::vector<double> q(order + 1, 0.0);
    if (sys.N == 1) {
        q[0] = v * v / (2.0 * sys.b);
        if (order >= 1) q[1] = v / sys.b;
        if (order >= 2) q[2] = 1.0 / sys.b;
        return q;
    }
    const auto g = eval_g(sys, v, c, lambda2, order);
    for (int k = 0; k <= order; ++k) q[k] = (v * g[k] + (k > 0 ? k * g[k - 1] : 0.0)) / sys.b;
    return q;
}

std::vector<double> eval_potential(const SystemSpec& sys, double v, double c,
                                   const std::vector<double>& lambda, int order) {
    check_domain(sys, v);
    std::vector<double> w(order + 1);
    for (int k = 0; k <= order; ++k) w[k] = -sys.f.deriv(v, k);
    if (sys.N == 1) {
        const double lam = lambda.at(0);
        w[0] += -0.5 * (c / sys.b) * v * v - lam * v;
        if (order >= 1) w[1] += -(c / sys.b) * v - lam;
        if (order >= 2) w[2] += -(c / sys.b);
        return w;
    }
    const double lam1 = lambda.at(0), lam2 = lambda.at(1);
    const auto g = eval_g(sys, v, c, lam2, order);
    const Poly n = slaving_numerator(sys, c, lam2);
    const double n0 = n(v), n1 = n.deriv(v, 1);
    for (int k = 0; k <= order; ++k) w[k] += 0.5 * (n0 * g[k] + (k > 0 ? k * n1 * g[k - 1] : 0.0));
    w[0] -= lam1 * v;
    if (order >= 1) w[1] -= lam1;
    return w;
}

GradZ grad_Z(const SystemSpec& sys, double v, double c, const std::vector<double>& lambda) {
    check_domain(sys, v);
    const int d = sys.dim();
    GradZ r{Vec::Zero(d), Vec::Zero(d), Vec::Zero(d)};
    r.V[0] = 1.0;
    r.V[1] = v;
    r.Wv[1] = 1.0;
    if (sys.N == 1) {
        const auto q = eval_q(sys, v, c, 0.0, 2);
        r.V[2] = q[0];
        r.Wv[2] = q[1];
        r.Zvv[2] = q[2];
        return r;
    }
    const auto g = eval_g(sys, v, c, lambda.at(1), 2);
    const auto q = eval_q(sys, v, c, lambda.at(1), 2);
    r.V[2] = g[0];
    r.V[3] = q[0];
    r.Wv[2] = g[1];
    r.Wv[3] = q[1];
    r.Zvv[2] = g[2];
    r.Zvv[3] = q[2];
    return r;
}

Mat hess_Z(const SystemSpec& sys, double v, double, const std::vector<double>&) {
    check_domain(sys, v);
    Mat H = Mat::Zero(sys.dim(), sys.dim());
    if (sys.N == 1) return H;
    const double t = sys.tau(v);
    const double b = sys.b;
    // g_lambda2 = -1/tau, g_c = v g_lambda2 / b, q_lambda2 = g_c, q_c = v^2 g_lambda2 / b^2
    H(2, 2) = -1.0 / t;
    H(2, 3) = H(3, 2) = -v / (b * t);
    H(3, 3) = -v * v / (b * b * t);
    return H;
}

Vec T_vector(const SystemSpec& sys, double v) {
    check_domain(sys, v);
    Vec T = Vec::Zero(sys.dim());
    if (sys.N == 1) return T;
    const double s = 1.0 / std::sqrt(sys.tau(v));
    T[2] = s;
    T[3] = s * v / sys.b;
    return T;
}

Params params_for_state(const SystemSpec& sys, double v_star, std::optional<double> u_star,
                        double c) {
    check_domain(sys, v_star);
    Params p;
    p.c = c;
    const double cb = c / sys.b;
    if (sys.N == 1) {
        p.lambda = {-sys.f.deriv(v_star, 1) - cb * v_star};
    } else {
        const double u = u_star.value_or(0.0);
        const double lam2 = -sys.tau(v_star) * u - cb * v_star;
        const double lam1 = -sys.f.deriv(v_star, 1) - 0.5 * sys.tau.deriv(v_star, 1) * u * u - cb * u;
        p.lambda = {lam1, lam2};
    }
    p.mu = eval_potential(sys, v_star, c, p.lambda, 0)[0];
    return p;
}

double dd_W(const SystemSpec& sys, double c, const std::vector<double>& lambda,
            std::span<const double> nodes) {
    for (double x : nodes) check_domain(sys, x);
    const size_t m = nodes.size();
    double s = -sys.f.divdiff(nodes);
    if (sys.N == 1) {
        const Poly quad({0.0, -lambda.at(0), -0.5 * c / sys.b});
        return s + quad.divdiff(nodes);
    }
    if (m == 1) s -= lambda.at(0) * nodes[0];
    if (m == 2) s -= lambda.at(0);
    const Poly n = slaving_numerator(sys, c, lambda.at(1));
    const Poly half_n2 = (n * n).scaled(0.5);
    const auto rt = recip_table(sys.tau, nodes);
    return s + dd_poly_over_tau(half_n2, rt, nodes);
}

Vec dd_gradZ(const SystemSpec& sys, double c, const std::vector<double>& lambda,
             std::span<const double> nodes) {
    for (double x : nodes) check_domain(sys, x);
    const size_t m = nodes.size();
    Vec r = Vec::Zero(sys.dim());
    r[0] = (m == 1) ? 1.0 : 0.0;
    r[1] = (m == 1) ? nodes[0] : (m == 2 ? 1.0 : 0.0);
    if (sys.N == 1) {
        r[2] = Poly({0.0, 0.0, 0.5 / sys.b}).divdiff(nodes);
        return r;
    }
    const Poly n = slaving_numerator(sys, c, lambda.at(1));
    const auto rt = recip_table(sys.tau, nodes);
    r[2] = dd_poly_over_tau(n, rt, nodes);
    r[3] = dd_poly_over_tau((Poly({0.0, 1.0}) * n).scaled(1.0 / sys.b), rt, nodes);
    return r;
}

double impulse(const SystemSpec& sys, const Vec& U) {
    if (sys.N == 1) return 0.5 * U[0] * U[0] / sys.b;
    return U[0] * U[1] / sys.b;
}

}  // namespace wavestab
