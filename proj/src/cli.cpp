#include "wavestab/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "wavestab/asymlib.hpp"
#include "wavestab/asymptotics.hpp"
#include "wavestab/constant_states.hpp"
#include "wavestab/stability.hpp"

namespace wavestab::cli {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

SystemSpec load_system(const json& cfg) {
    if (!cfg.contains("system")) throw ConfigError("missing \"system\"");
    try {
        return system_from_json_text(cfg.at("system").dump());
    } catch (const WaveError& e) {
        throw ConfigError(e.what());
    }
}

template <class T>
T get_or(const json& j, const char* key, T dflt) {
    if (!j.contains(key)) return dflt;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad \"") + key + "\": " + e.what());
    }
}

// c and lambda from a block; lambda may come from an "endstate" {v, u}.
struct Family {
    double c = 0.0;
    std::vector<double> lambda;
};

Family family_from(const json& j, const SystemSpec& sys, const Family* parent = nullptr) {
    Family f;
    if (parent) f = *parent;
    f.c = get_or<double>(j, "c", f.c);
    if (j.contains("lambda")) {
        f.lambda = get_or<std::vector<double>>(j, "lambda", {});
    } else if (j.contains("endstate")) {
        const json& e = j.at("endstate");
        if (!e.contains("v")) throw ConfigError("endstate needs \"v\"");
        std::optional<double> u;
        if (e.contains("u")) u = e.at("u").get<double>();
        if (sys.N == 2 && !u) throw ConfigError("endstate needs \"u\" when N = 2");
        f.lambda = params_for_state(sys, e.at("v").get<double>(), u, f.c).lambda;
    }
    if (static_cast<int>(f.lambda.size()) != sys.N)
        throw ConfigError("lambda must have N entries");
    return f;
}

std::string header(int N) {
    std::string h = "mu,lambda1";
    if (N == 2) h += ",lambda2";
    return h + ",c,theta,period,d2mu,det,signature,verdict,error";
}

std::string key_of(double mu, const Family& f) {
    std::string k = std::isnan(mu) ? std::string() : fmt(mu);
    for (double l : f.lambda) k += "," + fmt(l);
    return k + "," + fmt(f.c);
}

// One stability row. mu_frac places mu inside (mu_0, mu_s) for this (c, lambda).
std::string stability_row(const SystemSpec& sys, const Family& f, std::optional<double> mu,
                          std::optional<double> mu_frac) {
    double m = mu.value_or(NAN);
    try {
        if (!mu) {
            const PhasePortrait pp = classify_portrait(sys, f.c, f.lambda);
            m = pp.mu_0 + *mu_frac * (pp.mu_s - pp.mu_0);
        }
        const HessianReport r = stability_verdict(sys, Params{m, f.lambda, f.c});
        return key_of(m, f) + "," + fmt(r.base.ag.theta) + "," + fmt(r.base.ag.period) + "," +
               fmt(r.d2mu) + "," + fmt(r.det) + "," + std::to_string(r.signature) + "," +
               to_string(r.verdict) + ",";
    } catch (const WaveError& e) {
        return key_of(m, f) + ",,,,,,," + to_string(e.code());
    }
}

json portrait_json(const PhasePortrait& pp) {
    return json{{"v_s", pp.v_s},   {"v_0", pp.v_0},   {"v_sup", pp.v_sup}, {"mu_0", pp.mu_0},
                {"mu_s", pp.mu_s}, {"c", pp.c},       {"lambda", pp.lambda}};
}

}  // namespace

int cmd_portrait(const json& cfg, std::ostream& out) {
    const SystemSpec sys = load_system(cfg);
    const Family f = family_from(cfg, sys);
    try {
        out << portrait_json(classify_portrait(sys, f.c, f.lambda)).dump(2) << "\n";
        return 0;
    } catch (const WaveError& e) {
        out << json{{"reason", to_string(e.code())}, {"message", e.what()}}.dump(2) << "\n";
        return 2;
    }
}

int cmd_stability(const json& cfg, std::ostream& out) {
    const SystemSpec sys = load_system(cfg);
    const Family base = family_from(cfg, sys);
    if (!cfg.contains("points") || !cfg.at("points").is_array())
        throw ConfigError("stability needs a \"points\" array");
    out << header(sys.N) << "\n";
    for (const json& p : cfg.at("points")) {
        if (p.is_number()) {
            out << stability_row(sys, base, p.get<double>(), std::nullopt) << "\n";
            continue;
        }
        const Family f = family_from(p, sys, &base);
        std::optional<double> mu, frac;
        if (p.contains("mu")) mu = get_or<double>(p, "mu", 0.0);
        else if (p.contains("mu_frac")) frac = get_or<double>(p, "mu_frac", 0.0);
        else throw ConfigError("each point needs \"mu\" or \"mu_frac\"");
        out << stability_row(sys, f, mu, frac) << "\n";
    }
    return 0;
}

namespace {

struct Ladder {
    std::string quantity;
    std::vector<double> values;
};

Ladder read_ladder(const json& cfg) {
    if (!cfg.contains("ladder")) throw ConfigError("asympt needs a \"ladder\"");
    const json& l = cfg.at("ladder");
    Ladder out;
    out.quantity = get_or<std::string>(l, "quantity", "");
    if (out.quantity != "mu" && out.quantity != "rho" && out.quantity != "delta")
        throw ConfigError("ladder quantity must be mu, rho or delta");
    const int decades = get_or<int>(l, "decades", 0);
    const int ppd = get_or<int>(l, "points_per_decade", 0);
    if (decades <= 0 || ppd <= 0) throw ConfigError("empty ladder");
    const double dflt = out.quantity == "delta" ? 0.05 : (out.quantity == "rho" ? 0.1 : 1e-2);
    const double start = get_or<double>(l, "start", dflt);
    for (int j = 0; j <= decades * ppd; ++j)
        out.values.push_back(start * std::pow(10.0, -static_cast<double>(j) / ppd));
    return out;
}

double spectral_norm(const Mat& A) {
    return Eigen::SelfAdjointEigenSolver<Mat>(A, Eigen::EigenvaluesOnly).eigenvalues().cwiseAbs().maxCoeff();
}

struct TableRow {
    std::string check;
    double x, numeric, predicted, residual;
};

}  // namespace

int cmd_asympt(const json& cfg, std::ostream& out) {
    const SystemSpec sys = load_system(cfg);
    const Family f = family_from(cfg, sys);
    const Ladder lad = read_ladder(cfg);
    PhasePortrait pp;
    try {
        pp = classify_portrait(sys, f.c, f.lambda);
    } catch (const WaveError& e) {
        std::cerr << "portrait: " << to_string(e.code()) << "\n";
        return 2;
    }
    std::vector<TableRow> rows;
    int status = 0;
    try {
        if (lad.quantity == "delta") {
            const AsymFrame hf = harmonic_hessian_prediction(sys, f.c, f.lambda, pp);
            for (double d : lad.values) {
                const double mu = mu_for_delta(sys, pp, d);
                const Params p{mu, f.lambda, f.c};
                const HessianComparison hc = compare_hessian(sys, p, Limit::Harmonic);
                rows.push_back({"harmonic_hessian", hc.small, spectral_norm(hc.H_num),
                                spectral_norm(hc.H_pred),
                                hc.rel_residual});
                const double Xi = hc.report.base.ag.period;
                rows.push_back({"harmonic_period", hc.small, Xi, *hf.Xi0, std::abs(Xi - *hf.Xi0)});
                const RootExpansionResiduals r = root_expansion_check(sys, p, pp, Limit::Harmonic);
                rows.push_back({"harmonic_m", hc.small, hc.report.base.orbit.m,
                                NAN, r.m});
            }
        } else if (lad.quantity == "rho") {
            for (double rho : lad.values) {
                const double mu = mu_for_rho(sys, pp, rho);
                const HessianComparison hc =
                    compare_hessian(sys, Params{mu, f.lambda, f.c}, Limit::Soliton);
                const double pred = hc.H_num(0, 0) / hc.leading_ratio;
                rows.push_back({"soliton_leading", hc.small, hc.H_num(0, 0), pred,
                                std::abs(hc.leading_ratio - 1.0)});
                rows.push_back({"soliton_SHS", hc.small, hc.SHS, hc.M2, hc.SHS_error});
            }
        } else {
            const LimitCoeffs L = limit_coeffs(sys, f.c, f.lambda, pp, Limit::Soliton);
            const double M = boussinesq_momentum(sys, f.c, f.lambda, pp);
            const double k = sys.kappa(pp.v_s);
            for (double e : lad.values) {
                const Params p{pp.mu_s - e, f.lambda, f.c};
                const ActionEval ev = evaluate_action(sys, p);
                const double pred = M + L.a * std::sqrt(k / 2.0) * e * std::log(e);
                rows.push_back({"soliton_action", e, ev.ag.theta, pred, std::abs(ev.ag.theta - pred)});
                const RootExpansionResiduals r = root_expansion_check(sys, p, pp, Limit::Soliton);
                rows.push_back({"soliton_v2", e, ev.orbit.v2, NAN, r.v2});
                rows.push_back({"soliton_v3", e, ev.orbit.v3, NAN, r.v3});
            }
        }
    } catch (const WaveError& e) {
        std::cerr << "asympt: " << to_string(e.code()) << ": " << e.what() << "\n";
        status = 2;
    }
    // root rows only carry |error|; their predicted column stays empty
    out << "check,x,numeric,predicted,residual,ratio,log10_x,log10_residual\n";
    std::map<std::string, double> last;
    for (const TableRow& r : rows) {
        std::string ratio;
        if (auto it = last.find(r.check); it != last.end() && it->second != 0.0)
            ratio = fmt(r.residual / it->second);
        last[r.check] = r.residual;
        out << r.check << "," << fmt(r.x) << "," << fmt(r.numeric) << "," << (std::isnan(r.predicted) ? "" : fmt(r.predicted)) << ","
            << fmt(r.residual) << "," << ratio << "," << fmt(std::log10(r.x)) << ","
            << fmt(std::log10(r.residual)) << "\n";
    }
    return status;
}

int cmd_constants(const json& cfg, std::ostream& out) {
    const SystemSpec sys = load_system(cfg);
    const Family f = family_from(cfg, sys);
    ConstantState st;
    json rep;
    try {
        if (cfg.contains("state")) {
            st.v = get_or<double>(cfg.at("state"), "v", 0.0);
            if (cfg.at("state").contains("u")) st.u = cfg.at("state").at("u").get<double>();
        } else {
            const PhasePortrait pp = classify_portrait(sys, f.c, f.lambda);
            st.v = pp.v_0;
            const AsymFrame hf = harmonic_hessian_prediction(sys, f.c, f.lambda, pp);
            rep["Xi0"] = *hf.Xi0;
        }
        if (sys.N == 2 && !st.u) st.u = eval_g(sys, st.v, f.c, f.lambda[1], 0)[0];
        const ConstantStateReport r = coperiodic_threshold(sys, st, f.c, f.lambda);
        rep["v"] = st.v;
        if (st.u) rep["u"] = *st.u;
        rep["hyperbolic"] = r.hyperbolic;
        rep["spectrally_stable_localized"] = r.spectrally_stable_localized;
        rep["Wvv"] = r.Wvv;
        if (r.Xi_star) {
            rep["Xi_star"] = *r.Xi_star;
            rep["kernel_dim_at_Xi_star"] = r.kernel_dim_at_Xi_star;
        } else {
            rep["Xi_star"] = nullptr;
        }
        json per = json::array();
        for (double Xi : get_or<std::vector<double>>(cfg, "Xi", {}))
            per.push_back({{"Xi", Xi}, {"coperiodic_stable", coperiodic_stable(sys, st, f.c, Xi)}});
        rep["periods"] = per;
    } catch (const WaveError& e) {
        out << json{{"reason", to_string(e.code())}, {"message", e.what()}}.dump(2) << "\n";
        return 2;
    }
    out << rep.dump(2) << "\n";
    return 0;
}

int cmd_asymlib_check(const json& cfg, std::ostream& out) {
    json rep;
    const SmoothFn one{[](double, int k) { return k == 0 ? 1.0 : 0.0; }, nullptr};
    const SmoothFn lin{[](double x, int k) { return k == 0 ? x : (k == 1 ? 1.0 : 0.0); }, nullptr};
    const SmoothFn quad{[](double x, int k) {
                            return k == 0 ? x * x : (k == 1 ? 2 * x : (k == 2 ? 2.0 : 0.0));
                        },
                        nullptr};
    const SmoothFn edge{[](double x, int k) {
                            static const double c[] = {1.0, 0.5, 0.75, 1.875};
                            return c[k] * std::pow(1.0 - x, -0.5 - k);
                        },
                        [](double) { return 1.0; }};
    const std::vector<std::pair<const char*, const SmoothFn*>> fns = {
        {"1", &one}, {"x", &lin}, {"x^2", &quad}, {"1/sqrt(1-x)", &edge}};
    bool ok = true;
    for (const auto& [name, g] : fns) {
        const LogSeries s = G_expansion(*g);
        json ladder = json::array();
        double worst = 0.0;
        for (double rho : {1e-1, 1e-2, 1e-3, 1e-4}) {
            const double e = G_numeric(*g, rho) - s.eval(rho);
            const double scaled = std::abs(e) / (rho * rho * rho * std::abs(std::log(rho)));
            worst = std::max(worst, scaled);
            ladder.push_back({{"rho", rho}, {"error", e}, {"error_over_rho3_lnrho", scaled}});
        }
        rep["G"][name] = {{"a", s.a}, {"b", s.b}, {"ladder", ladder}};
        ok = ok && worst < 1.0;
    }
    double hworst = 0.0;
    for (double rho : {1e-1, 1e-3, 1e-5}) {
        const double exact = 2.0 / rho - 2.0 / (1.0 + rho + std::sqrt(1.0 + rho));
        hworst = std::max(hworst, std::abs(H_numeric(one, rho) / exact - 1.0));
    }
    rep["H_one_max_rel_error"] = hworst;
    ok = ok && hworst < 1e-12;
    const LogSeries F1 = F_expansion(one);
    rep["F_one"] = {{"B0", F1.b[0]}, {"B1", F1.b[1]}, {"A2", F1.a[2]}};
    const Poly W({0.0, 0.0, 0.5, 1.0 / 6.0});
    const RootExpansion re = root_coeffs(W);
    json rl = json::array();
    for (double e : {1e-2, 1e-3, 1e-4, 1e-5}) {
        const double d = exact_root(W, e, 1) - re.z(e, 1);
        rl.push_back({{"eps", e}, {"error", d}, {"error_over_eps2", d / (e * e)}});
    }
    rep["roots"] = {{"alpha", re.alpha}, {"beta", re.beta}, {"eta", re.eta}, {"ladder", rl}};
    if (cfg.contains("system")) {
        const SystemSpec sys = load_system(cfg);
        const Family f = family_from(cfg, sys);
        std::vector<std::array<double, 3>> tr;
        const int n = 20;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < 5; ++j) {
                const double t = (i + 0.5) / n, u = (j + 0.5) / 5;
                tr.push_back({sys.lo + t * (sys.hi - sys.lo), sys.lo + u * (sys.hi - sys.lo),
                              sys.lo + (1 - t * u) * (sys.hi - sys.lo)});
            }
        const double r = symmetry_check_R(sys, f.c, f.lambda, tr);
        rep["R_symmetry_residual"] = r;
        ok = ok && r <= 1e-12 * std::max(1.0, std::abs(sys.hi - sys.lo));
    }
    rep["pass"] = ok;
    out << rep.dump(2) << "\n";
    return ok ? 0 : 2;
}

namespace {

struct SweepPoint {
    Family f;
    std::optional<double> mu, frac;
};

std::vector<SweepPoint> sweep_grid(const json& cfg, const SystemSpec& sys) {
    if (!cfg.contains("grid")) throw ConfigError("sweep needs a \"grid\"");
    const json& g = cfg.at("grid");
    const auto cs = get_or<std::vector<double>>(g, "c", {get_or<double>(cfg, "c", 0.0)});
    // lambda list from the grid, else one family per c (an endstate fixes lambda only given c)
    std::vector<std::vector<double>> lams;
    if (g.contains("lambda")) lams = get_or<std::vector<std::vector<double>>>(g, "lambda", {});
    const bool per_c = lams.empty() && cfg.contains("endstate");
    if (lams.empty() && !per_c) lams.push_back(family_from(cfg, sys).lambda);
    if (per_c) lams.push_back({});
    const bool frac = g.contains("mu_frac");
    const auto mus = get_or<std::vector<double>>(g, frac ? "mu_frac" : "mu", {});
    if (mus.empty() || cs.empty() || lams.empty()) throw ConfigError("empty sweep grid");
    std::vector<SweepPoint> pts;
    for (const auto& l : lams) {
        if (!per_c && static_cast<int>(l.size()) != sys.N)
            throw ConfigError("lambda must have N entries");
        for (double c : cs) {
            json at = cfg;
            at["c"] = c;
            const Family fam = per_c ? family_from(at, sys) : Family{c, l};
            for (double m : mus) {
                SweepPoint p{fam, std::nullopt, std::nullopt};
                (frac ? p.frac : p.mu) = m;
                pts.push_back(p);
            }
        }
    }
    return pts;
}

std::string sweep_key(const SweepPoint& p) {
    std::string k = p.frac ? fmt(*p.frac) : std::string();
    k += ",";
    return k + key_of(p.mu.value_or(NAN), p.f);
}

}  // namespace

int cmd_sweep(const json& cfg, const std::string& out_path, int threads) {
    const SystemSpec sys = load_system(cfg);
    const std::vector<SweepPoint> pts = sweep_grid(cfg, sys);

    // Rows already on disk are identified by their mu_frac/mu/lambda/c prefix.
    std::set<std::string> done;
    bool have_header = false;
    {
        std::ifstream in(out_path);
        std::string line;
        while (std::getline(in, line)) {
            if (!have_header) {
                have_header = true;
                continue;
            }
            std::istringstream ls(line);
            std::string field, key;
            for (int i = 0; i < sys.N + 3 && std::getline(ls, field, ','); ++i)
                key += (i ? "," : "") + field;
            done.insert(key);
        }
    }
    std::vector<size_t> todo;
    for (size_t i = 0; i < pts.size(); ++i) {
        // a row with mu_frac stores the computed mu, so match on frac/lambda/c only
        bool present = false;
        if (pts[i].frac) {
            const std::string pre = fmt(*pts[i].frac) + ",";
            std::string tail;
            for (double l : pts[i].f.lambda) tail += "," + fmt(l);
            tail += "," + fmt(pts[i].f.c);
            for (auto it = done.lower_bound(pre); it != done.end() && it->rfind(pre, 0) == 0; ++it)
                if (it->size() >= tail.size() &&
                    it->compare(it->size() - tail.size(), tail.size(), tail) == 0)
                    present = true;
        } else {
            present = done.count(sweep_key(pts[i])) > 0;
        }
        if (!present) todo.push_back(i);
    }

    std::ofstream out(out_path, std::ios::app);
    if (!out) throw ConfigError("cannot open output " + out_path);
    if (!have_header) out << "mu_frac," << header(sys.N) << "\n" << std::flush;

    if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = std::max(1, std::min<int>(threads, static_cast<int>(todo.size())));

    std::vector<std::optional<std::string>> results(todo.size());
    std::mutex mu;
    std::condition_variable cv;
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t k = next++; k < todo.size(); k = next++) {
            const SweepPoint& p = pts[todo[k]];
            std::string row = (p.frac ? fmt(*p.frac) : std::string()) + "," +
                              stability_row(sys, p.f, p.mu, p.frac);
            {
                std::lock_guard<std::mutex> lk(mu);
                results[k] = std::move(row);
            }
            cv.notify_one();
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    // single writer: commit in grid order so the file is the same for any thread count
    for (size_t k = 0; k < todo.size(); ++k) {
        std::unique_lock<std::mutex> lk(mu);
        cv.wait(lk, [&] { return results[k].has_value(); });
        const std::string row = std::move(*results[k]);
        lk.unlock();
        out << row << "\n" << std::flush;
    }
    for (auto& t : pool) t.join();
    return 0;
}

int run(const std::string& sub, const std::string& config_path, const std::string& out_path,
        std::ostream& err) {
    json cfg;
    {
        std::ifstream in(config_path);
        if (!in) {
            err << "cannot read config " << config_path << "\n";
            return 1;
        }
        try {
            cfg = json::parse(in);
        } catch (const json::exception& e) {
            err << "malformed config: " << e.what() << "\n";
            return 1;
        }
    }
    try {
        if (sub == "sweep") {
            int threads = 0;
            if (const char* env = std::getenv("WAVESTAB_THREADS")) threads = std::atoi(env);
            return cmd_sweep(cfg, out_path, threads);
        }
        std::ostringstream buf;
        int code;
        if (sub == "portrait") code = cmd_portrait(cfg, buf);
        else if (sub == "stability") code = cmd_stability(cfg, buf);
        else if (sub == "asympt") code = cmd_asympt(cfg, buf);
        else if (sub == "constants") code = cmd_constants(cfg, buf);
        else if (sub == "asymlib-check") code = cmd_asymlib_check(cfg, buf);
        else {
            err << "unknown subcommand " << sub << "\n";
            return 1;
        }
        if (out_path.empty() || out_path == "-") {
            std::cout << buf.str();
        } else {
            std::ofstream out(out_path);
            if (!out) {
                err << "cannot open output " << out_path << "\n";
                return 1;
            }
            out << buf.str();
        }
        return code;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 1;
    } catch (const json::exception& e) {
        err << "config error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace wavestab::cli
