#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "wavestab/cli.hpp"

using namespace wavestab::cli;
namespace fs = std::filesystem;

namespace {

const char* kKdv =
    R"("system": {"N": 1, "b": 1, "f": [0, 0, 0, -0.16666666666666666], "kappa": [1], "domain": [-4, 4]})";

fs::path tmp(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / "wavestab_cli_test";
    fs::create_directories(d);
    return d / name;
}

fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = tmp(name);
    std::ofstream(p) << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

int run_cfg(const std::string& sub, const std::string& cfg, const fs::path& out) {
    std::ostringstream err;
    return run(sub, write(sub + ".json", cfg).string(), out.string(), err);
}

}  // namespace

TEST_CASE("portrait report") {
    const fs::path out = tmp("portrait.out");
    CHECK(run_cfg("portrait", std::string("{") + kKdv + R"(, "c": 0, "lambda": [0.5]})", out) == 0);
    const json j = json::parse(slurp(out));
    CHECK(j["v_s"].get<double>() == doctest::Approx(-1.0));
    CHECK(j["v_0"].get<double>() == doctest::Approx(1.0));
    CHECK(j["v_sup"].get<double>() == doctest::Approx(2.0));
}

TEST_CASE("portrait diagnostic and config errors") {
    const fs::path out = tmp("harm.out");
    const std::string harm =
        R"({"system": {"N": 1, "b": 1, "f": [-0.5, 1, -0.5], "kappa": [1], "domain": [-5, 5]}, "c": 0, "lambda": [0]})";
    CHECK(run_cfg("portrait", harm, out) == 2);
    CHECK(json::parse(slurp(out))["reason"] == "NoSaddle");
    CHECK(run_cfg("portrait", "{ not json", out) == 1);
    CHECK(run_cfg("portrait", R"({"c": 0})", out) == 1);
    CHECK(run_cfg("portrait", std::string("{") + kKdv + R"(, "c": 0, "lambda": [0.5, 1]})", out) == 1);
}

TEST_CASE("stability rows") {
    const fs::path out = tmp("stab.csv");
    const std::string cfg = std::string("{") + kKdv +
                            R"(, "c": 0, "lambda": [0.5], "points": [{"mu": 0}, {"mu": 0.5}]})";
    CHECK(run_cfg("stability", cfg, out) == 0);
    const auto ls = lines(slurp(out));
    REQUIRE(ls.size() == 3);
    CHECK(ls[0] == "mu,lambda1,c,theta,period,d2mu,det,signature,verdict,error");
    CHECK(ls[1].find(",CoPeriodicOrbitallyStable,") != std::string::npos);
    CHECK(ls[2].substr(ls[2].rfind(',') + 1) == "MuOutOfRange");
}

TEST_CASE("two-field header") {
    const fs::path out = tmp("stab2.csv");
    const std::string cfg =
        R"({"system": {"N": 2, "b": 1, "f": [0, 0, 0, -0.16666666666666666], "kappa": [1], "tau": [1], "domain": [-4, 4]},
            "c": 0.7, "endstate": {"v": -1, "u": 0}, "points": [{"mu_frac": 0.5}]})";
    CHECK(run_cfg("stability", cfg, out) == 0);
    CHECK(lines(slurp(out))[0] == "mu,lambda1,lambda2,c,theta,period,d2mu,det,signature,verdict,error");
}

TEST_CASE("asymptotic ladders") {
    const fs::path out = tmp("asy.csv");
    std::string cfg = std::string("{") + kKdv +
                      R"(, "c": 0, "lambda": [0.5], "ladder": {"quantity": "rho", "decades": 2, "points_per_decade": 1}})";
    CHECK(run_cfg("asympt", cfg, out) == 0);
    double last = 0.0;
    for (const auto& l : lines(slurp(out)))
        if (l.rfind("soliton_SHS", 0) == 0) {
            std::istringstream ls(l);
            std::string f;
            for (int i = 0; i < 3; ++i) std::getline(ls, f, ',');
            last = std::stod(f);
        }
    CHECK(last == doctest::Approx(18.0).epsilon(1e-4));

    cfg = std::string("{") + kKdv +
          R"(, "c": 0, "lambda": [0.5], "ladder": {"quantity": "delta", "decades": 1, "points_per_decade": 3}})";
    CHECK(run_cfg("asympt", cfg, out) == 0);
    for (const auto& l : lines(slurp(out)))
        if (l.rfind("harmonic_hessian", 0) == 0 && l.find(",,") == std::string::npos) {
            // fifth field is the ratio between consecutive rungs (delta / 10^(1/3))
            std::istringstream ls(l);
            std::string f;
            for (int i = 0; i < 6; ++i) std::getline(ls, f, ',');
            CHECK(std::stod(f) < 0.5);
        }

    cfg = std::string("{") + kKdv +
          R"(, "c": 0, "lambda": [0.5], "ladder": {"quantity": "rho", "decades": 0, "points_per_decade": 1}})";
    CHECK(run_cfg("asympt", cfg, out) == 1);
}

TEST_CASE("sweep totality, resume and determinism") {
    const fs::path out = tmp("sweep.csv");
    fs::remove(out);
    const std::string cfg = std::string("{") + kKdv + R"(, "endstate": {"v": -1},
        "grid": {"mu_frac": [0.001, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.999],
                 "c": [-0.4, -0.3, -0.2, -0.1, 0.0, 0.1, 0.2, 0.3, 0.4, 0.5]}})";
    const fs::path cp = write("sweep.json", cfg);
    CHECK(cmd_sweep(json::parse(cfg), out.string(), 1) == 0);
    const std::string first = slurp(out);
    auto ls = lines(first);
    REQUIRE(ls.size() == 101);
    for (size_t i = 1; i < ls.size(); ++i)
        CHECK(ls[i].find(",CoPeriodicOrbitallyStable,") != std::string::npos);

    CHECK(cmd_sweep(json::parse(cfg), out.string(), 1) == 0);
    CHECK(slurp(out) == first);

    // drop the tail and resume with several threads
    {
        std::ofstream o(out);
        for (size_t i = 0; i < 40; ++i) o << ls[i] << "\n";
    }
    CHECK(cmd_sweep(json::parse(cfg), out.string(), 3) == 0);
    CHECK(slurp(out) == first);

    const fs::path out2 = tmp("sweep2.csv");
    fs::remove(out2);
    CHECK(cmd_sweep(json::parse(cfg), out2.string(), 4) == 0);
    CHECK(slurp(out2) == first);
    (void)cp;
}

TEST_CASE("constants and asymlib reports") {
    const fs::path out = tmp("const.json");
    CHECK(run_cfg("constants", std::string("{") + kKdv + R"(, "c": 0, "lambda": [0.5], "Xi": [6, 7]})", out) == 0);
    const json j = json::parse(slurp(out));
    CHECK(j["Xi_star"].get<double>() == doctest::Approx(2 * M_PI));
    CHECK(j["kernel_dim_at_Xi_star"] == 2);
    CHECK(j["periods"][0]["coperiodic_stable"] == true);
    CHECK(j["periods"][1]["coperiodic_stable"] == false);

    CHECK(run_cfg("asymlib-check", std::string("{") + kKdv + R"(, "c": 0, "lambda": [0.5]})", out) == 0);
    CHECK(json::parse(slurp(out))["pass"] == true);
}

TEST_CASE("number formatting") {
    CHECK(fmt(0.1) == "0.10000000000000001");
    CHECK(fmt(-1.0) == "-1");
}
