#pragma once

#include <optional>
#include <vector>

#include "wavestab/model.hpp"

namespace wavestab {

struct PhasePortrait {
    double v_s = 0.0;
    double v_0 = 0.0;
    double v_sup = 0.0;
    double mu_0 = 0.0;
    double mu_s = 0.0;
    double c = 0.0;
    std::vector<double> lambda;
};

struct OrbitData {
    std::optional<double> v1;
    double v2 = 0.0;
    double v3 = 0.0;
    double rho = 0.0;  // 0 when v1 is absent
    double delta = 0.0;
    double m = 0.0;
    double h_s = 0.0;
};

// Critical points of W on the domain, sorted; grid bracketing + bisection + Newton.
std::vector<double> critical_points(const SystemSpec& sys, double c,
                                    const std::vector<double>& lambda);

PhasePortrait classify_portrait(const SystemSpec& sys, double c,
                                const std::vector<double>& lambda);

OrbitData orbit_roots(const SystemSpec& sys, const Params& params, const PhasePortrait& portrait);

}  // namespace wavestab
