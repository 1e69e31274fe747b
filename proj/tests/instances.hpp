#pragma once

#include <cmath>
#include <vector>

#include "wavestab/model.hpp"

namespace wavestab::testing {

// W = v^3/6 - v/2 at c = 0, lambda = 1/2: saddle -1, center 1, turning point 2
inline SystemSpec kdv() {
    SystemSpec s;
    s.N = 1;
    s.b = 1.0;
    s.f = Poly({0.0, 0.0, 0.0, -1.0 / 6.0});
    s.lo = -4.0;
    s.hi = 4.0;
    return s;
}
inline const std::vector<double> kKdvLambda{0.5};

// quadratic well (v-1)^2/2
inline SystemSpec harmonic() {
    SystemSpec s;
    s.N = 1;
    s.b = 1.0;
    s.f = Poly({-0.5, 1.0, -0.5});
    s.lo = -5.0;
    s.hi = 5.0;
    return s;
}

// Euler-Korteweg, tau = b = 1, cubic pressure law; end state (-1, 0) at c = 0.7
inline SystemSpec ek(double a4 = 0.0) {
    SystemSpec s;
    s.N = 2;
    s.b = 1.0;
    s.f = a4 == 0.0 ? Poly({0.0, 0.0, 0.0, -1.0 / 6.0}) : Poly({0.0, 0.0, 0.0, -1.0 / 6.0, a4});
    s.lo = -4.0;
    s.hi = 4.0;
    return s;
}
inline constexpr double kEkSpeed = 0.7;

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace wavestab::testing
