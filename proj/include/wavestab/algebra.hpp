#pragma once

#include <array>
#include <string>

#include "wavestab/model.hpp"

namespace wavestab {

// V, W, Z, T evaluated at a single state (Z is the second v-derivative of grad Z).
struct Frame {
    Vec V, W, Z, T;
};

Frame frame_at(const SystemSpec& sys, double v, double c, const std::vector<double>& lambda);

// Symmetric matrix with X.S X / 2 = Q(U) - q for X = (1, U, q).
Mat build_S(const SystemSpec& sys);

struct OrthoResiduals {
    static constexpr int kCount = 10;
    static const std::array<const char*, kCount> names;
    std::array<double, kCount> r{};
    double max = 0.0;
};

OrthoResiduals verify_orthogonality(const Frame& f, const Mat& S);

// Columns (E, S V, [S T,] S W); T is skipped when N = 1.
Mat basis_P(const Frame& f, const Mat& S, int N);

inline Mat congruence(const Mat& P, const Mat& H) { return P.transpose() * H * P; }

}  // namespace wavestab
