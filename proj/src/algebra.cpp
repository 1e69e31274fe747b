#include "wavestab/algebra.hpp"

#include <cmath>

namespace wavestab {

const std::array<const char*, OrthoResiduals::kCount> OrthoResiduals::names = {
    "VSV", "VSW", "VST", "VSZ+WSW", "TST", "TSZ", "E.V-1", "E.W", "E.Z", "E.T"};

Frame frame_at(const SystemSpec& sys, double v, double c, const std::vector<double>& lambda) {
    const GradZ g = grad_Z(sys, v, c, lambda);
    return Frame{g.V, g.Wv, g.Zvv, T_vector(sys, v)};
}

Mat build_S(const SystemSpec& sys) {
    const int d = sys.dim();
    Mat S = Mat::Zero(d, d);
    S(0, d - 1) = S(d - 1, 0) = -1.0;
    if (sys.N == 1) {
        S(1, 1) = 1.0 / sys.b;
    } else {
        S(1, 2) = S(2, 1) = 1.0 / sys.b;
    }
    return S;
}

OrthoResiduals verify_orthogonality(const Frame& f, const Mat& S) {
    OrthoResiduals o;
    const Vec SV = S * f.V, SW = S * f.W, ST = S * f.T;
    o.r[0] = f.V.dot(SV);
    o.r[1] = f.W.dot(SV);
    o.r[2] = f.T.dot(SV);
    o.r[3] = f.Z.dot(SV) + f.W.dot(SW);
    o.r[4] = f.T.dot(ST);
    o.r[5] = f.Z.dot(ST);
    o.r[6] = f.V[0] - 1.0;
    o.r[7] = f.W[0];
    o.r[8] = f.Z[0];
    o.r[9] = f.T[0];
    for (double& x : o.r) {
        x = std::abs(x);
        o.max = std::max(o.max, x);
    }
    return o;
}

Mat basis_P(const Frame& f, const Mat& S, int N) {
    const int d = N + 2;
    Mat P = Mat::Zero(d, d);
    P(0, 0) = 1.0;
    int col = 1;
    P.col(col++) = S * f.V;
    if (N == 2) P.col(col++) = S * f.T;
    P.col(col++) = S * f.W;
    const double det = P.determinant();
    if (!std::isfinite(det) || std::abs(det) < 1e-14 * std::pow(P.norm(), d))
        throw WaveError(ErrorCode::SingularBasis, "congruence basis is singular");
    return P;
}

}  // namespace wavestab
