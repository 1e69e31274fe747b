#pragma once

#include <optional>
#include <vector>

#include "wavestab/model.hpp"
#include "wavestab/portrait.hpp"

namespace wavestab {

struct QuadOptions {
    double rtol = 1e-10;
    int max_level = 14;  // up to 2^14 panels
    int fixed_level = -1;  // >= 0 disables adaptivity (used when differencing)
    int force_route = -1;  // -1 automatic, else static_cast<int>(Route)
};

enum class Route { Harmonic = 0, Soliton = 1 };

struct ActionGradient {
    double theta = 0.0;
    Vec grad;
    double period = 0.0;
    Route route = Route::Harmonic;
    int level = 0;  // finest panel level reached by any sub-integral
};

enum class MomentumMethod { Integral, FiniteDifference, Both };

struct MomentumReport {
    double M = 0.0;
    double dM = 0.0;
    double d2M = 0.0;
    MomentumMethod method = MomentumMethod::Both;
    std::optional<double> dM_integral, d2M_integral, dM_fd, d2M_fd;
    double fd_step = 0.0;
    bool fd_available = false;
};

// Second divided difference of W at (v,w,z).
double reduced_R(const SystemSpec& sys, double v, double w, double z, double c,
                 const std::vector<double>& lambda);
// Same quantity from the double-integral representation, 30x30 Gauss-Legendre.
double reduced_R_quadrature(const SystemSpec& sys, double v, double w, double z, double c,
                            const std::vector<double>& lambda);

ActionGradient theta_and_grad(const SystemSpec& sys, const Params& params, const OrbitData& orbit,
                              const QuadOptions& opts = {});
ActionGradient theta_and_grad_soliton_regime(const SystemSpec& sys, const Params& params,
                                             const OrbitData& orbit, const QuadOptions& opts = {});

// Picks the soliton parametrization when v1 exists and rho < kSolitonRouteRho.
inline constexpr double kSolitonRouteRho = 0.25;
ActionGradient action_gradient(const SystemSpec& sys, const Params& params, const OrbitData& orbit,
                               const QuadOptions& opts = {});

// Full pipeline: portrait, roots, action data.
struct ActionEval {
    PhasePortrait portrait;
    OrbitData orbit;
    ActionGradient ag;
};
ActionEval evaluate_action(const SystemSpec& sys, const Params& params, const QuadOptions& opts = {});

double boussinesq_momentum(const SystemSpec& sys, double c, const std::vector<double>& lambda,
                           const PhasePortrait& portrait, double rtol = 1e-12);

struct EndState {
    double v = 0.0;
    std::optional<double> u;
};

MomentumReport momentum_derivatives(const SystemSpec& sys, double c, const EndState& state,
                                    MomentumMethod method = MomentumMethod::Both);

}  // namespace wavestab
