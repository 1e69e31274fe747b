#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wavestab/quadrature.hpp"

namespace wavestab {

enum class Verdict { CoPeriodicOrbitallyStable, SpectrallyUnstable, Inconclusive, Degenerate };

const char* to_string(Verdict v);

struct HessianResult {
    Mat H;
    Vec steps;
    double asymmetry = 0.0;
    ActionEval base;
};

struct SignatureResult {
    int n = 0;
    bool degenerate = false;
    Vec eigenvalues;  // ascending
    double tol = 0.0;  // applies to the matrix the count was taken on
    std::vector<int> minor_signs;  // signs of leading principal minors D_0..D_n, empty if unusable
    std::optional<int> sylvester_n;
};

struct HessianReport {
    Mat H;
    double d2mu = 0.0;
    double det = 0.0;
    int signature = 0;
    Vec eigenvalues;
    Vec step_used;
    double asymmetry = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    ActionEval base;
    SignatureResult sig;
};

struct HessianOptions {
    double harmonic_step_fraction = 0.25;
    double soliton_step_fraction = 1e-3;
    double max_asymmetry = 1e-4;
};

HessianResult hessian_action(const SystemSpec& sys, const Params& params,
                             const HessianOptions& opts = {});

// tol_eig >= 0: count raw eigenvalues below -tol_eig. Otherwise count on the diagonally
// equilibrated matrix with tolerance 1e-7 times its spectral norm.
SignatureResult negative_signature(const Mat& H, double tol_eig = -1.0);

// Sign-change count of (1, D_1, ..., D_n); empty when some minor is below tol.
std::vector<int> leading_minor_signs(const Mat& H, double rel_tol = 1e-13);
int sign_changes(const std::vector<int>& signs);

Verdict verdict_from(int n, int N, bool degenerate);

HessianReport stability_verdict(const SystemSpec& sys, const Params& params,
                                const HessianOptions& opts = {});

}  // namespace wavestab
