// approximations.hpp — closed-form and reduced models of the one-atom laser
//
// Linear (coupled bosons / one-rung Jaynes-Cummings), semiclassical (Poissonian
// field), thermal and cothermal (displaced thermal field) estimates of the
// steady state, plus the pump-regime classifier.

#pragma once

#include "jcl/model.hpp"

#include <string>
#include <vector>

namespace jcl::approx {

struct LinearVariant {
    double n_a{0.0};
    double n_sigma{0.0};
    bool divergent{false};
    bool negative{false};
};

struct LinearModels {
    LinearVariant bosonic;        // Gamma_sigma -> gamma_sigma - P_sigma
    LinearVariant truncated_jc;   // Gamma_sigma -> gamma_sigma + P_sigma
    double P_minus{0.0};          // NaN when the bosonic denominator has no real root
    double P_plus{0.0};
    double C1{0.0};
};

struct SemiclassicalResult {
    double n_a{0.0};             // clamped at 0 beyond the quench point
    double n_a_unclamped{0.0};
    double n_sigma{0.0};
    double F_a{0.0};
    double F_sigma{0.0};
    double C2{0.0};
    double max_n_a{0.0};
    double P_at_max{0.0};
    double P_max{0.0};
    double n_a_poisson_root{0.0};   // exact g2 = 1 root of the n = 1 moment equation
    bool clamped{false};
    bool in_validity_window{false};
};

struct ThermalResult {
    double n_a{0.0};
    double n_sigma{0.0};
    bool exact_limit{false};   // gamma_a = P_a = 0: two uncorrelated thermal fields
};

struct CothermalState {
    double n_a{0.0};
    double n_coh{0.0};
    double n_th{0.0};
    double g2{0.0};
    bool g2_defined{true};
    double mandel_Q{0.0};
    double n_sigma{0.0};
    double residual{0.0};

    std::vector<double> distribution(double rel_tail = 1e-16) const;
    double moment(int k) const;   // N_a[k]
};

enum class Regime { Linear, Quantum, Lasing, Quenching, Thermal };
std::string to_string(Regime r);

struct RegimeLabel {
    Regime regime{Regime::Linear};
    double linear_edge{0.0};      // gamma_sigma
    double quantum_edge{0.0};     // max(previous, g_eff[1])
    double lasing_edge{0.0};      // max(previous, pump at maximum n_a)
    double quench_edge{0.0};      // max(previous, quench pump)
    bool spectrum_window{false};  // good cavity, g < P_sigma << kappa_sigma
    std::string thresholds;       // human-readable description of the rule
};

inline constexpr double kMuchLess = 4.0;   // "a << b" read as a * kMuchLess <= b

double slope_C1(const SystemParams& p);
LinearModels linear_models(const SystemParams& p);
double g2_zero_pump(const SystemParams& p);
SemiclassicalResult semiclassical(const SystemParams& p);
ThermalResult thermal_na(const SystemParams& p);

// n_a solving the n = 1 moment equation for a prescribed g2 (1: Poissonian, 2: thermal).
double na_for_g2(const SystemParams& p, double g2);

// Residuals of the n = 1, 2 moment equations for a cothermal field.
std::pair<double, double> cothermal_residuals(const SystemParams& p, double n_a, double n_coh);
CothermalState cothermal(const SystemParams& p);

RegimeLabel classify_regime(const SystemParams& p);
// Geometric centre of the lasing band for these rates.
double lasing_midpoint(const SystemParams& p);

}  // namespace jcl::approx
