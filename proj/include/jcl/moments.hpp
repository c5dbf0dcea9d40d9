// moments.hpp — exact steady-state photon moments from the three-term recurrence
//
// Moments are stored scaled by 1/n! (N_a[n]/n! and so on) since N_a[n] ~ n_a^n
// overflows long before the recurrence is truncated.

#pragma once

#include "jcl/model.hpp"

#include <vector>

namespace jcl {

struct PhotonMoments {
    int n_max{0};
    bool converged{true};
    std::vector<double> Na;        // N_a[n]/n!, n = 0..n_max, Na[0] = 1
    std::vector<double> Nsigma;    // <a^+^(n-1) a^(n-1) s^+ s>/n!, Nsigma[0] = 0
    std::vector<double> Nas_real;  // Re <a^+^n a^(n-1) s>/n!
    std::vector<double> Nas_imag;  // Im <a^+^n a^(n-1) s>/n!

    double n_a() const { return Na.size() > 1 ? Na[1] : 0.0; }
    double N_a(int n) const;       // unscaled, may overflow to inf
};

struct MomentOptions {
    int n_max{0};          // 0 selects the automatic policy
    int n_max_cap{8192};
    double tol{1e-9};
};

struct Observables {
    double n_a{0.0};
    double n_sigma{0.0};
    double g2{0.0};              // N_a[2]/n_a^2
    double g2_identity{0.0};     // closed form in terms of n_a alone
    bool g2_defined{true};
    bool g2_consistent{true};    // |g2 - g2_identity| < 1e-8 g2
    double mandel_Q{0.0};
};

// explicit_pump: Gamma_sigma is held at gamma_sigma + P_sigma of the expansion point and only
// the explicit pump terms of B_n and C_n are expanded, so the coefficients belong to that point.
// full_pump: Gamma_sigma is expanded too; one polynomial in P_sigma, with a convergence radius of
// order gamma_sigma.
enum class SeriesExpansion { explicit_pump, full_pump };

struct SeriesCoefficients {
    SeriesExpansion expansion{SeriesExpansion::explicit_pump};
    double expansion_pump{0.0};
    int t_max{0};
    int n_max{0};
    int order_reached{0};                     // < t_max when the overflow guard tripped
    std::vector<std::vector<double>> f;       // f[t][n], t = 0..t_max, n = 0..n_max
    std::vector<std::vector<double>> alpha;   // alpha[k][n], n = 0..n_max+1 (n = 0 unused)
    std::vector<std::vector<double>> beta;

    // sum_t f[t][0] P^t; explicit_pump coefficients only accept P_sigma = expansion_pump
    double n_a(double P_sigma) const;
    double n_a() const { return n_a(expansion_pump); }
};

// Coefficients of the scaled recurrence for photon index n >= 1:
// -b M[n] + c M[n-1] - a (n+1) M[n+1] = 0.
struct RecurrenceRow {
    double b{0.0};
    double c{0.0};
    double a{0.0};
};
RecurrenceRow recurrence_row(const SystemParams& p, int n);

PhotonMoments solve_moments(const SystemParams& p, const MomentOptions& opt = {});

// Independent route: continued fraction for F[n] = N_a[n+1]/N_a[n] from the closure downwards.
PhotonMoments solve_moments_ratio(const SystemParams& p, int n_max);

Observables observables_from_moments(const SystemParams& p, const PhotonMoments& m);

// g2 in terms of n_a from the n = 1 equation of the recurrence.
double g2_from_na(const SystemParams& p, double n_a);

SeriesCoefficients perturbative_series(const SystemParams& p, int n_max, int t_max,
                                        SeriesExpansion expansion = SeriesExpansion::explicit_pump);

}  // namespace jcl
