// model.hpp — parameter records and effective rates of the pumped Jaynes-Cummings laser
//
// Every rate is expressed in units of the coupling g. g itself is kept so that
// callers can rescale to physical units.

#pragma once

#include <limits>
#include <string>

namespace jcl {

struct SystemParams {
    double g{1.0};
    double gamma_a{0.0};
    double gamma_sigma{0.0};
    double P_a{0.0};
    double P_sigma{0.0};
    double gamma_phi{0.0};
    double delta{0.0};   // omega_a - omega_sigma, with omega_a = 0

    double Gamma_a() const noexcept { return gamma_a - P_a; }
    double Gamma_sigma() const noexcept { return gamma_sigma + P_sigma; }

    // throws std::invalid_argument on g <= 0, negative or non-finite rates
    void validate() const;
};

struct LaserDriveParams {
    double omega_L{0.0};
    double delta{0.0};   // omega_L - omega_sigma
    double gamma_sigma{0.0};
    double gamma_phi{0.0};

    void validate() const;
};

struct RungRates {
    int n{1};
    double Gamma_T{0.0};
    double g_eff{0.0};
    double C_eff{0.0};   // +inf when gamma_a = 0
};

struct KappaRates {
    double kappa_sigma{0.0};   // +inf when gamma_a = 0
    double kappa_a{0.0};       // +inf when Gamma_sigma + gamma_phi = 0
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

double total_decoherence(const SystemParams& p, int n);
double effective_coupling(const SystemParams& p, int n);
RungRates effective_rates(const SystemParams& p, int n);
KappaRates kappa_rates(const SystemParams& p);

// Same parameters with every rate and g divided by g.
SystemParams in_units_of_g(const SystemParams& p);

std::string describe(const SystemParams& p);

}  // namespace jcl
