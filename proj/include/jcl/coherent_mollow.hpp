// coherent_mollow.hpp — resonance fluorescence of a coherently driven two-level emitter

#pragma once

#include "jcl/model.hpp"
#include "jcl/spectral.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace jcl::coherent {

struct CoherentSteadyState {
    double n_sigma{0.0};
    std::complex<double> sigma_dag{0.0, 0.0};   // <sigma^dagger>
    double omega_L_eff{0.0};
};

struct CoherentLines {
    std::vector<SpectralLine> lines;   // incoherent part, normalized by n_sigma
    double L_coh{0.0};                 // elastic (delta) weight
    std::complex<double> R_L{0.0, 0.0};
};

struct Visibility {
    double V{0.0};
    bool defined{true};
};

CoherentSteadyState coherent_steady_state(const LaserDriveParams& d);

// Half Mollow splitting sqrt((2 Omega_L)^2 - ((gamma_sigma - gamma_phi)/4)^2), Re >= 0 branch.
std::complex<double> mollow_splitting(const LaserDriveParams& d);

// 3x3 regression matrix acting on (<s^+(0) s(t)>, <s^+(0) s^+(t)>, <s^+(0) s^+ s(t)>).
Eigen::Matrix3cd regression_matrix(const LaserDriveParams& d);

// Lines from the eigendecomposition of the regression matrix (any detuning and dephasing).
CoherentLines coherent_correlator_lines(const LaserDriveParams& d);

// Closed-form lines valid at zero detuning.
CoherentLines resonant_lines(const LaserDriveParams& d);

// Closed-form resonant spectrum without the delta peak; L_coh is returned separately.
struct ResonantSpectrum {
    std::vector<double> values;
    double L_coh{0.0};
};
ResonantSpectrum mollow_spectrum_resonant(const LaserDriveParams& d,
                                          const std::vector<double>& omega);

// Normalized correlator <s^+(0) s(tau)>/n_sigma minus its tau -> inf limit,
// propagated with the matrix exponential.
std::complex<double> incoherent_correlator(const LaserDriveParams& d, double tau);

// Spectrum from numerical propagation of the regression equations and a
// quadrature Fourier transform (independent of the line decomposition).
std::vector<double> numeric_regression_spectrum(const LaserDriveParams& d,
                                                const std::vector<double>& omega);

Visibility asymmetry_visibility(const LaserDriveParams& d);

}  // namespace jcl::coherent
