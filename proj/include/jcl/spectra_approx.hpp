// spectra_approx.hpp — analytic emission spectra in the good-cavity limit
//
// The photon dynamics is frozen (gamma_a, P_a << Gamma_sigma, g) so every rung n of the
// ladder contributes an independent 4x4 regression problem whose inputs are the
// density-matrix slices p0, p1, q built from a photon distribution T[n].

#pragma once

#include "jcl/model.hpp"
#include "jcl/spectral.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace jcl::sa {

using cd = std::complex<double>;

struct DensityMatrixSlices {
    std::vector<double> p0;    // p0[n], n = 0..N+1
    std::vector<double> p1;
    std::vector<double> q_r;   // q[n] = rho(n,0; n-1,1), q[0] = 0
    std::vector<double> q_i;
    std::vector<double> T;     // input distribution padded to the same length
    double kappa_a{0.0};
    bool in_validity{true};    // gamma_a, P_a << Gamma_sigma, g
    double norm_residual{0.0}; // sum_n (p0 + p1) - 1

    int size() const { return static_cast<int>(p1.size()); }
    double n_sigma() const;
};

// T[n] for n = 0..N; entries beyond N are taken as zero.
DensityMatrixSlices density_slices(const SystemParams& p, const std::vector<double>& T);

struct RabiFrequencies {
    cd R_I;
    cd R_O;
};

// sqrt(g^2 (sqrt(n+1) -/+ sqrt(n))^2 - ((Gamma_sigma - gamma_phi)/4)^2), Re >= 0 then Im >= 0.
RabiFrequencies rabi_frequencies(const SystemParams& p, double n);
cd principal_root(cd z);

// Per-rung regression problem u' = -M u + A.
Eigen::Matrix4cd rung_matrix(const SystemParams& p, double n);

struct RungTerm {
    cd mu;      // eigenvalue of M: the term decays as exp(-mu tau)
    cd coeff;   // unnormalized amplitude (multiply by 1/n_c for the normalized correlator)
};

struct CorrelatorCoefficients {
    int n{0};
    Channel channel{Channel::emitter};
    std::vector<RungTerm> terms;
    cd elastic{0.0, 0.0};    // readout of M^-1 A (the tau-independent part)
    cd initial{0.0, 0.0};    // readout of u(0): contribution of this rung to n_c
    // Labelled at resonance only (empty otherwise): coefficient of exp(-i R tau) and its R.s.i. partner.
    bool labelled{false};
    cd C_I{0.0, 0.0}, C_I_rsi{0.0, 0.0}, C_O{0.0, 0.0}, C_O_rsi{0.0, 0.0};
    double omega_I{0.0}, omega_O{0.0}, gamma_I{0.0}, gamma_O{0.0};
};

CorrelatorCoefficients correlator_coefficients(const SystemParams& p, const DensityMatrixSlices& s,
                                               int n, Channel ch);

// Single rung at a continuous photon number with T = 1 on the neighbouring rungs.
CorrelatorCoefficients single_rung_coefficients(const SystemParams& p, double n, Channel ch);

// Closed-form emitter coefficients at gamma_sigma = gamma_phi = delta = 0, unnormalized
// (alpha T[n] + beta T[n-1]).
struct AlphaBeta {
    cd alpha_I, alpha_O, beta_I, beta_O;
};
AlphaBeta resonant_alpha_beta(const SystemParams& p, int n);

// Re E^c from the closed-form sums (not normalized by n_c).
double elastic_weight(const SystemParams& p, const DensityMatrixSlices& s, Channel ch);

// Lines (normalized by n_c) plus the delta weight Re(E^c)/n_c in elastic_weight.
SpectrumResult approx_spectrum(const SystemParams& p, const std::vector<double>& T, Channel ch,
                               const std::vector<double>& omega, double rel_support = 1e-12);
SpectrumResult single_rung_spectrum(const SystemParams& p, double n, Channel ch,
                                    const std::vector<double>& omega);

struct SemiclassicalMollow {
    SpectrumResult spectrum;   // incoherent part on the grid, delta weight in elastic_weight
    cd R_O{0.0, 0.0};
    double side_width{0.0};
    double central_width{0.0};
    double gamma_L{0.0};       // cavity line narrowing estimate
    bool closed_form{true};    // false: evaluated with the single-rung substitution n = n_a
};

SemiclassicalMollow semiclassical_mollow(const SystemParams& p, const std::vector<double>& omega,
                                         Channel ch = Channel::emitter);
cd mollow_splitting_incoherent(const SystemParams& p);

struct ObservedSplitting {
    double peak_position{0.0};
    double neck_position{0.0};
    double peak_value{0.0};
    double neck_value{0.0};
    bool resolvable{false};
};

// Throws NotResolvable when the spectrum has no local maximum at omega > 0.
ObservedSplitting observed_splitting(const SpectrumResult& s);

// |S(peak+) - S(peak-)| / (S(peak+) + S(peak-)) for the outermost side peaks; 0 if none.
double side_peak_visibility(const SpectrumResult& s);

enum class PumpedAxis { decoherence, pump };   // Gamma = Gamma_sigma - gamma_phi, or Gamma = P_sigma + gamma_sigma

struct PeakCurveRow {
    double Gamma{0.0};
    int n{0};
    double spontaneous_O{0.0};
    double spontaneous_I{0.0};
    double pumped_O{0.0};
    double pumped_I{0.0};
};

std::vector<PeakCurveRow> peak_positions_vs_decoherence(const std::vector<int>& n_list,
                                                        const std::vector<double>& Gamma_grid,
                                                        double g = 1.0,
                                                        PumpedAxis axis = PumpedAxis::decoherence,
                                                        double gamma_phi = 0.0);

}  // namespace jcl::sa
