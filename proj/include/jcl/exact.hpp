// exact.hpp — truncated-Fock Lindblad engine: steady state, correlator lines, spectra
//
// Basis |n, i> with photon number n = 0..n_max and emitter state i in {0, 1};
// flat index 2n + i. The Liouvillian conserves the excitation imbalance
// q = (n + i) - (m + j) of every element |n,i><m,j|, so the steady state lives in
// the q = 0 sector and the first-order correlators in the q = +1 sector.

#pragma once

#include "jcl/model.hpp"
#include "jcl/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace jcl::exact {

using cd = std::complex<double>;
using SparseC = Eigen::SparseMatrix<cd>;

struct FockSpace {
    int n_max{1};
    int dim() const noexcept { return 2 * (n_max + 1); }
    int index(int n, int i) const noexcept { return 2 * n + i; }
    int photons(int k) const noexcept { return k / 2; }
    int emitter(int k) const noexcept { return k % 2; }
    int excitations(int k) const noexcept { return k / 2 + k % 2; }
};

// Elements |x><y| of one excitation-imbalance sector, in a fixed order.
struct Sector {
    FockSpace space;
    int charge{0};
    bool is_full{false};
    std::vector<std::pair<int, int>> elements;
    std::unordered_map<std::int64_t, int> lookup;

    static Sector make(const FockSpace& s, int charge);
    static Sector full(const FockSpace& s);   // every element, column-major vec order
    int size() const noexcept { return static_cast<int>(elements.size()); }
    int find(int x, int y) const;   // -1 outside the sector
};

// L restricted to a sector (or the full space via Sector::full).
SparseC build_liouvillian(const SystemParams& p, const Sector& sector);
SparseC build_liouvillian(const SystemParams& p, int n_max);   // full, column-major vec(rho)

struct DensityMatrix {
    FockSpace space;
    Eigen::MatrixXcd rho;

    double p0(int n) const;
    double p1(int n) const;
    cd q(int n) const;                  // <n,0| rho |n-1,1>
    std::vector<double> photon_distribution() const;
    double n_a() const;
    double n_sigma() const;
    double factorial_moment(int k) const;
    double g2() const;
};

struct SteadyOptions {
    int n_max{0};          // 0 selects the automatic policy
    int n_max_cap{2048};
    double tol{1e-7};
    double tail{1e-12};
};

struct SteadyResult {
    DensityMatrix state;
    int n_max{0};
    double n_a{0.0};
    double n_sigma{0.0};
    double g2{0.0};
};

DensityMatrix steady_state_at(const SystemParams& p, int n_max);
// Same solve on the full dim^2 Liouvillian (no sector restriction); for small n_max.
DensityMatrix steady_state_full(const SystemParams& p, int n_max);
SteadyResult steady_state(const SystemParams& p, const SteadyOptions& opt = {});

// Checks used by tests and the CLI.
struct StateDiagnostics {
    double hermiticity{0.0};
    double trace_error{0.0};
    double min_eigenvalue{0.0};
    double off_pattern{0.0};   // largest |rho| outside the q = 0 pattern
};
StateDiagnostics diagnose(const DensityMatrix& rho);

struct LineOptions {
    int n_max{0};           // 0 picks the smallest cutoff holding the photon distribution
    double tail{1e-14};
    double decomposition_tol{1e-6};   // relative mismatch against resolvent probes
    SteadyOptions steady{};
};

struct LineResult {
    std::vector<SpectralLine> lines;
    double n_c{0.0};
    int n_max{0};
    bool diagonalizable{true};
};

// Correlator <c^+(0) c(tau)>/n_c decomposed over eigenvalues of the q = +1 generator.
LineResult spectral_lines(const SystemParams& p, Channel ch, const LineOptions& opt = {});

// Direct resolvent S(w) = Re[r (-(G + i w))^-1 x0] / (pi n_c), no eigendecomposition.
std::vector<double> resolvent_spectrum(const SystemParams& p, Channel ch,
                                       const std::vector<double>& omega, int n_max);

// Grid values leave out the narrow lines (gamma_p < gamma_a/10) that make up elastic_weight.
// If the eigendecomposition is rejected the grid comes from the resolvent, lines stay
// empty and elastic_weight is 0.
SpectrumResult spectrum(const SystemParams& p, Channel ch, const std::vector<double>& omega,
                        const LineOptions& opt = {});

struct TransitionRow {
    double P_sigma{0.0};
    double omega_p{0.0};
    double L_p{0.0};
    double gamma_p{0.0};
    double K_p{0.0};
};

struct TransitionMap {
    std::vector<TransitionRow> rows;
    std::vector<std::pair<double, std::string>> failures;
};

// Cavity-channel lines for each pump in the grid (the rest of p is held fixed).
TransitionMap transition_map(const SystemParams& p, const std::vector<double>& pumps,
                             const LineOptions& opt = {});

// Cutoff used when n_max = 0 is requested.
int auto_initial_cutoff(const SystemParams& p);

}  // namespace jcl::exact
