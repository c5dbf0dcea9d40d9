// spectral.hpp — Lorentzian/dispersive line decomposition of emission spectra

#pragma once

#include <complex>
#include <string>
#include <vector>

namespace jcl {

struct SpectralLine {
    double omega_p{0.0};
    double gamma_p{0.0};   // FWHM of the Lorentzian part
    double L_p{0.0};
    double K_p{0.0};
};

enum class Channel { cavity, emitter };

std::string to_string(Channel c);
Channel channel_from_string(const std::string& s);

struct SpectrumResult {
    Channel channel{Channel::emitter};
    std::vector<double> omega;
    std::vector<double> values;
    double elastic_weight{0.0};
    std::vector<SpectralLine> lines;
    double n_c{0.0};
};

// One term c * exp(lambda * tau) of a normalized correlator, lambda = -gamma/2 - i*omega.
struct ExpTerm {
    std::complex<double> coeff;
    std::complex<double> lambda;
};

// Lines from correlator terms, merging eigenvalues closer than rel_tol * max|lambda|.
std::vector<SpectralLine> lines_from_terms(const std::vector<ExpTerm>& terms,
                                           double rel_tol = 1e-9);

double line_value(const SpectralLine& l, double w);
double evaluate_lines(const std::vector<SpectralLine>& lines, double w);
std::vector<double> evaluate_lines(const std::vector<SpectralLine>& lines,
                                   const std::vector<double>& grid);

double sum_weights(const std::vector<SpectralLine>& lines);

std::vector<double> linspace(double a, double b, int n);
std::vector<double> logspace(double a, double b, int n);

// Composite trapezoid on a possibly non-uniform grid.
double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace jcl
