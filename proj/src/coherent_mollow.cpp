// coherent_mollow.cpp — Mollow triplet of a coherently driven emitter

#include "jcl/coherent_mollow.hpp"

#include "jcl/numerics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace jcl::coherent {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

CoherentSteadyState coherent_steady_state(const LaserDriveParams& d) {
    d.validate();
    CoherentSteadyState s;
    const double gt = d.gamma_sigma + d.gamma_phi;
    if (d.omega_L == 0.0) return s;
    if (gt > 0.0) {
        const double r = 2.0 * d.delta / gt;
        s.omega_L_eff = d.omega_L / std::sqrt(1.0 + r * r);
    } else {
        s.omega_L_eff = d.delta == 0.0 ? d.omega_L : 0.0;
    }
    const double oe2 = s.omega_L_eff * s.omega_L_eff;
    const double den = 2.0 * oe2 + 0.25 * d.gamma_sigma * gt;
    s.n_sigma = den > 0.0 ? oe2 / den : 0.0;
    const double ratio = gt > 0.0 ? 2.0 * d.delta / gt : 0.0;
    s.sigma_dag = I * (0.5 * d.gamma_sigma / d.omega_L) * s.n_sigma * (1.0 - I * ratio);
    return s;
}

std::complex<double> mollow_splitting(const LaserDriveParams& d) {
    const double q = (d.gamma_sigma - d.gamma_phi) / 4.0;
    const double r2 = 4.0 * d.omega_L * d.omega_L - q * q;
    return r2 >= 0.0 ? cd(std::sqrt(r2), 0.0) : cd(0.0, std::sqrt(-r2));
}

Eigen::Matrix3cd regression_matrix(const LaserDriveParams& d) {
    const double h = 0.5 * (d.gamma_sigma + d.gamma_phi);
    const double W = d.omega_L;
    Eigen::Matrix3cd M;
    M << -I * d.delta + h, 0.0, -2.0 * I * W,
         0.0, I * d.delta + h, 2.0 * I * W,
         -I * W, I * W, d.gamma_sigma;
    return M;
}

namespace {

Eigen::Vector3cd drive_vector(const LaserDriveParams& d) {
    return Eigen::Vector3cd(-I * d.omega_L, I * d.omega_L, 0.0);
}

struct RegressionSetup {
    Eigen::Matrix3cd M;
    Eigen::Vector3cd u;     // (<s>, <s^+>, <s^+ s>)
    Eigen::Vector3cd y0;    // v(0) - u <s^+>, normalized by n_sigma
    double n_sigma{0.0};
    double L_coh{0.0};
};

RegressionSetup setup(const LaserDriveParams& d) {
    d.validate();
    if (d.omega_L == 0.0) {
        throw std::invalid_argument("coherent spectrum is undefined without drive (omega_L = 0)");
    }
    if (d.gamma_sigma == 0.0) {
        throw std::invalid_argument("coherent spectrum needs gamma_sigma > 0");
    }
    RegressionSetup s;
    s.M = regression_matrix(d);
    s.u = s.M.partialPivLu().solve(drive_vector(d));
    s.n_sigma = s.u(2).real();
    const cd sd = s.u(1);
    Eigen::Vector3cd v0(s.n_sigma, 0.0, 0.0);
    s.y0 = (v0 - s.u * sd) / s.n_sigma;
    s.L_coh = std::norm(sd) / s.n_sigma;
    return s;
}

}  // namespace

CoherentLines coherent_correlator_lines(const LaserDriveParams& d) {
    const RegressionSetup s = setup(d);
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(s.M);
    if (es.info() != Eigen::Success) throw std::runtime_error("coherent: eigensolver failed");
    const Eigen::Matrix3cd V = es.eigenvectors();
    const Eigen::Vector3cd w = V.partialPivLu().solve(s.y0);

    std::vector<ExpTerm> terms;
    for (int k = 0; k < 3; ++k) terms.push_back({V(0, k) * w(k), -es.eigenvalues()(k)});

    CoherentLines out;
    out.lines = lines_from_terms(terms);
    out.L_coh = s.L_coh;
    out.R_L = mollow_splitting(d);
    return out;
}

CoherentLines resonant_lines(const LaserDriveParams& d) {
    d.validate();
    if (d.delta != 0.0) throw std::invalid_argument("resonant_lines requires delta = 0");
    const double gs = d.gamma_sigma, gp = d.gamma_phi, W = d.omega_L;
    const cd R = mollow_splitting(d);
    const double x = 8.0 * W * W / (gs * (gs + gp));
    const double y = (gs - gp) / (gs + gp);

    CoherentLines out;
    out.R_L = R;
    out.L_coh = gs * gs / (8.0 * W * W + gs * (gs + gp));
    out.lines.push_back({0.0, gs + gp, 0.5, 0.0});
    for (int sgn : {+1, -1}) {
        const cd c = (x * (1.0 + double(sgn) * I * (5.0 * gs - gp) / (4.0 * R)) -
                      y * (1.0 + double(sgn) * I * (gs - gp) / (4.0 * R))) /
                     (4.0 * (1.0 + x));
        SpectralLine l;
        l.omega_p = sgn * R.real();
        l.gamma_p = 0.5 * (3.0 * gs + gp) + sgn * 2.0 * R.imag();
        l.L_p = c.real();
        l.K_p = c.imag();
        out.lines.push_back(l);
    }
    std::sort(out.lines.begin(), out.lines.end(),
              [](const SpectralLine& a, const SpectralLine& b) { return a.omega_p < b.omega_p; });
    return out;
}

ResonantSpectrum mollow_spectrum_resonant(const LaserDriveParams& d,
                                          const std::vector<double>& omega) {
    d.validate();
    if (d.delta != 0.0) throw std::invalid_argument("mollow_spectrum_resonant requires delta = 0");
    const double gs = d.gamma_sigma, gp = d.gamma_phi, W2 = d.omega_L * d.omega_L;
    const double h = 0.5 * (gs + gp);
    ResonantSpectrum r;
    r.L_coh = gs * gs / (8.0 * W2 + gs * (gs + gp));
    r.values.reserve(omega.size());
    for (double w : omega) {
        const double w2 = w * w;
        const double central = h / (h * h + w2) / (2.0 * std::numbers::pi);
        const double num = gs * W2 - (gs - gp) / 16.0 * (gs * gs + w2);
        const double den = (gs * gs + w2) / 16.0 * ((gs + gp) * (gs + gp) + 4.0 * w2) +
                           (gs * (gs + gp) - 2.0 * w2) * W2 + 4.0 * W2 * W2;
        r.values.push_back(central + num / den / std::numbers::pi);
    }
    return r;
}

std::complex<double> incoherent_correlator(const LaserDriveParams& d, double tau) {
    const RegressionSetup s = setup(d);
    const Eigen::Matrix3cd E = (-s.M * tau).exp();
    return (E * s.y0)(0);
}

std::vector<double> numeric_regression_spectrum(const LaserDriveParams& d,
                                                const std::vector<double>& omega) {
    const RegressionSetup s = setup(d);
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(s.M);
    double min_rate = es.eigenvalues()(0).real();
    for (int k = 1; k < 3; ++k) min_rate = std::min(min_rate, es.eigenvalues()(k).real());
    if (!(min_rate > 0.0)) throw std::runtime_error("coherent: correlator does not decay");

    double w_max = 0.0;
    for (double w : omega) w_max = std::max(w_max, std::abs(w));
    w_max += es.eigenvalues().cwiseAbs().maxCoeff();
    const double tau_max = 40.0 / min_rate;
    const double h_target = std::min(1.0 / w_max, 0.5 / es.eigenvalues().cwiseAbs().maxCoeff());
    const int panels = static_cast<int>(std::ceil(tau_max / h_target));
    const double h = tau_max / panels;

    constexpr int kNodes = 16;
    const auto [xg, wg] = num::gauss_legendre(kNodes);
    std::vector<Eigen::Matrix3cd> node_prop(kNodes);
    std::vector<double> offsets(kNodes), weights(kNodes);
    for (int j = 0; j < kNodes; ++j) {
        offsets[j] = 0.5 * h * (xg[j] + 1.0);
        weights[j] = 0.5 * h * wg[j];
        node_prop[j] = (-s.M * offsets[j]).exp();
    }
    const Eigen::Matrix3cd step = (-s.M * h).exp();

    // correlator samples on every node, then one transform per frequency
    std::vector<cd> samples;
    std::vector<double> taus, wts;
    samples.reserve(static_cast<std::size_t>(panels) * kNodes);
    Eigen::Vector3cd y = s.y0;
    for (int p = 0; p < panels; ++p) {
        for (int j = 0; j < kNodes; ++j) {
            samples.push_back((node_prop[j].row(0) * y)(0));
            taus.push_back(p * h + offsets[j]);
            wts.push_back(weights[j]);
        }
        y = step * y;
    }

    std::vector<double> out(omega.size());
    for (std::size_t i = 0; i < omega.size(); ++i) {
        cd acc = 0.0;
        for (std::size_t k = 0; k < samples.size(); ++k) {
            acc += wts[k] * samples[k] * std::exp(I * (omega[i] * taus[k]));
        }
        out[i] = acc.real() / std::numbers::pi;
    }
    return out;
}

Visibility asymmetry_visibility(const LaserDriveParams& d) {
    const CoherentLines cl = coherent_correlator_lines(d);
    Visibility v;
    if (cl.lines.size() < 3) {
        v.V = 0.0;
        v.defined = false;
        return v;
    }
    std::vector<SpectralLine> byabs = cl.lines;
    std::sort(byabs.begin(), byabs.end(), [](const SpectralLine& a, const SpectralLine& b) {
        return std::abs(a.omega_p) > std::abs(b.omega_p);
    });
    const double Lp = byabs[0].L_p, Lm = byabs[1].L_p;
    const double den = std::abs(Lp) + std::abs(Lm);
    if (den == 0.0) {
        v.defined = false;
        return v;
    }
    v.V = std::abs(Lp - Lm) / den;
    return v;
}

}  // namespace jcl::coherent
