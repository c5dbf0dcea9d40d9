// test_spectra_approx.cpp — per-rung analytic spectra in the good-cavity limit

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jcl/approximations.hpp"
#include "jcl/coherent_mollow.hpp"
#include "jcl/errors.hpp"
#include "jcl/exact.hpp"
#include "jcl/spectra_approx.hpp"
#include "jcl/spectral.hpp"
#include "jcl/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace jcl;
using namespace jcl::sa;

namespace {

SystemParams params(double ga, double gs, double P, double gphi = 0.0, double delta = 0.0) {
    SystemParams p;
    p.gamma_a = ga;
    p.gamma_sigma = gs;
    p.P_sigma = P;
    p.gamma_phi = gphi;
    p.delta = delta;
    return p;
}

std::vector<double> poisson_T(const SystemParams& p) { return stats::poisson(approx::semiclassical(p).n_a); }

// Closed-form integral of one line over [a, b].
double line_integral(const SpectralLine& l, double a, double b) {
    const double hw = 0.5 * l.gamma_p;
    const auto F = [&](double w) {
        const double d = w - l.omega_p;
        return l.L_p * std::atan(d / hw) - 0.5 * l.K_p * std::log(hw * hw + d * d);
    };
    return (F(b) - F(a)) / std::numbers::pi;
}

// Uniform grid on [-W, W] plus dense patches around every line centre.
std::vector<double> refined_grid(const std::vector<SpectralLine>& lines, double W, int n) {
    std::vector<double> g = linspace(-W, W, n);
    for (const auto& l : lines) {
        const double h = std::max(l.gamma_p, 1e-9);
        for (double x : linspace(l.omega_p - 40.0 * h, l.omega_p + 40.0 * h, 801)) {
            if (x > -W && x < W) g.push_back(x);
        }
    }
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

double sum_elastic(const SystemParams& p, const DensityMatrixSlices& s, Channel ch) {
    double e = 0.0;
    for (int n = 0; n < s.size(); ++n) e += correlator_coefficients(p, s, n, ch).elastic.real();
    return e;
}

}  // namespace

TEST_CASE("density-matrix slices") {
    SUBCASE("q_i closed form without spontaneous decay") {
        const auto p = params(0.1, 0.0, 4.0);
        const auto T = stats::poisson(18.0);
        const auto s = density_slices(p, T);
        const double ka = s.kappa_a, Gs = p.Gamma_sigma();
        for (int n = 0; n + 1 < static_cast<int>(T.size()); ++n) {
            const double expect = -(ka * std::sqrt(n + 1.0) / (2.0 * p.g)) * p.P_sigma * T[n] /
                                  (2.0 * ka * (n + 1) + Gs);
            CHECK(s.q_i[n + 1] == doctest::Approx(expect).epsilon(1e-12).scale(1e-300));
        }
    }
    SUBCASE("no cavity loss: p0 + p1 reproduces T") {
        const auto T = stats::thermal(1.0);
        const auto s = density_slices(params(0.0, 1.0, 0.5), T);
        for (std::size_t n = 0; n < T.size(); ++n) {
            CHECK(std::abs(s.p0[n] + s.p1[n] - T[n]) < 1e-14);
        }
    }
    SUBCASE("emitter population at the semiclassical point") {
        const auto p = params(0.1, 0.0, 4.0);
        const auto s = density_slices(p, stats::poisson(18.0));
        CHECK(s.n_sigma() == doctest::Approx(approx::semiclassical(p).n_sigma).epsilon(0.05));
        CHECK(s.n_sigma() == doctest::Approx(exact::steady_state(p).n_sigma).epsilon(0.05));
    }
}

TEST_CASE("Rabi frequencies") {
    auto p = params(0.1, 0.0, 0.2);
    const auto r0 = rabi_frequencies(p, 0.0);
    const double R0 = std::sqrt(1.0 - 0.05 * 0.05);
    CHECK(r0.R_O.real() == doctest::Approx(R0).epsilon(1e-14));
    CHECK(r0.R_I.real() == doctest::Approx(R0).epsilon(1e-14));
    const auto r1 = rabi_frequencies(p, 1.0);
    CHECK(r1.R_O.real() == doctest::Approx(2.41371).epsilon(1e-5));
    for (int n : {0, 1, 3, 10}) {
        const double close = 4.0 * (std::sqrt(n + 1.0) - std::sqrt(double(n)));
        CHECK(rabi_frequencies(params(0.1, 0.0, 0.99 * close), n).R_I.real() > 0.0);
        CHECK(rabi_frequencies(params(0.1, 0.0, 1.01 * close), n).R_I.real() == 0.0);
        CHECK(rabi_frequencies(params(0.1, 0.0, 1.01 * close), n).R_I.imag() > 0.0);
    }
}

TEST_CASE("closed-form resonant coefficients equal the 4x4 solve") {
    const auto p = params(0.1, 0.0, 4.0);
    const auto s = density_slices(p, stats::poisson(18.0));
    for (int n = 1; n <= 50; ++n) {
        const auto c = correlator_coefficients(p, s, n, Channel::emitter);
        const auto ab = resonant_alpha_beta(p, n);
        REQUIRE(c.labelled);
        const double Tn = n < s.size() ? s.T[n] : 0.0;
        const cd CI = ab.alpha_I * Tn + ab.beta_I * s.T[n - 1];
        const cd CO = ab.alpha_O * Tn + ab.beta_O * s.T[n - 1];
        const double scale = std::abs(c.C_I) + std::abs(c.C_O);
        CHECK(std::abs(CI - c.C_I) <= 1e-10 * scale);
        CHECK(std::abs(CO - c.C_O) <= 1e-10 * scale);
    }
}

TEST_CASE("first rung is the limit of the general rung") {
    const auto p = params(0.1, 0.00334, 0.3, 0.05);
    for (Channel ch : {Channel::emitter, Channel::cavity}) {
        const auto c0 = single_rung_coefficients(p, 0.0, ch);
        const auto ce = single_rung_coefficients(p, 1e-9, ch);
        CHECK(std::abs(c0.elastic - ce.elastic) < 1e-6);
        CHECK(std::abs(c0.initial - ce.initial) < 1e-6);
    }
}

TEST_CASE("elastic weight") {
    const std::vector<SystemParams> cases = {params(0.1, 0.00334, 7.0), params(0.1, 0.00334, 2.0, 0.3, 0.5),
                                             params(0.05, 0.01, 3.0, 0.0, 1.0), params(0.1, 0.00334, 0.05)};
    for (const auto& p : cases) {
        const auto T = exact::steady_state(p).state.photon_distribution();
        const auto s = density_slices(p, T);
        for (Channel ch : {Channel::emitter, Channel::cavity}) {
            CHECK(elastic_weight(p, s, ch) == doctest::Approx(sum_elastic(p, s, ch)).epsilon(1e-9));
        }
        CHECK(elastic_weight(p, s, Channel::cavity) > 0.0);
    }
    SUBCASE("emitter sign changes at P = sqrt(2) g without spontaneous decay") {
        for (double f : {0.99, 0.999}) {
            const auto p = params(0.01, 0.0, f * std::numbers::sqrt2);
            CHECK(elastic_weight(p, density_slices(p, poisson_T(p)), Channel::emitter) < 0.0);
        }
        for (double f : {1.001, 1.01}) {
            const auto p = params(0.01, 0.0, f * std::numbers::sqrt2);
            CHECK(elastic_weight(p, density_slices(p, poisson_T(p)), Channel::emitter) > 0.0);
        }
    }
    SUBCASE("lasing point agrees with the semiclassical delta weight") {
        const auto p = params(0.1, 0.00334, 7.0);
        const auto grid = linspace(-30.0, 30.0, 601);
        const double e63 = semiclassical_mollow(p, grid).spectrum.elastic_weight;
        const double e_approx = approx_spectrum(p, poisson_T(p), Channel::emitter, grid).elastic_weight;
        CHECK(e_approx == doctest::Approx(e63).epsilon(0.10));
    }
}

TEST_CASE("normalization of the line decomposition") {
    const std::vector<SystemParams> cases = {params(0.1, 0.00334, 7.0), params(0.1, 0.00334, 2.0, 0.3, 0.5),
                                             params(0.05, 0.01, 3.0, 0.0, 1.0)};
    const auto grid = linspace(-10.0, 10.0, 11);
    for (const auto& p : cases) {
        const auto T = exact::steady_state(p).state.photon_distribution();
        for (Channel ch : {Channel::emitter, Channel::cavity}) {
            const auto r = approx_spectrum(p, T, ch, grid);
            CHECK(std::abs(sum_weights(r.lines) + r.elastic_weight - 1.0) < 1e-6);
        }
    }
}

TEST_CASE("incoherent part integrates to one minus the elastic weight") {
    SUBCASE("weak pump on the plain window") {
        const auto p = params(0.1, 0.00334, 0.01);
        const double W = 10.0 * std::max(1.0, std::sqrt(approx::semiclassical(p).n_a));
        const auto grid = linspace(-W, W, 40001);
        for (Channel ch : {Channel::emitter, Channel::cavity}) {
            const auto r = approx_spectrum(p, exact::steady_state(p).state.photon_distribution(), ch, grid);
            CHECK(trapezoid(grid, r.values) == doctest::Approx(1.0 - r.elastic_weight).epsilon(1e-3));
        }
    }
    SUBCASE("lasing point on a line-refined grid") {
        const auto p = params(0.1, 0.00334, 7.0);
        const double W = 10.0 * std::sqrt(approx::semiclassical(p).n_a);
        const auto T = exact::steady_state(p).state.photon_distribution();
        for (Channel ch : {Channel::emitter, Channel::cavity}) {
            const auto coarse = approx_spectrum(p, T, ch, {0.0});
            const auto grid = refined_grid(coarse.lines, W, 20001);
            const auto r = approx_spectrum(p, T, ch, grid);
            double window = 0.0;
            for (const auto& l : r.lines) window += line_integral(l, -W, W);
            CHECK(trapezoid(grid, r.values) == doctest::Approx(window).epsilon(1e-3));
        }
    }
}

TEST_CASE("spectral shapes") {
    SUBCASE("weak pump doublet at the vacuum Rabi frequency") {
        const auto p = params(0.1, 0.00334, 0.01);
        const auto grid = linspace(0.0, 3.0, 3001);
        const auto r = approx_spectrum(p, exact::steady_state(p).state.photon_distribution(), Channel::emitter, grid);
        const auto obs = observed_splitting(r);
        CHECK(obs.peak_position == doctest::Approx(rabi_frequencies(p, 0.0).R_O.real()).epsilon(0.01));
    }
    SUBCASE("strong-coupling widths") {
        const auto p = params(0.1, 0.00334, 1.0, 0.2);
        const auto s = density_slices(p, stats::poisson(25.0));
        const double w = (3.0 * p.Gamma_sigma() + p.gamma_phi) / 2.0;
        for (int n : {10, 20, 30}) {
            for (const auto& t : correlator_coefficients(p, s, n, Channel::emitter).terms) {
                if (std::abs(t.mu.imag()) > 1.0) CHECK(2.0 * t.mu.real() == doctest::Approx(w).epsilon(1e-9));
            }
        }
    }
    SUBCASE("lasing triplet near 2 sqrt(n_a) g and agreement with the exact spectrum") {
        const auto p = params(0.1, 0.00334, 7.0);
        const double na = approx::semiclassical(p).n_a;
        const auto grid = linspace(-25.0, 25.0, 2001);
        const auto r = approx_spectrum(p, poisson_T(p), Channel::emitter, grid);
        const auto obs = observed_splitting(r);
        CHECK(obs.peak_position == doctest::Approx(2.0 * std::sqrt(na)).epsilon(0.1));
        const auto ex = exact::spectrum(p, Channel::emitter, grid);
        const auto obs_ex = observed_splitting(ex);
        CHECK(obs.peak_position == doctest::Approx(obs_ex.peak_position).epsilon(0.05));
    }
    SUBCASE("detuning makes the triplet asymmetric") {
        const auto grid = linspace(-30.0, 30.0, 3001);
        const auto p = params(0.1, 0.00334, 7.0, 0.0, 2.0);
        CHECK(side_peak_visibility(approx_spectrum(p, poisson_T(p), Channel::emitter, grid)) > 0.05);
        const auto q = params(0.1, 0.00334, 7.0);
        CHECK(side_peak_visibility(approx_spectrum(q, poisson_T(q), Channel::emitter, grid)) < 1e-10);
    }
}

TEST_CASE("semiclassical Mollow triplet") {
    SUBCASE("splitting and cavity line width") {
        CHECK(mollow_splitting_incoherent(params(0.1, 0.0, 4.0)).real() == doctest::Approx(std::sqrt(79.0)).epsilon(1e-12));
        const auto m = semiclassical_mollow(params(0.1, 0.00334, 7.0), {0.0}, Channel::cavity);
        CHECK(m.gamma_L == doctest::Approx(4.08e-3).epsilon(1e-3));
    }
    SUBCASE("single rung at n = n_a reproduces the closed form") {
        for (const auto& p : {params(0.1, 0.00334, 7.0), params(0.01, 0.00334, 7.0), params(0.01, 0.00334, 3.0)}) {
            const auto grid = linspace(-30.0, 30.0, 3001);
            const auto sm = semiclassical_mollow(p, grid);
            const auto sr = single_rung_spectrum(p, approx::semiclassical(p).n_a, Channel::emitter, grid);
            const double peak = *std::max_element(sm.spectrum.values.begin(), sm.spectrum.values.end());
            for (std::size_t i = 0; i < grid.size(); ++i) {
                CHECK(std::abs(sm.spectrum.values[i] - sr.values[i]) <= 0.02 * peak);
            }
        }
    }
    SUBCASE("shares peak positions and widths with the coherently driven triplet") {
        // positions coincide to leading order in Gamma_sigma / kappa_sigma, so deep in lasing
        const auto p = params(0.01, 0.00334, 3.0);
        const auto sm = semiclassical_mollow(p, {0.0});
        LaserDriveParams d;
        d.omega_L = std::sqrt(approx::semiclassical(p).n_a) * p.g;
        d.gamma_sigma = p.gamma_sigma + p.P_sigma;
        const auto coh = coherent::coherent_correlator_lines(d);
        double side = 0.0, width = 0.0;
        for (const auto& l : coh.lines) {
            if (l.omega_p > side) {
                side = l.omega_p;
                width = l.gamma_p;
            }
        }
        CHECK(side == doctest::Approx(sm.R_O.real()).epsilon(0.01));
        CHECK(width == doctest::Approx(sm.side_width).epsilon(1e-9));
    }
}

TEST_CASE("observed splitting") {
    SUBCASE("deep lasing peak within the side half-width of Re R_O") {
        const auto p = params(0.01, 0.00334, 3.0);
        const auto grid = linspace(-60.0, 60.0, 6001);
        const auto obs = observed_splitting(approx_spectrum(p, poisson_T(p), Channel::emitter, grid));
        const double R = mollow_splitting_incoherent(p).real();
        CHECK(std::abs(obs.peak_position - R) < (3.0 * p.Gamma_sigma() + p.gamma_phi) / 4.0);
    }
    SUBCASE("single Lorentzian is not resolvable") {
        const auto p = params(0.1, 10.0, 1e-3);
        const auto grid = linspace(-20.0, 20.0, 2001);
        const auto r = approx_spectrum(p, exact::steady_state(p).state.photon_distribution(), Channel::emitter, grid);
        CHECK_THROWS_AS(observed_splitting(r), NotResolvable);
    }
    SUBCASE("dephasing hides the triplet before the splitting closes") {
        const auto grid = linspace(0.0, 40.0, 4001);
        bool lost = false;
        for (double gp = 0.0; gp < 60.0 && !lost; gp += 1.0) {
            const auto p = params(0.1, 0.00334, 7.0, gp);
            bool resolvable = true;
            try {
                resolvable = observed_splitting(approx_spectrum(p, poisson_T(p), Channel::emitter, grid)).resolvable;
            } catch (const NotResolvable&) {
                resolvable = false;
            }
            if (!resolvable) {
                lost = true;
                CHECK(mollow_splitting_incoherent(p).real() > 0.0);
            }
        }
        CHECK(lost);
    }
}

TEST_CASE("peak position curves") {
    const auto G = linspace(0.0, 12.0, 241);
    const auto rows = peak_positions_vs_decoherence({0, 1, 2, 5}, G);
    for (const auto& r : rows) {
        if (r.n == 0) {
            CHECK(r.pumped_O == doctest::Approx(r.spontaneous_O).epsilon(1e-12));
            CHECK(r.pumped_I == doctest::Approx(r.spontaneous_I).epsilon(1e-12));
        }
        const double in_close = 4.0 * (std::sqrt(r.n + 1.0) - std::sqrt(double(r.n)));
        const double out_close = 4.0 * (std::sqrt(r.n + 1.0) + std::sqrt(double(r.n)));
        if (r.Gamma > in_close * 1.001) CHECK(r.pumped_I == 0.0);
        if (r.Gamma < in_close * 0.999) CHECK(r.pumped_I > 0.0);
        if (r.Gamma > out_close * 1.001) CHECK(r.pumped_O == 0.0);
        if (r.Gamma < out_close * 0.999) CHECK(r.pumped_O > 0.0);
        if (r.n > 0 && r.Gamma > in_close * 1.001 && r.Gamma < 4.0) CHECK(r.spontaneous_I > 0.0);
    }
}
