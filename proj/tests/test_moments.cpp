// test_moments.cpp — photon moments from the three-term recurrence

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jcl/approximations.hpp"
#include "jcl/errors.hpp"
#include "jcl/exact.hpp"
#include "jcl/moments.hpp"
#include "jcl/spectral.hpp"

#include <cmath>

using namespace jcl;

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

}  // namespace

TEST_CASE("zero pump gives the vacuum") {
    const auto m = solve_moments(params(0.1, 0.00334, 0.0));
    CHECK(m.Na[0] == 1.0);
    for (std::size_t n = 1; n < m.Na.size(); ++n) CHECK(m.Na[n] == 0.0);
    const auto o = observables_from_moments(params(0.1, 0.00334, 0.0), m);
    CHECK(o.n_a == 0.0);
    CHECK(o.n_sigma == 0.0);
    CHECK_FALSE(o.g2_defined);
}

TEST_CASE("no cavity loss below threshold is thermal") {
    const auto p = params(0.0, 1.0, 0.5);
    const auto o = observables_from_moments(p, solve_moments(p));
    CHECK(o.n_a == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(o.g2 == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("no cavity loss above threshold has no steady state") {
    CHECK_THROWS_AS(solve_moments(params(0.0, 1.0, 1.0)), NoSteadyState);
    CHECK_THROWS_AS(solve_moments(params(0.0, 1.0, 3.0)), NoSteadyState);
}

TEST_CASE("cavity pumping is outside the recurrence") {
    auto p = params(0.5, 0.1, 1.0);
    p.P_a = 0.1;
    CHECK_THROWS_AS(solve_moments(p), std::invalid_argument);
}

TEST_CASE("low pump follows the linear slope") {
    const auto p = params(0.1, 0.00334, 0.001);
    const double na = solve_moments(p).n_a();
    CHECK(na == doctest::Approx(approx::slope_C1(p) * 0.001).epsilon(0.01));
    exact::SteadyOptions so;
    so.n_max = 8;
    CHECK(exact::steady_state(p, so).n_a == doctest::Approx(na).epsilon(1e-6));
}

TEST_CASE("moments agree with the Liouvillian steady state") {
    for (const auto& p : {params(0.1, 0.00334, 0.5), params(0.3, 0.05, 1.2, 0.1, 0.4), params(1.0, 0.1, 3.0, 0.5, -1.0),
                          params(0.1, 0.00334, 7.0), params(10.0, 0.00334, 0.8)}) {
        const auto m = solve_moments(p);
        const auto e = exact::steady_state(p);
        const auto& dm = e.state;
        for (int n = 1; n <= 4; ++n) {
            const double fn = std::tgamma(n + 1.0);
            CHECK(m.Na[n] == doctest::Approx(dm.factorial_moment(n) / fn).epsilon(1e-8));
            double ns = 0.0;
            std::complex<double> nas = 0.0;
            for (int k = n - 1; k < dm.space.n_max; ++k) {
                const double c1 = std::exp(std::lgamma(k + 1.0) - std::lgamma(k - n + 2.0));
                const double c2 = std::sqrt(c1 * std::exp(std::lgamma(k + 2.0) - std::lgamma(k - n + 2.0)));
                ns += dm.p1(k) * c1;
                nas += std::conj(dm.q(k + 1)) * c2;
            }
            CHECK(m.Nsigma[n] == doctest::Approx(ns / fn).epsilon(1e-8));
            CHECK(m.Nas_real[n] == doctest::Approx(nas.real() / fn).epsilon(1e-8).scale(std::abs(nas) / fn));
            CHECK(m.Nas_imag[n] == doctest::Approx(nas.imag() / fn).epsilon(1e-8).scale(std::abs(nas) / fn));
        }
    }
}

TEST_CASE("population identity and g2 identity") {
    for (double ga : {0.1, 1.0, 10.0})
        for (double P : logspace(1e-4, 1e3, 15)) {
            const auto p = params(ga, 0.00334, P);
            const auto o = observables_from_moments(p, solve_moments(p));
            CHECK(o.n_sigma * p.Gamma_sigma() + ga * o.n_a == doctest::Approx(P).epsilon(1e-12));
            CHECK(o.n_sigma >= 0.0);
            CHECK(o.n_sigma <= 1.0);
            CHECK(o.g2 >= 0.0);
            CHECK(o.g2_consistent);
            CHECK(o.mandel_Q == doctest::Approx(o.n_a * (o.g2 - 1.0)));
        }
}

TEST_CASE("banded solve and continued fraction agree") {
    for (const auto& p : {params(0.1, 0.00334, 0.2), params(0.1, 0.00334, 12.0), params(1.0, 0.2, 2.0, 0.3, 0.5)}) {
        const auto m = solve_moments(p);
        const auto r = solve_moments_ratio(p, m.n_max);
        for (int n = 1; n <= 6; ++n) CHECK(r.Na[n] == doctest::Approx(m.Na[n]).epsilon(1e-10));
    }
}

TEST_CASE("recurrence rows are satisfied by the solution") {
    const auto p = params(0.1, 0.00334, 3.0);
    const auto m = solve_moments(p);
    for (int n = 1; n + 1 <= m.n_max; ++n) {
        const auto r = recurrence_row(p, n);
        const double res = -r.b * m.Na[n] + r.c * m.Na[n - 1] - r.a * (n + 1) * m.Na[n + 1];
        const double scale = std::abs(r.b * m.Na[n]) + std::abs(r.c * m.Na[n - 1]) + 1e-300;
        CHECK(std::abs(res) / scale < 1e-10);
    }
}

TEST_CASE("scaled moments decay in the tail") {
    const auto p = params(0.1, 0.00334, 7.0);
    const auto m = solve_moments(p);
    std::size_t peak = 0;
    for (std::size_t n = 0; n < m.Na.size(); ++n) {
        CHECK(m.Na[n] >= 0.0);
        if (m.Na[n] > m.Na[peak]) peak = n;
    }
    for (std::size_t n = peak + 1; n < m.Na.size(); ++n) CHECK(m.Na[n] <= m.Na[n - 1]);
}

TEST_CASE("strongly damped cavity: truncated Jaynes-Cummings limit") {
    for (double P : {0.01, 0.1, 1.0, 10.0}) {
        const auto p = params(10.0, 1e-6, P);
        const auto o = observables_from_moments(p, solve_moments(p));
        const double ks = kappa_rates(p).kappa_sigma;
        CHECK(o.n_a == doctest::Approx(P / (p.gamma_sigma + P) * ks / p.gamma_a).epsilon(0.05));
        // antibunched while the pump stays below the Purcell rate
        if (P < ks) CHECK(o.g2 < 0.05);
    }
}

TEST_CASE("zero-pump g2 limit") {
    for (double ga : {0.1, 1.0, 10.0}) {
        const auto p = params(ga, 0.00334, 1e-8 * 1.0);
        const auto o = observables_from_moments(p, solve_moments(p));
        CHECK(o.g2 == doctest::Approx(approx::g2_zero_pump(p)).epsilon(1e-4));
    }
}

TEST_CASE("linear-regime g2 stays in [0, 2/3] without emitter decay") {
    for (double ga : {0.1, 0.22, 0.46, 1.0, 2.15, 4.64, 10.0}) {
        const auto p = params(ga, 0.0, 1e-8);
        const auto o = observables_from_moments(p, solve_moments(p));
        CHECK(o.g2 >= 0.0);
        CHECK(o.g2 <= 2.0 / 3.0);
        for (double P : logspace(1e-12, 1e-5, 8)) {
            const auto q = params(ga, 1e-6, P);
            if (approx::classify_regime(q).regime != approx::Regime::Linear) continue;
            const double g2 = observables_from_moments(q, solve_moments(q)).g2;
            CHECK(g2 >= 0.0);
            CHECK(g2 <= 2.0 / 3.0);
        }
    }
}

TEST_CASE("pump series") {
    const auto p = params(10.0, 0.00334, 0.0);
    const auto s = perturbative_series(p, 40, 3);
    CHECK(s.f[1][0] == doctest::Approx(approx::slope_C1(p)).epsilon(1e-10));
    for (int n = 0; n <= s.n_max; ++n) {
        CHECK(s.f[0][n] == 0.0);
        CHECK(s.beta[0][n] == 0.0);
    }
    const auto full = perturbative_series(p, 40, 3, SeriesExpansion::full_pump);
    // the expansions first differ at second order, where the Gamma_sigma terms enter
    for (int t = 0; t <= 1; ++t) {
        for (int n = 0; n <= 40; ++n) CHECK(full.f[t][n] == doctest::Approx(s.f[t][n]).epsilon(1e-12));
    }

    SUBCASE("explicit pump expansion, weak coupling") {
        for (double P : logspace(1e-4, 1.0, 13)) {
            auto q = p;
            q.P_sigma = P;
            const double na = solve_moments(q).n_a();
            CHECK(perturbative_series(q, 40, 1).n_a() == doctest::Approx(na).epsilon(0.02));
            double prev = 1.0;
            for (int t : {1, 2, 3}) {
                const double err = std::abs(perturbative_series(q, 40, t).n_a(P) - na) / na;
                CHECK((err < prev || err < 1e-14));
                prev = err;
            }
        }
        auto q = p;
        q.P_sigma = 0.5;
        CHECK_THROWS_AS(perturbative_series(q, 40, 3).n_a(0.25), std::invalid_argument);
    }
    SUBCASE("full expansion converges only near zero pump") {
        for (double P : {0.001, 0.01, 0.03}) {
            auto q = p;
            q.P_sigma = P;
            const double na = solve_moments(q).n_a();
            double prev = 1.0;
            for (int t : {1, 2, 3, 5}) {
                const double err =
                    std::abs(perturbative_series(p, 40, t, SeriesExpansion::full_pump).n_a(P) - na) / na;
                CHECK(err < prev);
                prev = err;
            }
        }
        for (double P : logspace(1e-4, 0.1, 13)) {
            auto q = p;
            q.P_sigma = P;
            CHECK(full.n_a(P) == doctest::Approx(solve_moments(q).n_a()).epsilon(0.02));
        }
        auto q = p;
        q.P_sigma = 1.0;
        CHECK(std::abs(full.n_a(1.0) / solve_moments(q).n_a() - 1.0) > 1.0);
    }
}

TEST_CASE("truncation cap is enforced") {
    MomentOptions mo;
    mo.n_max_cap = 20;
    CHECK_THROWS_AS(solve_moments(params(0.1, 0.00334, 7.0), mo), TruncationNotConverged);
}

TEST_CASE("precision loss deep in lasing is reported, not returned") {
    // N_a[n]/n! spans about exp(n_a), beyond quad precision once n_a reaches ~100
    const auto ok = params(0.01, 0.00334, 1.0);
    exact::SteadyOptions so;
    so.n_max = 400;
    CHECK(solve_moments(ok).n_a() == doctest::Approx(exact::steady_state(ok, so).n_a).epsilon(1e-8));

    const auto deep = params(0.01, 0.00334, 3.0);
    CHECK_THROWS_AS(solve_moments(deep), PrecisionLoss);
    CHECK_THROWS_AS(solve_moments_ratio(deep, 1200), PrecisionLoss);
    MomentOptions fixed;
    fixed.n_max = 800;
    CHECK_THROWS_AS(solve_moments(deep, fixed), PrecisionLoss);
}
