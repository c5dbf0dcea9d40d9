// test_approximations.cpp — linear, semiclassical, thermal and cothermal estimates

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jcl/approximations.hpp"
#include "jcl/exact.hpp"
#include "jcl/moments.hpp"
#include "jcl/numerics.hpp"
#include "jcl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace jcl;
using namespace jcl::approx;

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

double ks(const SystemParams& p) { return kappa_rates(p).kappa_sigma; }

}  // namespace

TEST_CASE("bosonic pump thresholds are the roots of the denominator quadratic") {
    const auto l = linear_models(params(0.1, 0.0, 1.0));
    CHECK(l.P_minus == doctest::Approx(0.1).epsilon(1e-4));
    CHECK(l.P_plus == doctest::Approx(40.0).epsilon(1e-4));
    // independent root: x^2 + x (k + ga) + k ga = 0 has roots -k and -ga, P = -x at gamma_sigma = 0
    const double k = 4.0 / 0.1;
    CHECK(l.P_plus == doctest::Approx(k).epsilon(1e-12));
}

TEST_CASE("both linear variants agree at weak pump and saturate at large pump") {
    const auto p = params(0.1, 0.00334, 1e-7);
    const auto l = linear_models(p);
    CHECK(l.bosonic.n_a == doctest::Approx(l.C1 * p.P_sigma).epsilon(1e-4));
    CHECK(l.truncated_jc.n_a == doctest::Approx(l.C1 * p.P_sigma).epsilon(1e-4));
    for (double P : {1e4, 1e6}) {
        const auto q = params(0.1, 0.00334, P);
        const auto m = linear_models(q);
        CHECK(m.bosonic.n_a == doctest::Approx(ks(q) / P).epsilon(0.01));
        CHECK(m.truncated_jc.n_a == doctest::Approx(ks(q) / P).epsilon(0.01));
    }
}

TEST_CASE("bosonic variant is exact without cavity loss below the emitter threshold") {
    for (double P : {0.1, 0.3, 0.45}) {
        const auto p = params(0.0, 0.5, P, 0.2);
        const double exact_na = solve_moments(p).n_a();
        CHECK(linear_models(p).bosonic.n_a == doctest::Approx(exact_na).epsilon(1e-10));
    }
}

TEST_CASE("truncated-JC variant tracks the exact solution for a bad cavity") {
    for (double P : logspace(1e-3, 1e3, 25)) {
        const auto p = params(10.0, 0.00334, P);
        const double na = exact::steady_state(p).n_a;
        CHECK(linear_models(p).truncated_jc.n_a == doctest::Approx(na).epsilon(0.05));
    }
}

TEST_CASE("zero-pump g2") {
    SUBCASE("closed form at gamma_sigma = gamma_phi = 0") {
        const auto p = params(0.1, 0.0, 0.0);
        const double k = ks(p);
        CHECK(g2_zero_pump(p) == doctest::Approx(2.0 * k / (3.0 * (k + 0.1))).epsilon(1e-12));
        CHECK(g2_zero_pump(params(1e-6, 0.0, 0.0)) == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
    }
    SUBCASE("two-photon truncated steady state") {
        const auto p = params(0.1, 0.00334, 1e-9, 0.01);
        const PhotonMoments m = solve_moments(p, MomentOptions{.n_max = 2});
        const double g2 = 2.0 * m.Na[2] / (m.n_a() * m.n_a());
        CHECK(g2_zero_pump(params(0.1, 0.00334, 0.0, 0.01)) == doctest::Approx(g2).epsilon(1e-6));
    }
    SUBCASE("weak coupling limit") {
        auto p = params(0.1, 0.05, 0.0, 0.02);
        p.g = 1e-4;
        const double ga = 0.1, gs = 0.05, gf = 0.02;
        const double lim = 2.0 * gs * (ga + gs + gf) / ((ga + gs) * (3.0 * ga + gs + gf));
        CHECK(g2_zero_pump(p) == doctest::Approx(lim).epsilon(0.01));
        auto q = p;
        q.P_sigma = 1e-9;
        const auto st = exact::steady_state(q);
        CHECK(st.g2 == doctest::Approx(lim).epsilon(0.01));
    }
}

TEST_CASE("semiclassical solution") {
    const auto p = params(0.1, 0.0, 4.0);
    const auto s = semiclassical(p);
    CHECK(s.n_a == doctest::Approx(18.0).epsilon(1e-10));
    CHECK(s.n_sigma == doctest::Approx(0.55).epsilon(1e-10));
    CHECK(s.P_at_max == doctest::Approx(20.0).epsilon(1e-10));
    CHECK(s.P_max == doctest::Approx(40.0).epsilon(1e-10));
    CHECK(s.n_a_poisson_root == doctest::Approx(na_for_g2(p, 1.0)).epsilon(1e-10));
    const auto ex = exact::steady_state(p);
    CHECK(s.n_a == doctest::Approx(ex.n_a).epsilon(0.15));
    CHECK(s.n_sigma == doctest::Approx(ex.n_sigma).epsilon(0.15));
    CHECK(s.in_validity_window);
}

TEST_CASE("semiclassical clamps beyond the quench point") {
    const auto s = semiclassical(params(0.1, 0.0, 60.0));
    CHECK(s.clamped);
    CHECK(s.n_a == 0.0);
    CHECK(s.n_a_unclamped < 0.0);
}

TEST_CASE("semiclassical emitter population stays in [1/2, 1] inside the validity window") {
    for (double P : logspace(0.1, 31.6, 30)) {
        const auto s = semiclassical(params(0.1, 0.00334, P));
        if (!s.in_validity_window) continue;
        CHECK(s.n_sigma >= 0.5 - 1e-12);
        CHECK(s.n_sigma <= 1.0 + 1e-12);
        CHECK(s.n_a >= 0.0);
    }
}

TEST_CASE("thermal estimate") {
    SUBCASE("no cavity loss") {
        const auto t = thermal_na(params(0.0, 1.0, 0.5));
        CHECK(t.exact_limit);
        CHECK(t.n_a == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(t.n_sigma == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
        exact::SteadyOptions opt;
        opt.n_max = 60;
        const auto ex = exact::steady_state(params(0.0, 1.0, 0.5), opt);
        CHECK(ex.n_a == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(ex.n_sigma == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    }
    SUBCASE("g2 = 2 root and limits") {
        for (double P : {1e-3, 0.5, 7.0, 700.0}) {
            const auto p = params(0.1, 0.00334, P);
            CHECK(thermal_na(p).n_a == doctest::Approx(na_for_g2(p, 2.0)).epsilon(1e-10));
        }
        const auto big = params(0.1, 0.00334, 1e5);
        CHECK(thermal_na(big).n_a == doctest::Approx(ks(big) / 1e5).epsilon(0.01));
        const auto small = params(0.1, 0.00334, 1e-8);
        CHECK(thermal_na(small).n_a == doctest::Approx(linear_models(small).bosonic.n_a).epsilon(1e-6));
    }
}

TEST_CASE("cothermal state") {
    SUBCASE("Laguerre moment identities") {
        const auto c = cothermal(params(0.1, 0.00334, 40.0));
        CHECK(c.moment(1) == doctest::Approx(c.n_a).epsilon(1e-12));
        CHECK(c.moment(2) == doctest::Approx(2.0 * c.n_a * c.n_a - c.n_coh * c.n_coh).epsilon(1e-12));
        const auto T = c.distribution();
        double s = 0.0, m1 = 0.0;
        for (std::size_t n = 0; n < T.size(); ++n) {
            s += T[n];
            m1 += n * T[n];
        }
        CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(m1 == doctest::Approx(c.n_a).epsilon(1e-8));
    }
    SUBCASE("limits of the displaced thermal field") {
        const auto p = params(0.1, 0.00334, 1.0);
        const auto th = thermal_na(p);
        const auto r = cothermal_residuals(p, th.n_a, 0.0);
        CHECK(std::abs(r.first) < 1e-10 * std::max(1.0, th.n_a));
        const auto c = cothermal(params(0.1, 0.00334, 7.0));
        CHECK(c.n_th / c.n_a < 0.05);
        CHECK(c.g2 == doctest::Approx(1.0).epsilon(0.01));
    }
    SUBCASE("g2 follows the exact solution across the pump sweep") {
        double worst = 0.0;
        for (double P : logspace(1e-3, 1e3, 31)) {
            const auto p = params(0.1, 0.00334, P);
            const auto c = cothermal(p);
            const auto r = cothermal_residuals(p, c.n_a, c.n_coh);
            CHECK(std::abs(r.first) < 1e-8);
            CHECK(std::abs(r.second) < 1e-8);
            // n_coh > n_a is the sub-Poissonian side, which has no displaced thermal distribution
            CHECK(c.n_coh >= 0.0);
            CHECK(c.n_coh <= std::sqrt(2.0) * c.n_a * (1.0 + 1e-12));
            CHECK((c.g2 >= 1.0) == (c.n_th >= 0.0));
            if (c.n_th < 0.0) CHECK_THROWS_AS(c.distribution(), std::invalid_argument);
            worst = std::max(worst, std::abs(c.g2 - exact::steady_state(p).g2));
        }
        CHECK(worst < 0.2);
    }
    SUBCASE("Mandel Q has a single maximum inside the quench window") {
        const auto grid = logspace(1.0, 1e3, 91);
        std::vector<double> Q;
        for (double P : grid) Q.push_back(cothermal(params(0.1, 0.00334, P)).mandel_Q);
        int maxima = 0;
        std::size_t at = 0;
        for (std::size_t i = 1; i + 1 < Q.size(); ++i) {
            if (Q[i] > Q[i - 1] && Q[i] >= Q[i + 1]) {
                ++maxima;
                at = i;
            }
        }
        CHECK(maxima == 1);
        const auto p = params(0.1, 0.00334, grid[at]);
        CHECK(grid[at] > semiclassical(p).P_at_max);
        CHECK(grid[at] < 2.0 * ks(p));
    }
}

TEST_CASE("regime classifier") {
    CHECK(classify_regime(params(0.1, 0.00334, 7.0)).regime == Regime::Lasing);
    CHECK(classify_regime(params(0.1, 0.00334, 1e-4 * 0.00334)).regime == Regime::Linear);
    const auto p = params(0.1, 0.00334, 1.0);
    CHECK(classify_regime(params(0.1, 0.00334, 2.0 * ks(p))).regime == Regime::Thermal);
    const auto lab = classify_regime(params(0.1, 0.00334, 7.0));
    CHECK(lab.linear_edge <= lab.quantum_edge);
    CHECK(lab.quantum_edge <= lab.lasing_edge);
    CHECK(lab.lasing_edge <= lab.quench_edge);
    CHECK_FALSE(lab.thresholds.empty());
    CHECK(to_string(Regime::Quenching) == "quenching");
}
