// approximations.cpp — closed-form and reduced models of the one-atom laser

#include "jcl/approximations.hpp"

#include "jcl/errors.hpp"
#include "jcl/moments.hpp"
#include "jcl/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace jcl::approx {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double inv_kappa_sigma(const SystemParams& p) {
    const double ks = kappa_rates(p).kappa_sigma;
    return std::isinf(ks) ? 0.0 : 1.0 / ks;
}

// Linear-model populations with the emitter broadening replaced by G; divided through by
// kappa_sigma so that gamma_a = 0 (kappa_sigma infinite) needs no special case.
LinearVariant linear_variant(const SystemParams& p, double G) {
    const double ik = inv_kappa_sigma(p);
    const double P = p.P_sigma;
    const double den = (G + p.gamma_a) + G * (G + p.gamma_a + p.gamma_phi) * ik;
    const double num_s = 1.0 + (p.gamma_a + p.gamma_sigma + p.gamma_phi) * ik;
    LinearVariant v;
    if (P == 0.0) return v;
    if (den == 0.0) {
        v.divergent = true;
        v.n_a = std::copysign(kInf, P);
        v.n_sigma = std::copysign(kInf, P * num_s);
        return v;
    }
    v.n_a = P / den;
    v.n_sigma = num_s * P / den;
    v.negative = v.n_a < 0.0 || v.n_sigma < 0.0;
    return v;
}

}  // namespace

std::string to_string(Regime r) {
    switch (r) {
        case Regime::Linear: return "linear";
        case Regime::Quantum: return "quantum";
        case Regime::Lasing: return "lasing";
        case Regime::Quenching: return "quenching";
        case Regime::Thermal: return "thermal";
    }
    return "unknown";
}

double slope_C1(const SystemParams& p) {
    const double ik = inv_kappa_sigma(p);
    const double gs = p.gamma_sigma, ga = p.gamma_a;
    return 1.0 / ((gs + ga) + gs * (gs + ga + p.gamma_phi) * ik);
}

LinearModels linear_models(const SystemParams& p) {
    p.validate();
    LinearModels m;
    m.bosonic = linear_variant(p, p.gamma_sigma - p.P_sigma);
    m.truncated_jc = linear_variant(p, p.gamma_sigma + p.P_sigma);
    m.C1 = slope_C1(p);

    // x^2 + x (ks + ga + gphi) + ks ga = 0 with x = gamma_sigma - P_sigma
    const double ks = kappa_rates(p).kappa_sigma;
    if (std::isinf(ks)) {
        m.P_minus = p.gamma_sigma;
        m.P_plus = kInf;
    } else {
        const double s = ks + p.gamma_a + p.gamma_phi;
        const double disc = s * s - 4.0 * ks * p.gamma_a;
        if (disc < 0.0) {
            m.P_minus = m.P_plus = kNaN;
        } else {
            const double x1 = -0.5 * (s + std::sqrt(disc));
            const double x2 = x1 != 0.0 ? ks * p.gamma_a / x1 : 0.0;
            m.P_plus = p.gamma_sigma - x1;
            m.P_minus = p.gamma_sigma - x2;
        }
    }
    return m;
}

double g2_zero_pump(const SystemParams& p) {
    p.validate();
    const double ga = p.gamma_a, gs = p.gamma_sigma, gp = p.gamma_phi;
    const double ik = inv_kappa_sigma(p);
    const double num = (ga + gs) + gs * (ga + gs + gp) * ik;
    const double den = (3.0 * ga + gs) + (ga + gs) * (3.0 * ga + gs + gp) * ik;
    if (den == 0.0) return kNaN;
    return 2.0 * num / den;
}

double na_for_g2(const SystemParams& p, double g2) {
    const double Gs = p.Gamma_sigma(), ga = p.gamma_a, P = p.P_sigma;
    if (P == 0.0) return 0.0;
    if (!(ga > 0.0) || !(Gs > 0.0) || !(g2 > 0.0)) {
        throw std::domain_error("na_for_g2 requires gamma_a > 0, Gamma_sigma > 0 and g2 > 0");
    }
    const double inv_C1 = 1.0 / effective_rates(p, 1).C_eff;
    // 2 g2 ga n^2 - (Gs + ga) B n - (Gs + ga) P / Gs = 0
    const double A = 2.0 * g2 * ga;
    const double Bq = (Gs + ga) * (2.0 * P / (Gs + ga) - inv_C1 - (ga + Gs) / Gs);
    const double Cq = (Gs + ga) * P / Gs;
    const double root = std::sqrt(Bq * Bq + 4.0 * A * Cq);
    return Bq >= 0.0 ? (Bq + root) / (2.0 * A) : 2.0 * Cq / (root - Bq);
}

SemiclassicalResult semiclassical(const SystemParams& p) {
    p.validate();
    SemiclassicalResult r;
    const double Gs = p.Gamma_sigma(), ga = p.gamma_a, gs = p.gamma_sigma, gp = p.gamma_phi;
    const double ks = kappa_rates(p).kappa_sigma;
    const double ik = inv_kappa_sigma(p);

    const double num = Gs - 2.0 * gs - Gs * (Gs + gp) * ik;
    r.n_a_unclamped = num == 0.0 ? 0.0 : num / (2.0 * ga);
    r.clamped = r.n_a_unclamped < 0.0;
    r.n_a = std::max(r.n_a_unclamped, 0.0);
    r.n_sigma = 0.5 * (1.0 + (Gs + gp) * ik);
    r.F_a = Gs / (2.0 * ga);
    r.F_sigma = (Gs + gp) * ik;
    r.C2 = 1.0 / (2.0 * ga);
    r.max_n_a = (ks - 4.0 * gs - 2.0 * gp) / (8.0 * ga);
    r.P_at_max = 0.5 * (ks - 2.0 * gs - gp);
    r.P_max = ks - 3.0 * gs - 2.0 * gp;
    r.n_a_poisson_root = (ga > 0.0 && Gs > 0.0) ? na_for_g2(p, 1.0) : kNaN;
    r.in_validity_window = ga * kMuchLess <= p.g && p.P_sigma >= kMuchLess * std::max(gs, ga);
    return r;
}

ThermalResult thermal_na(const SystemParams& p) {
    p.validate();
    ThermalResult r;
    const double P = p.P_sigma;
    if (p.gamma_a == 0.0 && p.P_a == 0.0) {
        r.exact_limit = true;
        const double gs = p.gamma_sigma;
        r.n_a = P < gs ? P / (gs - P) : kInf;
        r.n_sigma = (gs + P) > 0.0 ? P / (gs + P) : 0.0;
        return r;
    }
    if (!(p.gamma_a > 0.0)) throw std::domain_error("thermal_na requires gamma_a > 0");
    const double Gs = p.Gamma_sigma(), ga = p.gamma_a, gs = p.gamma_sigma, gp = p.gamma_phi;
    if (P == 0.0 || Gs == 0.0) return r;
    const double ik = inv_kappa_sigma(p);
    const double bracket = 1.0 + (Gs + ga + gp) * ik - 2.0 * P / (Gs + ga) + ga / Gs;
    const double root = (Gs + ga) * std::sqrt(16.0 * P * ga / Gs / (Gs + ga) + bracket * bracket);
    r.n_a = (root - Gs * ((Gs + gp) * ik + 2.0 * gs / Gs - 1.0) - ga * ((2.0 * Gs + gp) * ik + 2.0) -
             ga * ga / Gs * (Gs * ik + 1.0)) /
            (8.0 * ga);
    r.n_sigma = (P - ga * r.n_a) / Gs;
    return r;
}

std::vector<double> CothermalState::distribution(double rel_tail) const {
    return stats::cothermal(n_coh, n_th, rel_tail);
}

double CothermalState::moment(int k) const { return stats::cothermal_moment(k, n_coh, n_th); }

std::pair<double, double> cothermal_residuals(const SystemParams& p, double n_a, double n_coh) {
    const RecurrenceRow r1 = recurrence_row(p, 1);
    const RecurrenceRow r2 = recurrence_row(p, 2);
    const double N2 = 2.0 * n_a * n_a - n_coh * n_coh;
    const double N3 = 6.0 * n_a * n_a * n_a - 9.0 * n_a * n_coh * n_coh + 4.0 * n_coh * n_coh * n_coh;
    return {-r1.b * n_a + r1.c - r1.a * N2, -r2.b * N2 + 2.0 * r2.c * n_a - r2.a * N3};
}

namespace {

// With s = n_coh/n_a, the n = 1 equation is a quadratic in n_a with exactly one positive
// root; the n = 2 equation then becomes a scalar function of s on [0, sqrt 2].
struct CothermalReduced {
    RecurrenceRow r1, r2;

    double n_a(double s) const {
        const double q = r1.a * (2.0 - s * s);
        const double disc = std::sqrt(r1.b * r1.b + 4.0 * q * r1.c);
        const double den = r1.b + disc;
        if (r1.b >= 0.0) return 2.0 * r1.c / den;
        return q > 0.0 ? (disc - r1.b) / (2.0 * q) : kInf;
    }

    // n = 2 residual divided by n_a
    double h(double s) const {
        const double n = n_a(s);
        if (!std::isfinite(n)) return kNaN;
        return -r2.b * n * (2.0 - s * s) + 2.0 * r2.c - r2.a * n * n * (6.0 - 9.0 * s * s + 4.0 * s * s * s);
    }
};

double bisect(const CothermalReduced& f, double lo, double hi) {
    double flo = f.h(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f.h(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

CothermalState cothermal(const SystemParams& p) {
    p.validate();
    if (p.P_a != 0.0) throw std::invalid_argument("cothermal requires P_a = 0");
    if (!(p.gamma_a > 0.0)) throw std::domain_error("cothermal requires gamma_a > 0");
    CothermalState st;
    if (p.P_sigma == 0.0) {
        st.g2_defined = false;
        return st;
    }

    CothermalReduced f{recurrence_row(p, 1), recurrence_row(p, 2)};
    const double s_max = std::sqrt(2.0) * (1.0 - 1e-12);
    constexpr int kScan = 4000;

    double best_s = kNaN, best_res = kInf;
    double s_prev = 0.0, h_prev = f.h(0.0);
    for (int i = 1; i <= kScan; ++i) {
        const double s = s_max * i / kScan;
        const double hs = f.h(s);
        if (std::isfinite(h_prev) && std::isfinite(hs) && (h_prev == 0.0 || (h_prev > 0.0) != (hs > 0.0))) {
            const double root = h_prev == 0.0 ? s_prev : bisect(f, s_prev, s);
            const double n = f.n_a(root);
            const auto [e1, e2] = cothermal_residuals(p, n, root * n);
            const double res = std::hypot(e1 / std::max(std::abs(f.r1.c), 1e-300),
                                          e2 / std::max(std::abs(f.r2.c * n), 1e-300));
            if (res < best_res) {
                best_res = res;
                best_s = root;
            }
        }
        s_prev = s;
        h_prev = hs;
    }
    if (!std::isfinite(best_s)) {
        throw NoPhysicalRoot("cothermal: no root with n_a >= 0 and 0 <= n_coh <= sqrt(2) n_a");
    }

    st.n_a = f.n_a(best_s);
    st.n_coh = best_s * st.n_a;
    st.n_th = st.n_a - st.n_coh;
    st.g2 = 2.0 - best_s * best_s;
    st.mandel_Q = st.n_a * (st.g2 - 1.0);
    st.n_sigma = (p.P_sigma - p.gamma_a * st.n_a) / p.Gamma_sigma();
    st.residual = best_res;
    return st;
}

RegimeLabel classify_regime(const SystemParams& p) {
    p.validate();
    RegimeLabel r;
    const SemiclassicalResult sc = semiclassical(p);
    const double g1 = effective_coupling(p, 1);
    r.linear_edge = p.gamma_sigma;
    r.quantum_edge = std::max(r.linear_edge, g1);
    r.lasing_edge = std::max(r.quantum_edge, sc.P_at_max);
    r.quench_edge = std::max(r.lasing_edge, sc.P_max);

    const double P = p.P_sigma;
    if (P < r.linear_edge) {
        r.regime = Regime::Linear;
    } else if (P <= r.quantum_edge) {
        r.regime = Regime::Quantum;
    } else if (P < r.lasing_edge) {
        r.regime = Regime::Lasing;
    } else if (P < r.quench_edge) {
        r.regime = Regime::Quenching;
    } else {
        r.regime = Regime::Thermal;
    }

    const double ks = kappa_rates(p).kappa_sigma;
    const double rates = std::max({p.gamma_a, p.gamma_sigma, p.gamma_phi});
    r.spectrum_window = rates * kMuchLess <= g1 && g1 < P && P * kMuchLess <= ks;

    std::ostringstream os;
    os << "linear: P < gamma_sigma; quantum: P <= g_eff[1]; lasing: P < kappa_sigma/2 (1 - (2 gamma_sigma + gamma_phi)/kappa_sigma); "
       << "quenching: P < kappa_sigma - 3 gamma_sigma - 2 gamma_phi; thermal otherwise; edges clamped monotone; "
       << "spectrum window: " << kMuchLess << " max(gamma_a, gamma_sigma, gamma_phi) <= g_eff[1] < P, "
       << kMuchLess << " P <= kappa_sigma";
    r.thresholds = os.str();
    return r;
}

double lasing_midpoint(const SystemParams& p) {
    SystemParams q = p;
    q.P_sigma = 0.0;
    const RegimeLabel r = classify_regime(q);
    return std::sqrt(std::max(r.quantum_edge, 1e-300) * r.lasing_edge);
}

}  // namespace jcl::approx
