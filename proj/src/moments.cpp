// moments.cpp — photon moments of the incoherently pumped Jaynes-Cummings model

#include "jcl/moments.hpp"

#include "jcl/errors.hpp"
#include "jcl/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace jcl {

double PhotonMoments::N_a(int n) const {
    if (n < 0 || n > n_max) return 0.0;
    return Na[n] * std::exp(std::lgamma(n + 1.0));
}

namespace {

// The lasing-regime solution is sensitive to rounding in the row coefficients themselves,
// so both the coefficients and the banded solve are carried in quad precision.
using Wide = __float128;

template <class T>
struct Row {
    T b, c, a;
};

template <class T>
Row<T> row_in(const SystemParams& p, int n) {
    const T Gs = T(p.gamma_sigma) + T(p.P_sigma);
    const T ga = T(p.gamma_a);
    const T P = T(p.P_sigma);
    const T GT = Gs + T(p.gamma_phi) + T(2 * n - 1) * ga;
    // 1/C_eff[n] = gamma_a (Gamma_T^2 + 4 delta^2) / (4 g^2 Gamma_T)
    const T d = T(p.delta), g = T(p.g);
    const T inv_C = p.gamma_a > 0.0 ? ga * (GT * GT + T(4) * d * d) / (T(4) * g * g * GT) : T(0);
    Row<T> r;
    r.b = inv_C + T(n) * ga / (Gs + T(n - 1) * ga) - T(2) * P / (Gs + T(n) * ga) + T(1);
    r.c = P / (Gs + T(n - 1) * ga);
    r.a = T(2) * ga / (Gs + T(n) * ga);
    return r;
}

}  // namespace

RecurrenceRow recurrence_row(const SystemParams& p, int n) {
    const Row<double> r = row_in<double>(p, n);
    return {r.b, r.c, r.a};
}

namespace {

void check_preconditions(const SystemParams& p) {
    p.validate();
    if (p.P_a != 0.0) throw std::invalid_argument("moment recurrence requires P_a = 0");
    if (p.gamma_a == 0.0 && p.P_sigma >= p.gamma_sigma && p.P_sigma > 0.0) {
        throw NoSteadyState("gamma_a = 0 with P_sigma >= gamma_sigma: the cavity population grows without bound");
    }
}

PhotonMoments vacuum(int n_max) {
    PhotonMoments m;
    m.n_max = n_max;
    m.Na.assign(n_max + 1, 0.0);
    m.Na[0] = 1.0;
    m.Nsigma.assign(n_max + 1, 0.0);
    m.Nas_real.assign(n_max + 1, 0.0);
    m.Nas_imag.assign(n_max + 1, 0.0);
    return m;
}

void fill_mixed(const SystemParams& p, PhotonMoments& m) {
    const double Gs = p.Gamma_sigma(), ga = p.gamma_a, P = p.P_sigma;
    for (int n = 1; n <= m.n_max; ++n) {
        m.Nsigma[n] = (P * m.Na[n - 1] - ga * n * m.Na[n]) / (n * (Gs + (n - 1) * ga));
        m.Nas_imag[n] = ga / (2.0 * p.g) * m.Na[n];
        m.Nas_real[n] = -p.delta * ga * m.Na[n] / p.g / total_decoherence(p, n);
    }
}

// Relative error of F[0] = n_a per unit rounding, propagated down the continued fraction
// F[n-1] = n c / (a F[n] + b).
double error_growth(const SystemParams& p, int n_max) {
    Wide F = 0, e = 0;
    for (int n = n_max; n >= 1; --n) {
        const Row<Wide> row = row_in<Wide>(p, n);
        const Wide den = row.a * F + row.b;
        const Wide s = row.a * F / den;
        e = Wide(1) + (s < 0 ? -s : s) * e;
        F = Wide(n) * row.c / den;
    }
    return static_cast<double>(e);
}

bool physical(const PhotonMoments& m) {
    double mx = 0.0;
    for (double v : m.Na) {
        if (!std::isfinite(v)) return false;
        mx = std::max(mx, std::abs(v));
    }
    if (m.Na.size() > 1 && m.Na[1] < 0.0) return false;
    for (double v : m.Na) {
        if (v < -1e-12 * mx) return false;
    }
    return true;
}

// A lost solve usually lands on the dominant (negative) solution, where error_growth looks benign.
void require_usable(const SystemParams& p, const PhotonMoments& m) {
    if (!physical(m)) {
        throw PrecisionLoss("moment recurrence produced negative N_a[n] at cutoff " + std::to_string(m.n_max) +
                            " (precision lost or cutoff too small); use the Liouvillian route");
    }
    if (p.P_sigma == 0.0) return;
    const double err = error_growth(p, m.n_max) * 1.93e-34;   // quad rounding 2^-112
    if (!(err < 1e-12)) {
        throw PrecisionLoss("moment recurrence amplifies rounding to " + std::to_string(err) +
                            " relative error in n_a; use the Liouvillian route");
    }
}

PhotonMoments solve_raw(const SystemParams& p, int n_max) {
    if (n_max < 2) throw std::invalid_argument("solve_moments: n_max must be >= 2");
    PhotonMoments m = vacuum(n_max);
    if (p.P_sigma == 0.0) return m;

    std::vector<Wide> sub(n_max), diag(n_max), sup(n_max), rhs(n_max, Wide(0));
    for (int n = 1; n <= n_max; ++n) {
        const Row<Wide> row = row_in<Wide>(p, n);
        const int i = n - 1;
        diag[i] = -row.b;
        if (n > 1) {
            sub[i] = row.c;
        } else {
            rhs[i] = -row.c;
        }
        sup[i] = n < n_max ? -row.a * Wide(n + 1) : Wide(0);
    }
    const auto x = num::solve_tridiagonal(sub, diag, sup, rhs);
    for (int n = 1; n <= n_max; ++n) m.Na[n] = static_cast<double>(x[n - 1]);
    fill_mixed(p, m);
    return m;
}

PhotonMoments solve_fixed(const SystemParams& p, int n_max) {
    PhotonMoments m = solve_raw(p, n_max);
    require_usable(p, m);
    return m;
}

double tail_ratio(const PhotonMoments& m) {
    double mx = 0.0;
    for (double v : m.Na) mx = std::max(mx, std::abs(v));
    return mx > 0.0 ? std::abs(m.Na.back()) / mx : 0.0;
}

int initial_cutoff(const SystemParams& p) {
    double est = 0.0;
    if (p.gamma_a > 0.0) {
        const double Gs = p.Gamma_sigma();
        const double ks = kappa_rates(p).kappa_sigma;
        est = Gs / (2.0 * p.gamma_a) * (1.0 - 2.0 * p.gamma_sigma / Gs - (Gs + p.gamma_phi) / ks);
        est = std::min(est, ks / p.gamma_a);
    }
    est = std::max(est, 0.0);
    return std::max(16, static_cast<int>(std::ceil(est + 12.0 * std::sqrt(est))) + 16);
}

}  // namespace

PhotonMoments solve_moments(const SystemParams& p, const MomentOptions& opt) {
    check_preconditions(p);
    if (opt.n_max > 0) return solve_fixed(p, opt.n_max);
    if (p.P_sigma == 0.0) return vacuum(16);
    if (p.gamma_a == 0.0) return solve_fixed(p, 16);   // lower-bidiagonal: exact at any cutoff

    int n = std::min(initial_cutoff(p), opt.n_max_cap);
    PhotonMoments prev = solve_raw(p, n);
    while (true) {
        const int next = 2 * n;
        if (next > opt.n_max_cap) {
            throw TruncationNotConverged(
                "photon cutoff exceeded cap " + std::to_string(opt.n_max_cap), n);
        }
        PhotonMoments cur = solve_raw(p, next);
        const double na = cur.n_a();
        if (std::abs(na - prev.n_a()) <= opt.tol * std::abs(na) && tail_ratio(cur) < 1e-15) {
            require_usable(p, cur);
            return cur;
        }
        prev = std::move(cur);
        n = next;
    }
}

PhotonMoments solve_moments_ratio(const SystemParams& p, int n_max) {
    check_preconditions(p);
    PhotonMoments m = vacuum(n_max);
    if (p.P_sigma == 0.0) return m;
    // F[n-1] = N_a[n]/N_a[n-1] = n c / (a F[n] + b)
    Wide F = 0;
    std::vector<double> Fs(n_max + 1, 0.0);
    for (int n = n_max; n >= 1; --n) {
        const Row<Wide> row = row_in<Wide>(p, n);
        F = Wide(n) * row.c / (row.a * F + row.b);
        Fs[n - 1] = static_cast<double>(F);
    }
    for (int n = 1; n <= n_max; ++n) m.Na[n] = m.Na[n - 1] * Fs[n - 1] / n;
    fill_mixed(p, m);
    require_usable(p, m);
    return m;
}

double g2_from_na(const SystemParams& p, double n_a) {
    const double Gs = p.Gamma_sigma(), ga = p.gamma_a, P = p.P_sigma;
    const double inv_C1 = 1.0 / effective_rates(p, 1).C_eff;
    return (Gs + ga) / (2.0 * ga * n_a) *
           (P / (n_a * Gs) + 2.0 * P / (Gs + ga) - inv_C1 - (ga + Gs) / Gs);
}

Observables observables_from_moments(const SystemParams& p, const PhotonMoments& m) {
    Observables o;
    o.n_a = m.n_a();
    const double Gs = p.Gamma_sigma();
    o.n_sigma = Gs > 0.0 ? (p.P_sigma - p.gamma_a * o.n_a) / Gs : 0.0;
    if (!(o.n_a > 0.0)) {
        o.g2_defined = false;
        o.g2_consistent = false;
        return o;
    }
    o.g2 = 2.0 * m.Na[2] / (o.n_a * o.n_a);
    if (p.gamma_a > 0.0) {
        o.g2_identity = g2_from_na(p, o.n_a);
        // the identity amplifies the rounding of n_a by the size of its cancelling terms
        const double A = (Gs + p.gamma_a) / (2.0 * p.gamma_a * o.n_a);
        const double t1 = A * p.P_sigma / (o.n_a * Gs);
        const double t2 = A * std::abs(2.0 * p.P_sigma / (Gs + p.gamma_a) - 1.0 / effective_rates(p, 1).C_eff -
                                       (p.gamma_a + Gs) / Gs);
        const double floor = 64.0 * std::numeric_limits<double>::epsilon() * (2.0 * t1 + t2);
        o.g2_consistent = std::abs(o.g2_identity - o.g2) < std::max(1e-8 * std::abs(o.g2), floor);
    } else {
        o.g2_identity = o.g2;
    }
    o.mandel_Q = o.n_a * (o.g2 - 1.0);
    return o;
}

double SeriesCoefficients::n_a(double P_sigma) const {
    if (expansion == SeriesExpansion::explicit_pump && P_sigma != expansion_pump) {
        throw std::invalid_argument("SeriesCoefficients::n_a: explicit_pump coefficients hold only at P_sigma = " +
                                    std::to_string(expansion_pump));
    }
    double s = 0.0, pw = 1.0;
    for (int t = 0; t <= order_reached; ++t) {
        s += f[t][0] * pw;
        pw *= P_sigma;
    }
    return s;
}

SeriesCoefficients perturbative_series(const SystemParams& p, int n_max, int t_max, SeriesExpansion expansion) {
    p.validate();
    if (p.P_a != 0.0) throw std::invalid_argument("perturbative_series requires P_a = 0");
    if (!(p.gamma_a > 0.0)) throw std::domain_error("perturbative_series requires gamma_a > 0");
    if (expansion == SeriesExpansion::full_pump && !(p.gamma_sigma > 0.0)) {
        throw std::domain_error("full_pump series requires gamma_sigma > 0 (the n = 1 ratio is not analytic at zero pump otherwise)");
    }
    if (!(p.Gamma_sigma() > 0.0)) throw std::domain_error("perturbative_series requires gamma_sigma + P_sigma > 0");
    if (t_max < 1 || n_max < t_max) throw std::invalid_argument("perturbative_series: need 1 <= t_max <= n_max");

    using num::Series;
    const std::size_t K = static_cast<std::size_t>(t_max);
    const double ga = p.gamma_a, gp = p.gamma_phi, g2 = p.g * p.g;
    const Series P = Series::variable(K, 0.0);
    const Series Gs = expansion == SeriesExpansion::full_pump ? Series::variable(K, p.gamma_sigma)
                                                              : Series(K, p.gamma_sigma + p.P_sigma);

    SeriesCoefficients sc;
    sc.expansion = expansion;
    sc.expansion_pump = p.P_sigma;
    sc.t_max = t_max;
    sc.n_max = n_max;
    sc.alpha.assign(K + 1, std::vector<double>(n_max + 2, 0.0));
    sc.beta.assign(K + 1, std::vector<double>(n_max + 2, 0.0));
    sc.f.assign(K + 1, std::vector<double>(n_max + 2, 0.0));

    for (int n = 1; n <= n_max + 1; ++n) {
        const Series A = (Gs + n * ga).reciprocal() * (2.0 * ga);
        const Series GT = Gs + (gp + (2.0 * n - 1.0) * ga);
        const Series invC = (GT * GT + 4.0 * p.delta * p.delta) * GT.reciprocal() * (ga / (4.0 * g2));
        const Series B = invC + (Gs + (n - 1) * ga).reciprocal() * (n * ga) -
                         P * (Gs + n * ga).reciprocal() * 2.0 + 1.0;
        const Series C = P * (Gs + (n - 1) * ga).reciprocal() * static_cast<double>(n);
        const Series alpha = B / A;
        const Series beta = C / A;
        for (std::size_t k = 0; k <= K; ++k) {
            sc.alpha[k][n] = alpha[k];
            sc.beta[k][n] = beta[k];
        }
    }

    sc.order_reached = t_max;
    for (int t = 1; t <= t_max; ++t) {
        bool overflow = false;
        for (int n = 0; n <= n_max; ++n) {
            double s = sc.beta[t][n + 1];
            for (int q = 1; q <= t - 1; ++q) {
                s -= sc.f[q][n] * (sc.f[t - q][n + 1] + sc.alpha[t - q][n + 1]);
            }
            const double v = s / sc.alpha[0][n + 1];
            if (!std::isfinite(v) || std::abs(v) > 1e300) overflow = true;
            sc.f[t][n] = v;
        }
        if (overflow) {
            sc.order_reached = t - 1;
            break;
        }
    }
    return sc;
}

}  // namespace jcl
