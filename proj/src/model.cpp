// model.cpp — effective rates

#include "jcl/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace jcl {

namespace {

void require_rate(double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0) {
        throw std::invalid_argument(std::string(name) + " must be finite and >= 0");
    }
}

double g_eff_for(double g, double delta, double Gamma_T) {
    if (delta == 0.0) return g;
    if (Gamma_T <= 0.0) return 0.0;
    const double r = 2.0 * delta / Gamma_T;
    return g / std::sqrt(1.0 + r * r);
}

}  // namespace

void SystemParams::validate() const {
    if (!std::isfinite(g) || g <= 0.0) throw std::invalid_argument("g must be finite and > 0");
    require_rate(gamma_a, "gamma_a");
    require_rate(gamma_sigma, "gamma_sigma");
    require_rate(P_a, "P_a");
    require_rate(P_sigma, "P_sigma");
    require_rate(gamma_phi, "gamma_phi");
    if (!std::isfinite(delta)) throw std::invalid_argument("delta must be finite");
}

void LaserDriveParams::validate() const {
    require_rate(omega_L, "omega_L");
    require_rate(gamma_sigma, "gamma_sigma");
    require_rate(gamma_phi, "gamma_phi");
    if (!std::isfinite(delta)) throw std::invalid_argument("delta must be finite");
}

double total_decoherence(const SystemParams& p, int n) {
    return p.Gamma_sigma() + p.gamma_phi + (2.0 * n - 1.0) * p.gamma_a;
}

double effective_coupling(const SystemParams& p, int n) {
    return g_eff_for(p.g, p.delta, total_decoherence(p, n));
}

RungRates effective_rates(const SystemParams& p, int n) {
    if (n < 1) throw std::invalid_argument("effective_rates: n must be >= 1");
    RungRates r;
    r.n = n;
    r.Gamma_T = total_decoherence(p, n);
    r.g_eff = g_eff_for(p.g, p.delta, r.Gamma_T);
    const double den = p.gamma_a * r.Gamma_T;
    r.C_eff = den > 0.0 ? 4.0 * r.g_eff * r.g_eff / den : kInf;
    return r;
}

KappaRates kappa_rates(const SystemParams& p) {
    KappaRates k;
    const double ge1 = effective_coupling(p, 1);
    k.kappa_sigma = p.gamma_a > 0.0 ? 4.0 * ge1 * ge1 / p.gamma_a : kInf;
    // cavity-side transfer uses the good-cavity limit gamma_a -> 0
    const double c0 = p.Gamma_sigma() + p.gamma_phi;
    const double ge0 = g_eff_for(p.g, p.delta, c0);
    k.kappa_a = c0 > 0.0 ? 4.0 * ge0 * ge0 / c0 : kInf;
    if (ge1 == 0.0) k.kappa_sigma = 0.0;
    if (ge0 == 0.0) k.kappa_a = 0.0;
    return k;
}

SystemParams in_units_of_g(const SystemParams& p) {
    SystemParams q = p;
    q.g = 1.0;
    q.gamma_a /= p.g;
    q.gamma_sigma /= p.g;
    q.P_a /= p.g;
    q.P_sigma /= p.g;
    q.gamma_phi /= p.g;
    q.delta /= p.g;
    return q;
}

std::string describe(const SystemParams& p) {
    std::ostringstream os;
    os << "g=" << p.g << " gamma_a=" << p.gamma_a << " gamma_sigma=" << p.gamma_sigma
       << " P_a=" << p.P_a << " P_sigma=" << p.P_sigma << " gamma_phi=" << p.gamma_phi
       << " delta=" << p.delta;
    return os.str();
}

}  // namespace jcl
