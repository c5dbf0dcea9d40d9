// spectral.cpp — line algebra shared by every spectrum engine

#include "jcl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace jcl {

std::string to_string(Channel c) { return c == Channel::cavity ? "cavity" : "emitter"; }

Channel channel_from_string(const std::string& s) {
    if (s == "cavity" || s == "a") return Channel::cavity;
    if (s == "emitter" || s == "sigma") return Channel::emitter;
    throw std::invalid_argument("unknown channel '" + s + "'");
}

std::vector<SpectralLine> lines_from_terms(const std::vector<ExpTerm>& terms, double rel_tol) {
    double scale = 0.0;
    for (const auto& t : terms) scale = std::max(scale, std::abs(t.lambda));
    const double tol = rel_tol * scale;

    std::vector<ExpTerm> merged;
    for (const auto& t : terms) {
        auto it = std::find_if(merged.begin(), merged.end(), [&](const ExpTerm& m) {
            return std::abs(m.lambda - t.lambda) <= tol;
        });
        if (it == merged.end()) {
            merged.push_back(t);
        } else {
            it->coeff += t.coeff;
        }
    }

    std::vector<SpectralLine> out;
    out.reserve(merged.size());
    for (const auto& m : merged) {
        SpectralLine l;
        l.gamma_p = -2.0 * m.lambda.real();
        l.omega_p = -m.lambda.imag();
        l.L_p = m.coeff.real();
        l.K_p = m.coeff.imag();
        out.push_back(l);
    }
    std::sort(out.begin(), out.end(), [](const SpectralLine& a, const SpectralLine& b) {
        return a.omega_p < b.omega_p;
    });
    return out;
}

double line_value(const SpectralLine& l, double w) {
    const double hw = 0.5 * l.gamma_p;
    const double d = w - l.omega_p;
    return (l.L_p * hw - l.K_p * d) / (hw * hw + d * d) / std::numbers::pi;
}

double evaluate_lines(const std::vector<SpectralLine>& lines, double w) {
    double s = 0.0;
    for (const auto& l : lines) s += line_value(l, w);
    return s;
}

std::vector<double> evaluate_lines(const std::vector<SpectralLine>& lines,
                                   const std::vector<double>& grid) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = evaluate_lines(lines, grid[i]);
    return v;
}

double sum_weights(const std::vector<SpectralLine>& lines) {
    double s = 0.0;
    for (const auto& l : lines) s += l.L_p;
    return s;
}

std::vector<double> linspace(double a, double b, int n) {
    if (n < 2) throw std::invalid_argument("linspace: need at least 2 points");
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    v.back() = b;
    return v;
}

std::vector<double> logspace(double a, double b, int n) {
    if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("logspace: bounds must be > 0");
    auto e = linspace(std::log10(a), std::log10(b), n);
    for (auto& x : e) x = std::pow(10.0, x);
    e.front() = a;
    e.back() = b;
    return e;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("trapezoid: size mismatch");
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return s;
}

}  // namespace jcl
