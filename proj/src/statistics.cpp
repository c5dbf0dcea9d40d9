// statistics.cpp

#include "jcl/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jcl::stats {

namespace {

// Builds T from log-probabilities until past the mode and below the tail threshold.
template <class LogT>
std::vector<double> from_log(LogT logT, double mode, double rel_tail) {
    const double log_tail = std::log(rel_tail);
    const double lmax = logT(static_cast<int>(std::floor(mode)));
    std::vector<double> T;
    for (int n = 0;; ++n) {
        const double l = logT(n);
        if (n > mode && l - lmax < log_tail) break;
        T.push_back(std::exp(l));
        if (n > 10000000) throw std::runtime_error("distribution support too large");
    }
    if (T.empty()) T.push_back(1.0);
    return T;
}

}  // namespace

std::vector<double> poisson(double n_a, double rel_tail) {
    if (!(n_a >= 0.0)) throw std::invalid_argument("poisson: n_a must be >= 0");
    if (n_a == 0.0) return {1.0};
    const double ln = std::log(n_a);
    return from_log([&](int n) { return -n_a + n * ln - std::lgamma(n + 1.0); }, n_a, rel_tail);
}

std::vector<double> thermal(double n_a, double rel_tail) {
    if (!(n_a >= 0.0)) throw std::invalid_argument("thermal: n_a must be >= 0");
    if (n_a == 0.0) return {1.0};
    const double l1 = std::log(n_a), l2 = std::log1p(n_a);
    return from_log([&](int n) { return n * l1 - (n + 1) * l2; }, 0.0, rel_tail);
}

double laguerre(int n, double x) {
    if (n < 0) throw std::invalid_argument("laguerre: n must be >= 0");
    double p0 = 1.0, p1 = 1.0 - x;
    if (n == 0) return p0;
    for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0 - x) * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

std::vector<double> cothermal(double n_coh, double n_th, double rel_tail) {
    if (!(n_coh >= 0.0 && n_th >= 0.0)) throw std::invalid_argument("cothermal: negative population");
    if (n_th == 0.0) return poisson(n_coh, rel_tail);
    if (n_coh == 0.0) return thermal(n_th, rel_tail);
    // log L_n(-x) accumulated through ratios of the three-term recurrence
    const double x = n_coh / (n_th * (1.0 + n_th));
    std::vector<double> logL{0.0};
    double r_prev = 0.0;   // L_{k}/L_{k-1}
    auto logL_at = [&](int n) {
        while (static_cast<int>(logL.size()) <= n) {
            const int k = static_cast<int>(logL.size()) - 1;   // have L_k, want L_{k+1}
            double r;
            if (k == 0) {
                r = 1.0 + x;
            } else {
                r = ((2.0 * k + 1.0 + x) - k / r_prev) / (k + 1.0);
            }
            r_prev = r;
            logL.push_back(logL.back() + std::log(r));
        }
        return logL[static_cast<std::size_t>(n)];
    };
    const double pre = -n_coh / (1.0 + n_th);
    const double l1 = std::log(n_th), l2 = std::log1p(n_th);
    return from_log([&](int n) { return pre + n * l1 - (n + 1) * l2 + logL_at(n); },
                    n_coh + n_th, rel_tail);
}

double cothermal_moment(int k, double n_coh, double n_th) {
    if (k < 0) throw std::invalid_argument("cothermal_moment: k must be >= 0");
    // sum_j C(k,j) k!/j! n_coh^j n_th^(k-j)
    double s = 0.0;
    for (int j = 0; j <= k; ++j) {
        const double lc = std::lgamma(k + 1.0) - std::lgamma(j + 1.0) - std::lgamma(k - j + 1.0);
        const double lf = std::lgamma(k + 1.0) - std::lgamma(j + 1.0);
        const double pc = j == 0 ? 1.0 : std::pow(n_coh, j);
        const double pt = k - j == 0 ? 1.0 : std::pow(n_th, k - j);
        s += std::exp(lc + lf) * pc * pt;
    }
    return s;
}

double factorial_moment(const std::vector<double>& T, int k) {
    double s = 0.0;
    for (std::size_t n = static_cast<std::size_t>(std::max(k, 0)); n < T.size(); ++n) {
        double f = 1.0;
        for (int j = 0; j < k; ++j) f *= static_cast<double>(n - j);
        s += f * T[n];
    }
    return s;
}

std::size_t support(const std::vector<double>& T, double rel) {
    if (T.empty()) return 0;
    const double m = *std::max_element(T.begin(), T.end());
    std::size_t last = 0;
    for (std::size_t n = 0; n < T.size(); ++n) {
        if (T[n] >= rel * m) last = n;
    }
    return last + 1;
}

}  // namespace jcl::stats
