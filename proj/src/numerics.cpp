// numerics.cpp

#include "jcl/numerics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace jcl::num {

Series::Series(std::size_t order, double c0) : c_(order + 1, 0.0) { c_[0] = c0; }

Series Series::variable(std::size_t order, double x0) {
    Series s(order, x0);
    if (order >= 1) s.c_[1] = 1.0;
    return s;
}

Series Series::operator+(const Series& o) const {
    Series r(*this);
    for (std::size_t k = 0; k < c_.size() && k < o.c_.size(); ++k) r.c_[k] += o.c_[k];
    return r;
}

Series Series::operator-(const Series& o) const { return *this + o * -1.0; }

Series Series::operator*(const Series& o) const {
    Series r(order());
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0.0) continue;
        for (std::size_t j = 0; i + j < c_.size() && j < o.c_.size(); ++j) {
            r.c_[i + j] += c_[i] * o.c_[j];
        }
    }
    return r;
}

Series Series::operator*(double s) const {
    Series r(*this);
    for (auto& c : r.c_) c *= s;
    return r;
}

Series Series::operator+(double s) const {
    Series r(*this);
    r.c_[0] += s;
    return r;
}

Series Series::reciprocal() const {
    if (c_[0] == 0.0) throw std::domain_error("Series::reciprocal: zero constant term");
    Series r(order());
    r.c_[0] = 1.0 / c_[0];
    for (std::size_t k = 1; k < c_.size(); ++k) {
        double s = 0.0;
        for (std::size_t j = 1; j <= k; ++j) s += c_[j] * r.c_[k - j];
        r.c_[k] = -s / c_[0];
    }
    return r;
}

double Series::evaluate(double x) const {
    double s = 0.0;
    for (std::size_t k = c_.size(); k-- > 0;) s = s * x + c_[k];
    return s;
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    std::vector<double> x(n), w(n);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return {x, w};
}

}  // namespace jcl::num
