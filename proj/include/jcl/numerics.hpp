// numerics.hpp — small numerical kernels: tridiagonal solve, truncated power series, quadrature

#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace jcl::num {

// Solves a tridiagonal system with Gaussian elimination and partial pivoting.
// sub[i] multiplies x[i-1] in row i (sub[0] unused), sup[i] multiplies x[i+1]
// (sup[n-1] unused). Throws std::runtime_error on an exactly singular pivot.
// T may be any field type with the usual arithmetic (double, long double, __float128).
template <class T>
std::vector<T> solve_tridiagonal(std::vector<T> sub, std::vector<T> diag, std::vector<T> sup,
                                 std::vector<T> rhs) {
    const std::size_t n = diag.size();
    if (sub.size() != n || sup.size() != n || rhs.size() != n) {
        throw std::invalid_argument("solve_tridiagonal: size mismatch");
    }
    if (n == 0) return {};
    const auto mag = [](const T& v) { return v < T(0) ? -v : v; };
    // second superdiagonal created by row swaps
    std::vector<T> sup2(n, T(0));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        T& a = diag[i];
        T& l = sub[i + 1];
        if (mag(l) > mag(a)) {
            std::swap(a, l);
            std::swap(sup[i], diag[i + 1]);
            if (i + 2 < n) std::swap(sup2[i], sup[i + 1]);
            std::swap(rhs[i], rhs[i + 1]);
        }
        if (a == T(0)) throw std::runtime_error("solve_tridiagonal: singular matrix");
        const T m = l / a;
        l = T(0);
        diag[i + 1] -= m * sup[i];
        if (i + 2 < n) sup[i + 1] -= m * sup2[i];
        rhs[i + 1] -= m * rhs[i];
    }
    if (diag[n - 1] == T(0)) throw std::runtime_error("solve_tridiagonal: singular matrix");
    std::vector<T> x(n);
    for (std::size_t k = n; k-- > 0;) {
        T s = rhs[k];
        if (k + 1 < n) s -= sup[k] * x[k + 1];
        if (k + 2 < n) s -= sup2[k] * x[k + 2];
        x[k] = s / diag[k];
    }
    return x;
}

// Truncated power series c[0] + c[1] x + ... + c[order] x^order.
class Series {
public:
    explicit Series(std::size_t order, double c0 = 0.0);
    static Series variable(std::size_t order, double x0 = 0.0);   // x0 + x

    std::size_t order() const noexcept { return c_.size() - 1; }
    double operator[](std::size_t k) const { return c_.at(k); }
    double& operator[](std::size_t k) { return c_.at(k); }
    const std::vector<double>& coeffs() const noexcept { return c_; }

    Series operator+(const Series& o) const;
    Series operator-(const Series& o) const;
    Series operator*(const Series& o) const;
    Series operator*(double s) const;
    Series operator+(double s) const;
    Series reciprocal() const;   // requires c[0] != 0
    Series operator/(const Series& o) const { return *this * o.reciprocal(); }

    double evaluate(double x) const;

private:
    std::vector<double> c_;
};

// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

}  // namespace jcl::num
