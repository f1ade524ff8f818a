#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace nodal {

/// Dense univariate polynomial, coefficients low degree first.
struct Poly {
    std::vector<double> c;

    Poly() = default;
    explicit Poly(std::vector<double> coeffs) : c(std::move(coeffs)) {}

    int degree() const {
        for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
            if (c[static_cast<std::size_t>(i)] != 0.0) return i;
        return -1; // zero polynomial
    }

    bool is_zero() const { return degree() < 0; }

    double operator()(double x) const {
        double acc = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
        return acc;
    }

    Poly derivative() const {
        if (c.size() <= 1) return Poly{{}};
        std::vector<double> d(c.size() - 1);
        for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
        return Poly{std::move(d)};
    }

    /// Antiderivative with constant term zero.
    Poly antiderivative() const {
        std::vector<double> a(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) a[i + 1] = c[i] / static_cast<double>(i + 1);
        return Poly{std::move(a)};
    }

    Poly operator*(const Poly& o) const {
        if (c.empty() || o.c.empty()) return Poly{{}};
        std::vector<double> r(c.size() + o.c.size() - 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = 0; j < o.c.size(); ++j) r[i + j] += c[i] * o.c[j];
        return Poly{std::move(r)};
    }

    Poly operator+(const Poly& o) const {
        std::vector<double> r(std::max(c.size(), o.c.size()), 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) r[i] += c[i];
        for (std::size_t i = 0; i < o.c.size(); ++i) r[i] += o.c[i];
        return Poly{std::move(r)};
    }

    Poly scaled(double k) const {
        Poly r = *this;
        for (double& v : r.c) v *= k;
        return r;
    }
};

namespace detail {

/// Bisection on [a, b] assuming fa and f(b) have opposite signs.
template <class F>
double bisect_root(const F& f, double a, double b, double fa) {
    for (int it = 0; it < 200; ++it) {
        double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        double fm = f(m);
        if (fm == 0.0) return m;
        if ((fa < 0.0) == (fm < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

} // namespace detail

/// All real roots of p in [a, b], ascending and deduplicated.
///
/// Roots are isolated by recursing on the critical points of p, so each
/// monotone piece is bisected independently. Values within eps_val of zero
/// at piece endpoints count as roots; eps_val <= 0 picks a scale-relative
/// default, which also catches extrema that touch zero.
inline std::vector<double> poly_roots_in(const Poly& p, double a, double b, double eps_val = -1.0) {
    std::vector<double> out;
    if (!(a <= b)) return out;
    int deg = p.degree();
    if (deg <= 0) return out; // constants (and the zero poly) have no isolated roots

    std::vector<double> brk;
    brk.push_back(a);
    if (deg >= 2) {
        for (double c : poly_roots_in(p.derivative(), a, b, eps_val))
            if (c > a && c < b) brk.push_back(c);
    }
    brk.push_back(b);
    std::sort(brk.begin(), brk.end());

    bool strict = eps_val == 0.0;
    // a value counts as zero when it is negligible against the summed
    // magnitude of the evaluated terms at that point
    auto zeroish = [&](double x) {
        double v = p(x);
        if (eps_val > 0.0) return std::abs(v) <= eps_val;
        double mag = 0.0;
        for (std::size_t i = p.c.size(); i-- > 0;) mag = mag * std::abs(x) + std::abs(p.c[i]);
        return std::abs(v) <= 1e-13 * std::max(1e-30, mag);
    };

    auto push = [&out](double x) {
        if (out.empty() || std::abs(x - out.back()) > 1e-14 * std::max(1.0, std::abs(x)))
            out.push_back(x);
    };

    for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
        double x0 = brk[i], x1 = brk[i + 1];
        double f0 = p(x0), f1 = p(x1);
        bool z0 = !strict && zeroish(x0);
        bool z1 = !strict && zeroish(x1);
        if (z0) push(x0);
        if (f0 * f1 < 0.0 && !z0 && !z1) push(detail::bisect_root(p, x0, x1, f0));
        if (z1 && i + 2 == brk.size()) push(x1);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace nodal
