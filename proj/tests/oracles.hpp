#pragma once

// Independent numerical oracles. Everything here works only through the
// public evaluators (or plain std::sin / series), never through the segment
// machinery, so it can cross-check the implementation path.

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

/// Bisection on [a, b] for a continuous g with g(a) g(b) < 0.
inline double bisect(const std::function<double(double)>& g, double a, double b) {
    double fa = g(a);
    for (int i = 0; i < 200; ++i) {
        double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        double fm = g(m);
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

/// All sign-change roots of g found on an n-point grid over [a, b].
inline std::vector<double> grid_roots(const std::function<double(double)>& g, double a, double b,
                                      int n) {
    std::vector<double> out;
    double prev = g(a);
    double x_prev = a;
    for (int i = 1; i <= n; ++i) {
        double x = a + (b - a) * static_cast<double>(i) / n;
        double v = g(x);
        if (prev * v < 0.0) out.push_back(bisect(g, x_prev, x));
        x_prev = x;
        prev = v;
    }
    return out;
}

/// Local maxima of the antiderivative of f, i.e. down-crossings of f,
/// located on an n-point grid and polished by bisection.
inline std::vector<double> grid_maxima_of_primitive(const std::function<double(double)>& f, double a,
                                                    double b, int n) {
    std::vector<double> out;
    double prev = f(a);
    double x_prev = a;
    for (int i = 1; i <= n; ++i) {
        double x = a + (b - a) * static_cast<double>(i) / n;
        double v = f(x);
        if (prev > 0.0 && v < 0.0) out.push_back(bisect(f, x_prev, x));
        x_prev = x;
        prev = v;
    }
    return out;
}

/// Adaptive Simpson quadrature, plain recursive form.
inline double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                          double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) return left + right;
    return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

/// J0 by its power series; accurate for |x| up to ~12.
inline double bessel_j0(double x) {
    double term = 1.0, sum = 1.0;
    double q = x * x / 4.0;
    for (int m = 1; m < 60; ++m) {
        term *= -q / (static_cast<double>(m) * m);
        sum += term;
        if (std::abs(term) < 1e-18) break;
    }
    return sum;
}

/// First positive root of J0, from the series plus bisection.
inline double bessel_j0_first_zero() {
    return bisect([](double x) { return bessel_j0(x); }, 2.0, 3.0);
}

} // namespace oracle
