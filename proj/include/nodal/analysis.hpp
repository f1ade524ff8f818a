#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "nodal/errors.hpp"
#include "nodal/nonlinearity.hpp"
#include "nodal/poly.hpp"

namespace nodal {

/// A critical point of F with its value and local type.
struct CriticalPoint {
    double s = 0;
    double F = 0;
    bool is_max = false;
    bool is_min = false;
    bool sign_change = false; // f changes sign across s
};

/// Critical points of F (zeros of f) in [a, b], ascending. Zeros of f at
/// which f does not change sign are reported with both type flags false.
inline std::vector<CriticalPoint> critical_points(const NonlinearityModel& m, double a, double b) {
    std::vector<CriticalPoint> out;
    double hi = m.has_tail() ? m.tail.s_tail : m.domain_hi();
    double lo = m.domain_lo();
    a = std::max(a, lo);
    b = std::min(b, hi);
    for (double s : m.f_zeros_in(a, b)) {
        CriticalPoint cp;
        cp.s = s;
        cp.F = m.F_unchecked(s);
        double h = 1e-7 * std::max(1.0, std::abs(s));
        double sl = s - h >= lo ? m.f_unchecked(std::max(s - h, lo + h * 0.5)) : 0.0;
        double sr = s + h <= hi ? m.f_unchecked(std::min(s + h, hi)) : 0.0;
        cp.is_max = sl > 0.0 && sr < 0.0;
        cp.is_min = sl < 0.0 && sr > 0.0;
        cp.sign_change = cp.is_max || cp.is_min;
        out.push_back(cp);
    }
    return out;
}

/// Q restricted to one spline segment, in the segment's local coordinate.
inline Poly segment_Q(const Segment& g, int N) {
    Poly s_local{{g.x0, 1.0}}; // s = x0 + t
    return g.F.scaled(2.0 * N) + (s_local * g.f).scaled(-(N - 2.0));
}

/// All roots of F(s) = level on [a, b]; b may be +inf for tail models.
/// eps_val = 0 keeps only strict sign changes (see poly_roots_in).
inline std::vector<double> level_roots(const NonlinearityModel& m, double level, double a, double b,
                                       double eps_val = -1.0) {
    std::vector<double> out;
    double spline_hi = m.has_tail() ? m.tail.s_tail : m.domain_hi();
    for (const Segment& g : m.segments()) {
        double lo = std::max(a, g.s_lo), hi = std::min({b, g.s_hi, spline_hi});
        if (lo > hi) continue;
        Poly shifted = g.F;
        if (shifted.c.empty()) shifted.c.push_back(0.0);
        shifted.c[0] -= level;
        for (double t : poly_roots_in(shifted, lo - g.x0, hi - g.x0, eps_val)) {
            double s = g.x0 + t;
            if (out.empty() || std::abs(s - out.back()) > 1e-12 * std::max(1.0, std::abs(s)))
                out.push_back(s);
        }
    }
    if (m.has_tail() && b > m.tail.s_tail && level >= m.tail.F_at_tail) {
        double sp = std::pow(m.tail.s_tail, m.tail.p + 1.0) +
                    (level - m.tail.F_at_tail) * (m.tail.p + 1.0) / m.tail.c;
        double s = std::pow(sp, 1.0 / (m.tail.p + 1.0));
        if (s >= m.tail.s_tail && s <= b &&
            (out.empty() || std::abs(s - out.back()) > 1e-12 * std::max(1.0, std::abs(s))))
            out.push_back(s);
    }
    return out;
}

namespace detail {

/// Drop level roots that merely reproduce an endpoint whose own value is the level.
inline std::vector<double> strip_endpoint_roots(std::vector<double> roots, const NonlinearityModel& m,
                                                double level, double a, double b) {
    double span = std::min(b, m.has_tail() ? m.tail.s_tail * 4.0 : b) - a;
    double tol = 1e-9 * std::max(1.0, std::abs(span));
    std::vector<double> out;
    for (double r : roots) {
        if (std::abs(r - a) <= tol && std::abs(m.F_unchecked(std::max(r, a)) - level) <= 1e-9)
            continue;
        if (std::isfinite(b) && std::abs(r - b) <= tol &&
            std::abs(m.F_unchecked(std::min(r, b)) - level) <= 1e-9)
            continue;
        out.push_back(r);
    }
    return out;
}

} // namespace detail

/// Largest s in the open interval (a, b) with F(s) = level.
inline double rightmost_level_point(const NonlinearityModel& m, double level, double a, double b) {
    auto roots = detail::strip_endpoint_roots(level_roots(m, level, a, b), m, level, a, b);
    if (roots.empty())
        throw LevelNotAttained("F(s) = " + std::to_string(level) + " has no root in (" +
                               std::to_string(a) + ", " + std::to_string(b) + ")");
    return roots.back();
}

/// Smallest s in the open interval (a, b) with F(s) = level.
inline double leftmost_level_point(const NonlinearityModel& m, double level, double a, double b) {
    auto roots = detail::strip_endpoint_roots(level_roots(m, level, a, b), m, level, a, b);
    if (roots.empty())
        throw LevelNotAttained("F(s) = " + std::to_string(level) + " has no root in (" +
                               std::to_string(a) + ", " + std::to_string(b) + ")");
    return roots.front();
}

/// Exact extrema of F over the closed interval [a, b] (finite a, b).
struct IntervalExtrema {
    double min_value = 0, min_point = 0;
    double max_value = 0, max_point = 0;
};

inline IntervalExtrema extrema_F(const NonlinearityModel& m, double a, double b) {
    IntervalExtrema e;
    e.min_value = std::numeric_limits<double>::infinity();
    e.max_value = -std::numeric_limits<double>::infinity();
    auto consider = [&](double s) {
        double v = m.F_unchecked(s);
        if (v < e.min_value) { e.min_value = v; e.min_point = s; }
        if (v > e.max_value) { e.max_value = v; e.max_point = s; }
    };
    consider(a);
    consider(b);
    for (const CriticalPoint& cp : critical_points(m, a, b)) consider(cp.s);
    return e;
}

/// Q without the domain check (analysis internals evaluate closed endpoints).
inline double Q_unchecked(const NonlinearityModel& m, int N, double s) {
    return 2.0 * N * m.F_unchecked(s) - (N - 2.0) * s * m.f_unchecked(s);
}

/// Exact extrema of Q(N, .) over the closed interval [a, b] (finite a, b).
inline IntervalExtrema extrema_Q(const NonlinearityModel& m, int N, double a, double b) {
    IntervalExtrema e;
    e.min_value = std::numeric_limits<double>::infinity();
    e.max_value = -std::numeric_limits<double>::infinity();
    auto consider = [&](double s) {
        double v = Q_unchecked(m, N, s);
        if (v < e.min_value) { e.min_value = v; e.min_point = s; }
        if (v > e.max_value) { e.max_value = v; e.max_point = s; }
    };
    consider(a);
    consider(b);
    double spline_hi = m.has_tail() ? m.tail.s_tail : m.domain_hi();
    for (const Segment& g : m.segments()) {
        double lo = std::max(a, g.s_lo), hi = std::min({b, g.s_hi, spline_hi});
        if (lo > hi) continue;
        Poly q = segment_Q(g, N);
        for (double t : poly_roots_in(q.derivative(), lo - g.x0, hi - g.x0)) consider(g.x0 + t);
    }
    // the tail part of Q is monotone in s^{p+1}; endpoints already considered
    return e;
}

/// Exact extrema of f over the closed interval [a, b] (finite a, b).
inline IntervalExtrema extrema_f(const NonlinearityModel& m, double a, double b) {
    IntervalExtrema e;
    e.min_value = std::numeric_limits<double>::infinity();
    e.max_value = -std::numeric_limits<double>::infinity();
    auto consider = [&](double s) {
        double v = m.f_unchecked(s);
        if (v < e.min_value) { e.min_value = v; e.min_point = s; }
        if (v > e.max_value) { e.max_value = v; e.max_point = s; }
    };
    consider(a);
    consider(b);
    double spline_hi = m.has_tail() ? m.tail.s_tail : m.domain_hi();
    for (const Segment& g : m.segments()) {
        double lo = std::max(a, g.s_lo), hi = std::min({b, g.s_hi, spline_hi});
        if (lo > hi) continue;
        for (double t : poly_roots_in(g.f.derivative(), lo - g.x0, hi - g.x0)) consider(g.x0 + t);
    }
    return e; // the power tail is monotone; endpoints already considered
}

/// The maximal punctured interval (neg, pos) around 0 on which F < 0: the
/// endpoints are the nearest points where F returns to zero, whether by
/// crossing or by touching. The double zero of F at the origin itself is
/// masked out by a small domain-relative exclusion radius.
inline std::pair<double, double> origin_negative_span(const NonlinearityModel& m) {
    double hi = m.has_tail() ? m.tail.s_tail : m.domain_hi();
    double lo = m.domain_lo();
    // mask the origin's own double zero; knot spacing sets the model scale,
    // polynomial profiles are taken O(1)-scaled
    double scale = 1.0;
    if (!m.points.empty()) scale = std::max(1.0, m.points.back().s - m.points.front().s);
    double tol0 = 1e-6 * scale;
    double pos = hi, neg = lo;
    for (double r : level_roots(m, 0.0, 0.0, hi)) {
        if (r > tol0) { pos = r; break; }
    }
    auto nr = level_roots(m, 0.0, lo, 0.0);
    for (auto it = nr.rbegin(); it != nr.rend(); ++it) {
        if (*it < -tol0) { neg = *it; break; }
    }
    return {neg, pos};
}

/// Zeros of Q(N, .) in [a, b] restricted to the spline part.
inline std::vector<double> Q_roots(const NonlinearityModel& m, int N, double a, double b) {
    std::vector<double> out;
    double spline_hi = m.has_tail() ? m.tail.s_tail : m.domain_hi();
    for (const Segment& g : m.segments()) {
        double lo = std::max(a, g.s_lo), hi = std::min({b, g.s_hi, spline_hi});
        if (lo > hi) continue;
        Poly q = segment_Q(g, N);
        for (double t : poly_roots_in(q, lo - g.x0, hi - g.x0)) {
            double s = g.x0 + t;
            if (out.empty() || std::abs(s - out.back()) > 1e-12 * std::max(1.0, std::abs(s)))
                out.push_back(s);
        }
    }
    return out;
}

} // namespace nodal
