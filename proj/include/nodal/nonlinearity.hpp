#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "nodal/errors.hpp"
#include "nodal/poly.hpp"

namespace nodal {

enum class ModelKind { polynomial, hermite, hermite_power_tail };

/// One interpolation node (s, F(s), f(s)) with f = F'.
struct ControlPoint {
    double s = 0;
    double F = 0;
    double f = 0;
};

/// Polynomial piece of F on [s_lo, s_hi] in the local coordinate t = s - x0.
struct Segment {
    double s_lo = 0;
    double s_hi = 0;
    double x0 = 0;
    Poly F;
    Poly f;
};

/// Power continuation f(s) = c * s^p for s >= s_tail.
struct PowerTail {
    double c = 0;
    double p = 0;
    double s_tail = 0;
    double F_at_tail = 0;
};

/// The profile f, its primitive F and the Pohozaev integrand Q.
///
/// Instances are immutable after construction and safe to share across
/// threads. The domain is (gamma_star_minus, gamma_star]; an infinite
/// endpoint is represented by a finite floor (left) or a power tail (right).
class NonlinearityModel {
  public:
    ModelKind kind = ModelKind::hermite;
    double gamma_star_minus = -1;
    bool gamma_star_minus_infinite = false;
    double gamma_star = 1;
    bool gamma_star_infinite = false;
    std::vector<ControlPoint> points;
    std::vector<double> poly_coeffs;
    PowerTail tail;

    static NonlinearityModel polynomial(std::vector<double> f_coeffs, double gsm, double gs,
                                        bool gsm_inf = false, bool gs_inf = false) {
        NonlinearityModel m;
        m.kind = ModelKind::polynomial;
        m.poly_coeffs = std::move(f_coeffs);
        m.gamma_star_minus = gsm;
        m.gamma_star_minus_infinite = gsm_inf;
        m.gamma_star = gs;
        m.gamma_star_infinite = gs_inf;
        m.build();
        return m;
    }

    static NonlinearityModel hermite(std::vector<ControlPoint> pts) {
        NonlinearityModel m;
        m.kind = ModelKind::hermite;
        m.points = std::move(pts);
        if (m.points.size() >= 2) {
            m.gamma_star_minus = m.points.front().s;
            m.gamma_star = m.points.back().s;
        }
        m.build();
        return m;
    }

    static NonlinearityModel hermite_tail(std::vector<ControlPoint> pts, double c, double p,
                                          bool gsm_inf = true) {
        NonlinearityModel m;
        m.kind = ModelKind::hermite_power_tail;
        m.points = std::move(pts);
        if (!m.points.empty()) m.gamma_star_minus = m.points.front().s;
        m.gamma_star_minus_infinite = gsm_inf;
        m.gamma_star = std::numeric_limits<double>::infinity();
        m.gamma_star_infinite = true;
        m.tail.c = c;
        m.tail.p = p;
        if (!m.points.empty()) {
            m.tail.s_tail = m.points.back().s;
            m.tail.F_at_tail = m.points.back().F;
        }
        m.build();
        return m;
    }

    double domain_lo() const { return gamma_star_minus; }
    double domain_hi() const {
        return gamma_star_infinite ? std::numeric_limits<double>::infinity() : gamma_star;
    }

    bool in_domain(double s) const { return s > gamma_star_minus && s <= domain_hi(); }

    void require_in_domain(double s) const {
        if (!in_domain(s))
            throw OutOfDomain("s = " + std::to_string(s) + " outside (" +
                              std::to_string(gamma_star_minus) + ", " +
                              (gamma_star_infinite ? "inf" : std::to_string(gamma_star)) + "]");
    }

    double f(double s) const {
        require_in_domain(s);
        return f_unchecked(s);
    }

    double F(double s) const {
        require_in_domain(s);
        return F_unchecked(s);
    }

    double f_prime(double s) const {
        require_in_domain(s);
        if (has_tail() && s >= tail.s_tail)
            return tail.c * tail.p * std::pow(s, tail.p - 1.0);
        const Segment& g = segment_at(s);
        return g.f.derivative()(s - g.x0);
    }

    /// Q(s) = 2 N F(s) - (N - 2) s f(s).
    double Q(int N, double s) const {
        require_in_domain(s);
        return 2.0 * N * F_unchecked(s) - (N - 2.0) * s * f_unchecked(s);
    }

    bool has_tail() const { return kind == ModelKind::hermite_power_tail; }

    /// Limit of F at +infinity (A2 models); F(gamma_star) otherwise.
    double F_infinity() const {
        if (has_tail()) return std::numeric_limits<double>::infinity();
        if (gamma_star_infinite) return std::numeric_limits<double>::infinity();
        return F_unchecked(gamma_star);
    }

    const std::vector<Segment>& segments() const { return segs_; }

    /// F at the left domain floor (closed evaluation, validation only).
    double F_at_floor() const {
        if (segs_.empty()) return 0.0;
        const Segment& g = segs_.front();
        return g.F(g.s_lo - g.x0);
    }

    double f_unchecked(double s) const {
        if (has_tail() && s >= tail.s_tail) return tail.c * std::pow(s, tail.p);
        const Segment& g = segment_at(s);
        return g.f(s - g.x0);
    }

    double F_unchecked(double s) const {
        if (has_tail() && s >= tail.s_tail)
            return tail.F_at_tail +
                   tail.c * (std::pow(s, tail.p + 1.0) - std::pow(tail.s_tail, tail.p + 1.0)) /
                       (tail.p + 1.0);
        const Segment& g = segment_at(s);
        return g.F(s - g.x0);
    }

    /// Zeros of f in [a, b] (clipped to the finite spline part plus tail).
    std::vector<double> f_zeros_in(double a, double b) const {
        std::vector<double> out;
        for (const Segment& g : segs_) {
            double lo = std::max(a, g.s_lo), hi = std::min(b, g.s_hi);
            if (lo > hi) continue;
            for (double t : poly_roots_in(g.f, lo - g.x0, hi - g.x0)) push_unique(out, g.x0 + t);
        }
        // the power tail has no zeros: c > 0 and s >= s_tail > 0
        std::sort(out.begin(), out.end());
        return out;
    }

  private:
    std::vector<Segment> segs_;

    static void push_unique(std::vector<double>& v, double x) {
        for (double y : v)
            if (std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x))) return;
        v.push_back(x);
    }

    const Segment& segment_at(double s) const {
        // segments cover [floor, gamma_star or s_tail]; clamp into range
        std::size_t lo = 0, hi = segs_.size();
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            if (s < segs_[mid].s_lo)
                hi = mid;
            else
                lo = mid;
        }
        return segs_[lo];
    }

    void build() {
        segs_.clear();
        switch (kind) {
        case ModelKind::polynomial: {
            Poly f{poly_coeffs};
            if (!f.c.empty() && f.c[0] != 0.0) throw InvalidModel("polynomial model needs f(0) = 0");
            Poly F = f.antiderivative();
            double lo = gamma_star_minus_infinite ? -1e8 : gamma_star_minus;
            double hi = gamma_star_infinite ? 1e8 : gamma_star;
            Segment g;
            g.s_lo = lo;
            g.s_hi = hi;
            g.x0 = 0.0; // evaluate in the global coordinate
            g.F = F;
            g.f = f;
            segs_.push_back(std::move(g));
            break;
        }
        case ModelKind::hermite:
        case ModelKind::hermite_power_tail: {
            if (points.size() < 2) throw InvalidModel("hermite model needs at least 2 control points");
            bool has_origin = false;
            for (std::size_t i = 0; i + 1 < points.size(); ++i) {
                if (!(points[i].s < points[i + 1].s))
                    throw InvalidModel("control abscissae must be strictly increasing");
            }
            for (const ControlPoint& p : points) {
                if (p.s == 0.0) {
                    if (p.F != 0.0 || p.f != 0.0)
                        throw InvalidModel("control point at s = 0 must carry F = 0 and f = 0");
                    has_origin = true;
                }
            }
            if (!has_origin) throw InvalidModel("hermite model needs a control point at s = 0");
            for (std::size_t i = 0; i + 1 < points.size(); ++i) {
                const ControlPoint& a = points[i];
                const ControlPoint& b = points[i + 1];
                double h = b.s - a.s;
                Segment g;
                g.s_lo = a.s;
                g.s_hi = b.s;
                g.x0 = a.s;
                double a2 = (3.0 * (b.F - a.F) - h * (2.0 * a.f + b.f)) / (h * h);
                double a3 = (2.0 * (a.F - b.F) + h * (a.f + b.f)) / (h * h * h);
                g.F = Poly{{a.F, a.f, a2, a3}};
                g.f = Poly{{a.f, 2.0 * a2, 3.0 * a3}};
                segs_.push_back(std::move(g));
            }
            if (kind == ModelKind::hermite_power_tail) {
                if (!(tail.c > 0.0)) throw InvalidModel("power tail needs c > 0");
                if (!(tail.p >= 1.0)) throw InvalidModel("power tail needs p >= 1");
                if (!(tail.s_tail > 0.0)) throw InvalidModel("power tail needs s_tail > 0");
                double f_spline = points.back().f;
                double f_tail = tail.c * std::pow(tail.s_tail, tail.p);
                if (std::abs(f_spline - f_tail) > 1e-9 * std::max(1.0, std::abs(f_tail)))
                    throw InvalidModel("f is discontinuous at s_tail");
            }
            break;
        }
        }
        if (!(gamma_star_minus < 0.0)) throw InvalidModel("gamma_star_minus must be negative");
        if (!gamma_star_infinite && !(gamma_star > 0.0))
            throw InvalidModel("gamma_star must be positive");
    }
};

} // namespace nodal
