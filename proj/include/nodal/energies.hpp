#pragma once

#include <cmath>

#include "nodal/integrate.hpp"

namespace nodal {

/// I(r) = |u'|^2 / 2 + F(u).
inline double energy_I(const Trajectory& t, double r) {
    double u = t.u_at(r), v = t.v_at(r);
    return 0.5 * v * v + t.model->F_unchecked(u);
}

/// H(r) = r^{2(N-1)} I(r).
inline double big_H(const Trajectory& t, double r) {
    return std::pow(r, 2.0 * (t.config.N - 1)) * energy_I(t, r);
}

/// H~(r) = r^{2(N-1)} (I(r) - level); level is F(gamma) for a landmark gamma.
inline double tilde_H(const Trajectory& t, double r, double level) {
    return std::pow(r, 2.0 * (t.config.N - 1)) * (energy_I(t, r) - level);
}

/// E(r) = 2 r^N I(r) + (N-2) r^{N-1} u'(r) u(r).
inline double pohozaev_E(const Trajectory& t, double r, int N) {
    double u = t.u_at(r), v = t.v_at(r);
    double I = 0.5 * v * v + t.model->F_unchecked(u);
    return 2.0 * std::pow(r, N) * I + (N - 2.0) * std::pow(r, N - 1.0) * v * u;
}

inline int count_sign_changes(const Trajectory& t) { return t.sign_changes(); }

namespace detail {

// Gauss-Legendre 7-point rule on [-1, 1]
inline constexpr double gl7_x[7] = {-0.9491079123427585, -0.7415311855993945,
                                    -0.4058451513773972, 0.0,
                                    0.4058451513773972,  0.7415311855993945,
                                    0.9491079123427585};
inline constexpr double gl7_w[7] = {0.1294849661688697, 0.2797053914892766, 0.3818300505051189,
                                    0.4179591836734694, 0.3818300505051189, 0.2797053914892766,
                                    0.1294849661688697};

/// Integrates g over [r1, r2] reusing the trajectory's dense steps: the rule
/// is applied to each overlapped (partial) step, so no model re-integration
/// happens.
template <class G>
double quad_over_steps(const Trajectory& t, double r1, double r2, const G& g) {
    double total = 0.0;
    auto add_interval = [&](double a, double b) {
        if (b <= a) return;
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double acc = 0.0;
        for (int i = 0; i < 7; ++i) acc += gl7_w[i] * g(mid + half * gl7_x[i]);
        total += acc * half;
    };
    double a0 = std::max(r1, 0.0);
    if (a0 < t.r_series) add_interval(a0, std::min(r2, t.r_series));
    for (const auto& st : t.steps) {
        double a = std::max(r1, st.r0), b = std::min(r2, st.r0 + st.h);
        add_interval(a, b);
    }
    return total;
}

} // namespace detail

/// | I(r2) - I(r1) + (N-1) int_{r1}^{r2} u'^2 / t dt |, the defect in the
/// energy dissipation identity; an a posteriori accuracy check.
inline double energy_residual(const Trajectory& t, double r1, double r2) {
    if (!(r1 <= r2)) throw OutOfRange("energy_residual needs r1 <= r2");
    if (r1 == r2) return 0.0;
    int N = t.config.N;
    double dissipated = detail::quad_over_steps(t, r1, r2, [&t](double r) {
        double v = t.v_at(r);
        return v * v / r;
    });
    return std::abs(energy_I(t, r2) - energy_I(t, r1) + (N - 1) * dissipated);
}

/// | E(r2) - E(r1) - int_{r1}^{r2} t^{N-1} Q(u(t)) dt |.
inline double pohozaev_residual(const Trajectory& t, double r1, double r2) {
    if (!(r1 <= r2)) throw OutOfRange("pohozaev_residual needs r1 <= r2");
    if (r1 == r2) return 0.0;
    int N = t.config.N;
    double flux = detail::quad_over_steps(t, r1, r2, [&t, N](double r) {
        return std::pow(r, N - 1.0) * Q_unchecked(*t.model, N, t.u_at(r));
    });
    return std::abs(pohozaev_E(t, r2, N) - pohozaev_E(t, r1, N) - flux);
}

/// Magnitude of the identity's terms on [r1, r2]: the defect is meaningful
/// relative to this, since E is a near-cancelling combination of r^N-sized
/// quantities on long trajectories.
inline double pohozaev_scale(const Trajectory& t, double r1, double r2) {
    int N = t.config.N;
    double var = detail::quad_over_steps(t, r1, r2, [&t, N](double r) {
        return std::abs(std::pow(r, N - 1.0) * Q_unchecked(*t.model, N, t.u_at(r)));
    });
    return std::max({1.0, std::abs(pohozaev_E(t, r1, N)), std::abs(pohozaev_E(t, r2, N)), var});
}

} // namespace nodal
