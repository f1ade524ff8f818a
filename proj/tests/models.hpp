#pragma once

// Shared model definitions used across the test suites. M1 is the canonical
// finite-case profile, M2 the stretched-plateau profile whose Theorem-style
// nonexistence inequality holds at k = 1, T1 a power-tail profile for the
// infinite case.

#include "nodal/nonlinearity.hpp"

// The profile is quadratically flat (slope 0.05) at the barrier top gamma_1
// and at the endpoint maximum gamma_star: trajectories shot close to either
// level linger there and escape at large radii, where the 1/r damping is
// weak. That is what makes high node counts reachable in double precision.
inline nodal::NonlinearityModel make_m1() {
    return nodal::NonlinearityModel::hermite({
        {-3.0, 1.0, 0.0},
        {-1.0, -0.3, 0.0},
        {0.0, 0.0, 0.0},
        {0.5, -0.2, 0.0},
        {0.9, 0.39975, 0.005},
        {1.0, 0.4, 0.0},
        {1.1, 0.39975, -0.005},
        {1.5, 0.1, 0.0},
        {1.9, 0.99975, 0.005},
        {2.0, 1.0, 0.0},
    });
}

inline nodal::NonlinearityModel make_m2() {
    return nodal::NonlinearityModel::hermite({
        {-2.0, 6.0, 0.0},
        {-1.0, -0.02, 0.0},
        {0.0, 0.0, 0.0},
        {0.3, -0.01, 0.0},
        {1.0, 0.3, 0.0},
        {350.0, 0.28, 0.0},
        {357.0, 6.0, 0.0},
    });
}

// case (A2): spline head plus tail f(s) = 0.05 s^3 for s >= 2 (subcritical
// for N = 3); the floor at -5 stands in for gamma_star_minus = -infinity
inline nodal::NonlinearityModel make_t1() {
    return nodal::NonlinearityModel::hermite_tail(
        {
            {-6.0, 4.5, 0.0},
            {-1.0, -0.3, 0.0},
            {0.0, 0.0, 0.0},
            {0.5, -0.2, 0.0},
            {1.0, 0.4, 0.0},
            {1.5, 0.1, 0.0},
            {2.0, 1.0, 0.4},
        },
        0.05, 3.0);
}

// f(u) = u on an effectively unbounded domain; the linear oracle model
inline nodal::NonlinearityModel make_linear() {
    return nodal::NonlinearityModel::polynomial({0.0, 1.0}, -1e8, 1e8, true, true);
}

// f identically zero
inline nodal::NonlinearityModel make_zero_f() {
    return nodal::NonlinearityModel::polynomial({0.0}, -1e8, 1e8, true, true);
}

// f(s) = s^3 - s
inline nodal::NonlinearityModel make_cubic_well() {
    return nodal::NonlinearityModel::polynomial({0.0, -1.0, 0.0, 1.0}, -1e8, 1e8, true, true);
}

// even profile: gamma_1 = 1 and by symmetry u_bar = -1
inline nodal::NonlinearityModel make_even() {
    return nodal::NonlinearityModel::hermite({
        {-2.0, 1.0, 0.0},
        {-1.5, 0.1, 0.0},
        {-1.0, 0.4, 0.0},
        {-0.5, -0.2, 0.0},
        {0.0, 0.0, 0.0},
        {0.5, -0.2, 0.0},
        {1.0, 0.4, 0.0},
        {1.5, 0.1, 0.0},
        {2.0, 1.0, 0.0},
    });
}
