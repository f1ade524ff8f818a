#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "models.hpp"
#include "oracles.hpp"
#include "nodal/energies.hpp"
#include "nodal/integrate.hpp"

using nodal::Event;
using nodal::integrate;
using nodal::ProblemConfig;
using nodal::Termination;
using nodal::Trajectory;

namespace {

ProblemConfig base_config(int N, double alpha, double r_max = 200.0) {
    ProblemConfig c;
    c.N = N;
    c.alpha = alpha;
    c.r_max = r_max;
    return c;
}

double sinc_u(double r) { return r == 0.0 ? 1.0 : std::sin(r) / r; }
double sinc_v(double r) { return r == 0.0 ? 0.0 : (r * std::cos(r) - std::sin(r)) / (r * r); }

} // namespace

TEST_CASE("series start") {
    auto zero = make_zero_f();
    auto cfg = base_config(3, 1.0);
    auto [r0, u, v] = nodal::series_start(zero, cfg);
    CHECK(u == Catch::Approx(1.0));
    CHECK(v == Catch::Approx(0.0).margin(1e-300));

    auto lin = make_linear();
    auto [r1, u1, v1] = nodal::series_start(lin, cfg);
    CHECK(u1 == Catch::Approx(1.0 - r1 * r1 / 6.0).epsilon(1e-10));
    CHECK(v1 < 0.0); // f(alpha) > 0 pushes u down

    auto m1 = make_m1();
    auto cfg19 = base_config(3, 1.9);
    auto [r2, u2, v2] = nodal::series_start(m1, cfg19);
    CHECK(v2 < 0.0);
}

TEST_CASE("linear oracle: u = sin(r)/r for N = 3") {
    auto lin = make_linear();
    auto cfg = base_config(3, 1.0, 20.0);
    Trajectory t = integrate(lin, cfg);
    REQUIRE(t.termination.reason == Termination::Reason::reached_rmax);

    double max_err = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        double r = 20.0 * i / 2000.0;
        max_err = std::max(max_err, std::abs(t.u_at(r) - sinc_u(r)));
    }
    CHECK(max_err <= 1e-7);

    // derivative accuracy via dense output
    double max_verr = 0.0;
    for (int i = 1; i <= 2000; ++i) {
        double r = 20.0 * i / 2000.0;
        max_verr = std::max(max_verr, std::abs(t.v_at(r) - sinc_v(r)));
    }
    CHECK(max_verr <= 1e-6);

    // zeros at k pi
    std::vector<double> zeros;
    for (const Event& e : t.events)
        if (e.kind == Event::Kind::simple_zero) zeros.push_back(e.r);
    REQUIRE(zeros.size() == 6);
    for (std::size_t k = 0; k < zeros.size(); ++k)
        CHECK(zeros[k] == Catch::Approx((k + 1) * M_PI).margin(1e-7));
}

TEST_CASE("linear oracle: first Bessel zero for N = 2") {
    auto lin = make_linear();
    auto cfg = base_config(2, 1.0, 10.0);
    Trajectory t = integrate(lin, cfg);
    double first = 0;
    for (const Event& e : t.events)
        if (e.kind == Event::Kind::simple_zero) { first = e.r; break; }
    CHECK(first == Catch::Approx(2.404825557695773).margin(1e-7));
    CHECK(first == Catch::Approx(oracle::bessel_j0_first_zero()).margin(1e-7));
}

TEST_CASE("f identically zero: constant solution, no events") {
    auto zf = make_zero_f();
    auto cfg = base_config(3, 1.0, 50.0);
    Trajectory t = integrate(zf, cfg);
    CHECK(t.termination.reason == Termination::Reason::reached_rmax);
    CHECK(t.events.empty());
    CHECK(t.u_at(25.0) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(nodal::energy_residual(t, 0.0, 50.0) == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("energy values on the linear oracle") {
    auto lin = make_linear();
    auto cfg = base_config(3, 1.0, 20.0);
    Trajectory t = integrate(lin, cfg);

    CHECK(nodal::energy_I(t, 0.0) == Catch::Approx(0.5)); // F(alpha) = 1/2
    CHECK(nodal::energy_I(t, M_PI) == Catch::Approx(1.0 / (2.0 * M_PI * M_PI)).epsilon(1e-7));

    // weighted energies
    CHECK(nodal::big_H(t, 0.0) == Catch::Approx(0.0).margin(1e-30));
    double I5 = nodal::energy_I(t, 5.0);
    CHECK(nodal::tilde_H(t, 5.0, I5) == Catch::Approx(0.0).margin(1e-12));
    CHECK(nodal::tilde_H(t, 5.0, 0.0) == Catch::Approx(nodal::big_H(t, 5.0)));

    // E = 2 r^N I + (N-2) r^{N-1} u' u; for N = 2 the second term drops
    auto cfg2 = base_config(2, 1.0, 10.0);
    Trajectory t2 = integrate(lin, cfg2);
    double r = 3.7;
    CHECK(nodal::pohozaev_E(t2, r, 2) ==
          Catch::Approx(2.0 * r * r * nodal::energy_I(t2, r)).epsilon(1e-12));
    CHECK(nodal::pohozaev_E(t2, 0.0, 2) == Catch::Approx(0.0).margin(1e-30));

    // residual identities on the closed form
    CHECK(nodal::energy_residual(t, 0.5, 18.0) <= 1e-6 * std::max(1.0, std::abs(I5)));
    CHECK(nodal::pohozaev_residual(t, 0.5, 18.0) <=
          1e-6 * std::max(1.0, std::abs(nodal::pohozaev_E(t, 18.0, 3))));
    CHECK(nodal::energy_residual(t, 4.0, 4.0) == 0.0);
}

TEST_CASE("sign change count on the linear oracle") {
    auto lin = make_linear();
    Trajectory t = integrate(lin, base_config(3, 1.0, 10.0));
    CHECK(nodal::count_sign_changes(t) == 3); // pi, 2pi, 3pi
}

TEST_CASE("M1 trajectories: residuals, monotone energy, event structure") {
    auto m1 = make_m1();
    auto lm = nodal::compute_landmarks(m1, 3);
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> dist(lm.beta_star + 1e-6, 2.0 - 1e-9);

    for (int trial = 0; trial < 20; ++trial) {
        double alpha = dist(rng);
        auto cfg = base_config(3, alpha);
        Trajectory t = integrate(m1, cfg, &lm);

        double Iscale = std::max(1.0, std::abs(t.I0));
        REQUIRE(nodal::energy_residual(t, 0.0, t.r_end()) <= 1e-6 * Iscale);
        REQUIRE(nodal::pohozaev_residual(t, 0.0, t.r_end()) <=
                1e-6 * nodal::pohozaev_scale(t, 0.0, t.r_end()));

        // monotone energy along samples
        double prev = nodal::energy_I(t, t.samples.front().r);
        for (const auto& s : t.samples) {
            double I = 0.5 * s.v * s.v + m1.F_unchecked(s.u);
            REQUIRE(I <= prev + 10.0 * cfg.rel_tol * std::max(1.0, std::abs(prev)));
            prev = I;
        }

        // between consecutive simple zeros: exactly one extremum, with the
        // matching sign of f at the extremum value
        std::vector<const Event*> zs;
        for (const auto& e : t.events)
            if (e.kind == Event::Kind::simple_zero) zs.push_back(&e);
        for (std::size_t i = 0; i + 1 < zs.size(); ++i) {
            int n_extrema = 0;
            const Event* ext = nullptr;
            for (const auto& e : t.events) {
                if (e.kind == Event::Kind::extremum && e.r > zs[i]->r && e.r < zs[i + 1]->r) {
                    ++n_extrema;
                    ext = &e;
                }
            }
            REQUIRE(n_extrema == 1);
            // minima occur where f <= 0, maxima where f >= 0
            bool is_min = ext->u < 0.0;
            double fv = m1.f_unchecked(ext->u);
            if (is_min)
                REQUIRE(fv <= 1e-9);
            else
                REQUIRE(fv >= -1e-9);
        }

        // boundedness from the initial energy (Proposition-style a priori bound)
        double vmax_bound = std::sqrt(2.0 * (t.I0 + lm.origin_well_depth)) + 1e-6;
        for (const auto& s : t.samples) {
            REQUIRE(std::abs(s.v) <= vmax_bound);
            REQUIRE(s.u > -3.0);
            REQUIRE(s.u < 2.0 + 1e-9);
        }

        // trapped trajectories end inside the capturing well with low energy
        if (t.termination.reason == Termination::Reason::trapped) {
            const auto* w = lm.well_containing(t.samples.back().u);
            REQUIRE(w != nullptr);
            REQUIRE(w->index == t.termination.well_index);
            double Iend = nodal::energy_I(t, t.r_end());
            REQUIRE(Iend < w->edge_min_F);
        }
    }
}

TEST_CASE("H decreases where |u| < delta on M1") {
    auto m1 = make_m1();
    auto lm = nodal::compute_landmarks(m1, 3);
    // an alpha whose trajectory passes through the origin well
    Trajectory t = integrate(m1, base_config(3, 1.95), &lm);
    int checked = 0;
    for (std::size_t i = 0; i + 1 < t.samples.size(); ++i) {
        const auto& a = t.samples[i];
        const auto& b = t.samples[i + 1];
        if (a.r > 0 && std::abs(a.u) < lm.delta && std::abs(b.u) < lm.delta &&
            std::abs(a.u) > 1e-3 && std::abs(b.u) > 1e-3) {
            REQUIRE(nodal::big_H(t, b.r) < nodal::big_H(t, a.r) + 1e-9);
            ++checked;
        }
    }
    REQUIRE(checked > 0);
}

TEST_CASE("level crossings are recorded") {
    auto m1 = make_m1();
    auto lm = nodal::compute_landmarks(m1, 3);
    auto cfg = base_config(3, 1.9);
    cfg.tracked_levels = {{7, 1.2}};
    Trajectory t = integrate(m1, cfg, &lm);
    bool seen = false;
    for (const auto& e : t.events) {
        if (e.kind == Event::Kind::level_crossing) {
            CHECK(e.level_id == 7);
            CHECK(e.u == Catch::Approx(1.2).margin(1e-8));
            seen = true;
            break;
        }
    }
    CHECK(seen);
}

TEST_CASE("trajectory evaluation rejects out-of-range radii") {
    auto lin = make_linear();
    Trajectory t = integrate(lin, base_config(3, 1.0, 5.0));
    CHECK_THROWS_AS(t.u_at(-1.0), nodal::OutOfRange);
    CHECK_THROWS_AS(t.u_at(5.1), nodal::OutOfRange);
    CHECK_NOTHROW(t.u_at(5.0));
}

TEST_CASE("integrate rejects alpha outside the domain") {
    auto m1 = make_m1();
    CHECK_THROWS_AS(integrate(m1, base_config(3, 2.5)), nodal::OutOfDomain);
    CHECK_THROWS_AS(integrate(m1, base_config(3, -3.0)), nodal::OutOfDomain);
}
