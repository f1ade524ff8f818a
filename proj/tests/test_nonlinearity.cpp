#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "models.hpp"
#include "oracles.hpp"
#include "nodal/nonlinearity.hpp"

using nodal::NonlinearityModel;

TEST_CASE("eval_f on the cubic well") {
    auto m = make_cubic_well(); // f(s) = s^3 - s
    CHECK(m.f(1.0) == Catch::Approx(0.0).margin(1e-15));
    CHECK(m.f(0.0) == Catch::Approx(0.0).margin(1e-15));
    CHECK(m.f(2.0) == Catch::Approx(6.0));
}

TEST_CASE("eval_f honors prescribed derivatives at control points") {
    auto m = make_m1();
    CHECK(m.f(1.0) == Catch::Approx(0.0).margin(1e-14)); // (1, 0.4, 0)
    CHECK(m.f(0.0) == Catch::Approx(0.0).margin(1e-14));
    CHECK(m.F(1.0) == Catch::Approx(0.4).margin(1e-14));
    CHECK(m.F(-3.0 + 1e-13) == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("eval_F on the cubic well") {
    auto m = make_cubic_well();
    CHECK(m.F(1.0) == Catch::Approx(-0.25));
    CHECK(m.F(std::sqrt(2.0)) == Catch::Approx(0.0).margin(1e-14));
    CHECK(m.F(1e-12) == Catch::Approx(0.0).margin(1e-20));
}

TEST_CASE("eval_Q closed forms") {
    auto cube = NonlinearityModel::polynomial({0.0, 0.0, 0.0, 1.0}, -10.0, 10.0); // f = s^3
    CHECK(cube.Q(3, 2.0) == Catch::Approx(8.0)); // 6*(16/4) - 1*2*8

    auto m1 = make_m1();
    for (double s : {-2.0, -0.5, 0.7, 1.9})
        CHECK(m1.Q(2, s) == Catch::Approx(4.0 * m1.F(s)).margin(1e-14));
    CHECK(m1.Q(3, 1e-13) == Catch::Approx(0.0).margin(1e-18));
}

TEST_CASE("domain errors") {
    auto m = make_m1();
    CHECK_THROWS_AS(m.f(-3.0), nodal::OutOfDomain);
    CHECK_THROWS_AS(m.f(2.5), nodal::OutOfDomain);
    CHECK_NOTHROW(m.f(2.0)); // right endpoint included

    auto t1 = make_t1();
    CHECK_NOTHROW(t1.f(1e6)); // unbounded above
    CHECK_THROWS_AS(t1.f(-6.0), nodal::OutOfDomain);
}

TEST_CASE("model validation") {
    using nodal::ControlPoint;
    using Cps = std::vector<ControlPoint>;
    CHECK_THROWS_AS(NonlinearityModel::hermite(Cps{{0.0, 0.0, 0.0}, {-1.0, 1.0, 0.0}}),
                    nodal::InvalidModel); // not increasing
    CHECK_THROWS_AS(NonlinearityModel::hermite(Cps{{-1.0, 1.0, 0.0}, {1.0, 1.0, 0.0}}),
                    nodal::InvalidModel); // no origin knot
    CHECK_THROWS_AS(NonlinearityModel::hermite_tail(
                        Cps{{-1.0, 1.0, 0.0}, {0.0, 0.0, 0.0}, {2.0, 1.0, 0.0}}, 0.05, 3.0),
                    nodal::InvalidModel); // f jumps at s_tail: 0 vs 0.05*8
    CHECK_THROWS_AS(NonlinearityModel::polynomial({1.0, 1.0}, -1.0, 1.0),
                    nodal::InvalidModel); // f(0) != 0
}

TEST_CASE("power tail evaluation") {
    auto t1 = make_t1();
    double st = t1.tail.s_tail;
    CHECK(t1.f(st) == Catch::Approx(0.05 * std::pow(st, 3.0)));
    CHECK(t1.f(4.0) == Catch::Approx(0.05 * 64.0));
    CHECK(t1.F(4.0) == Catch::Approx(1.0 + 0.05 * (std::pow(4.0, 4.0) - 16.0) / 4.0));
    CHECK(t1.f_prime(4.0) == Catch::Approx(0.05 * 3.0 * 16.0));
}

TEST_CASE("F is the quadrature of f at random points") {
    std::mt19937 rng(12345);
    auto check_model = [&rng](const NonlinearityModel& m, double lo, double hi, int n) {
        std::uniform_real_distribution<double> dist(lo, hi);
        for (int i = 0; i < n; ++i) {
            double s = dist(rng);
            double byquad = oracle::integrate([&m](double t) { return t == 0.0 ? 0.0 : m.f_unchecked(t); },
                                              0.0, s, 1e-13);
            REQUIRE(m.F(s) == Catch::Approx(byquad).margin(1e-10));
        }
    };
    check_model(make_m1(), -2.999, 2.0, 400);
    check_model(make_t1(), -5.999, 6.0, 300);
    check_model(make_cubic_well(), -3.0, 3.0, 300);
}
