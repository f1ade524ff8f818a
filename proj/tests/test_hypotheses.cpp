#include <catch_amalgamated.hpp>

#include "models.hpp"
#include "nodal/hypotheses.hpp"

using nodal::check_hypotheses;
using nodal::HypothesisCase;
using nodal::NonlinearityModel;

TEST_CASE("f(s) = s^3 - s fails (f3): F has no positive local maximum") {
    auto m = make_cubic_well();
    auto rep = check_hypotheses(m, 3);
    CHECK(rep.case_ == HypothesisCase::Neither);
    CHECK(rep.f2.pass);
    CHECK_FALSE(rep.f3.pass);
}

TEST_CASE("supercritical power tail fails (f5)") {
    // p = 6 >= (N+2)/(N-2) = 5 for N = 3
    auto m = NonlinearityModel::hermite_tail(
        {
            {-6.0, 4.5, 0.0},
            {-1.0, -0.3, 0.0},
            {0.0, 0.0, 0.0},
            {0.5, -0.2, 0.0},
            {1.0, 0.4, 0.0},
            {1.5, 0.1, 0.0},
            {2.0, 1.0, 0.05 * 64.0},
        },
        0.05, 6.0);
    auto rep = check_hypotheses(m, 3);
    CHECK(rep.case_ == HypothesisCase::Neither);
    CHECK(rep.f1.pass);
    CHECK(rep.f2.pass);
    CHECK_FALSE(rep.f5.pass);

    // the same profile is fine for N = 2: no critical exponent
    auto rep2 = check_hypotheses(m, 2);
    CHECK(rep2.f5.pass);
}

TEST_CASE("M1 satisfies (A1)") {
    auto rep = check_hypotheses(make_m1(), 3);
    CHECK(rep.case_ == HypothesisCase::A1);
    CHECK(rep.f1.pass);
    CHECK(rep.f2.pass);
    CHECK(rep.f3.pass);
    CHECK(rep.f4.pass);
    CHECK(rep.delta == Catch::Approx(0.655).margin(0.002));
    // zeros of f outside (-delta, delta) with sign changes: -1, 1, 1.5
    REQUIRE(rep.zeros.size() == 3);
    for (const auto& z : rep.zeros) CHECK(z.sign_change);
}

TEST_CASE("M2 satisfies (A1), T1 satisfies (A2)") {
    CHECK(check_hypotheses(make_m2(), 3).case_ == HypothesisCase::A1);
    auto rep = check_hypotheses(make_t1(), 3);
    CHECK(rep.case_ == HypothesisCase::A2);
    CHECK(rep.f5.pass);
    CHECK(rep.f5.witness_s < 0.0); // s0
}

TEST_CASE("even model passes and has a negative maximum chain") {
    auto rep = check_hypotheses(make_even(), 3);
    CHECK(rep.case_ == HypothesisCase::A1);
}

TEST_CASE("zero-derivative plateau between equal knots violates (f4)") {
    // equal F with zero slopes at both ends makes F constant on the piece,
    // so f vanishes identically there
    auto m = nodal::NonlinearityModel::hermite({
        {-2.0, 1.0, 0.0},
        {-1.0, -0.1, 0.0},
        {0.0, 0.0, 0.0},
        {0.5, -0.2, 0.0},
        {1.0, 0.4, 0.0},
        {1.2, 0.4, 0.0},
        {1.5, 0.1, 0.0},
        {2.0, 1.0, 0.0},
    });
    auto rep = check_hypotheses(m, 3);
    CHECK_FALSE(rep.f4.pass);
    CHECK(rep.case_ == HypothesisCase::Neither);
}

TEST_CASE("shifted origin well fails (f2)") {
    // F >= 0 just right of 0: the well sits left of the origin only
    auto m = nodal::NonlinearityModel::hermite({
        {-2.0, 1.0, 0.0},
        {-1.0, -0.1, 0.0},
        {0.0, 0.0, 0.0},
        {1.0, 0.4, 0.0},
        {1.5, 0.1, 0.0},
        {2.0, 1.0, 0.0},
    });
    auto rep = check_hypotheses(m, 3);
    CHECK_FALSE(rep.f2.pass);
}
