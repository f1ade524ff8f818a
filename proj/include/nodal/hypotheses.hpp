#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "nodal/analysis.hpp"
#include "nodal/nonlinearity.hpp"

namespace nodal {

enum class HypothesisCase { A1, A2, Neither };

inline const char* to_string(HypothesisCase c) {
    switch (c) {
    case HypothesisCase::A1: return "A1";
    case HypothesisCase::A2: return "A2";
    default: return "Neither";
    }
}

struct ConditionVerdict {
    bool checked = false;
    bool pass = false;
    double witness_s = 0;      // a point violating the condition, when failing
    std::string witness;       // the violated inequality, in words
};

struct FZero {
    double s = 0;
    bool sign_change = false;
};

/// Verdicts for (f1)-(f5) of the active hypothesis set.
struct HypothesisReport {
    HypothesisCase case_ = HypothesisCase::Neither;
    ConditionVerdict f1, f2, f3, f4, f5;
    std::vector<FZero> zeros; // zeros of f outside (-delta, delta)
    double delta = 0;         // radius of the F<0 punctured neighborhood, when it exists

    bool passed() const { return case_ != HypothesisCase::Neither; }

    std::string first_failure() const {
        const ConditionVerdict* vs[] = {&f1, &f2, &f3, &f4, &f5};
        const char* names[] = {"f1", "f2", "f3", "f4", "f5"};
        for (int i = 0; i < 5; ++i)
            if (vs[i]->checked && !vs[i]->pass) return std::string(names[i]) + ": " + vs[i]->witness;
        return "";
    }
};

/// Checks (A1) or (A2) depending on whether gamma_star is finite.
inline HypothesisReport check_hypotheses(const NonlinearityModel& m, int N) {
    HypothesisReport rep;
    bool infinite = m.gamma_star_infinite;
    double floor = m.domain_lo();
    double hi = m.has_tail() ? m.tail.s_tail : m.domain_hi();

    // (f1): f(0) = 0, continuity, and for (A1) f(gamma_star) = 0. Continuity
    // and the Lipschitz property hold by construction for piecewise
    // polynomials; the tail junction was validated at build time.
    rep.f1.checked = true;
    rep.f1.pass = true;
    if (!infinite) {
        double fg = m.f_unchecked(m.gamma_star);
        if (std::abs(fg) > 1e-10 * std::max(1.0, std::abs(m.gamma_star))) {
            rep.f1.pass = false;
            rep.f1.witness_s = m.gamma_star;
            rep.f1.witness = "f(gamma_star) != 0";
        }
    }

    // (f2): F < 0 on a punctured neighborhood of 0, plus the endpoint level
    // conditions of the active case.
    rep.f2.checked = true;
    rep.f2.pass = true;
    {
        auto [neg_root, pos_root] = origin_negative_span(m);
        double mid_p = 0.5 * std::min(pos_root, hi);
        double mid_n = 0.5 * std::max(neg_root, floor);
        if (!(m.F_unchecked(mid_p) < 0.0)) {
            rep.f2.pass = false;
            rep.f2.witness_s = mid_p;
            rep.f2.witness = "F(s) >= 0 just right of 0";
        } else if (!(m.F_unchecked(mid_n) < 0.0)) {
            rep.f2.pass = false;
            rep.f2.witness_s = mid_n;
            rep.f2.witness = "F(s) >= 0 just left of 0";
        } else {
            rep.delta = std::min(pos_root, -neg_root);
        }
    }
    if (rep.f2.pass && !infinite) {
        double Fstar = m.F_unchecked(m.gamma_star);
        double tol_s = 1e-9 * std::max({1.0, std::abs(floor), std::abs(m.gamma_star)});
        if (std::abs(m.F_at_floor() - Fstar) > 1e-9 * std::max(1.0, std::abs(Fstar))) {
            rep.f2.pass = false;
            rep.f2.witness_s = floor;
            rep.f2.witness = "lim F at gamma_star_minus != F(gamma_star)";
        } else {
            for (const CriticalPoint& cp : critical_points(m, floor, m.gamma_star)) {
                if (cp.s <= floor + tol_s || cp.s >= m.gamma_star - tol_s) continue;
                if (cp.F >= Fstar - 1e-12 * std::max(1.0, std::abs(Fstar))) {
                    rep.f2.pass = false;
                    rep.f2.witness_s = cp.s;
                    rep.f2.witness = "interior F value reaches F(gamma_star)";
                    break;
                }
            }
        }
    }
    // (A2): F(s) < F_inf holds trivially for a divergent power tail; the
    // gamma_star_minus limit is not verifiable on a finite floor proxy and is
    // covered by the floor-depth validation in compute_landmarks.

    // (f3): F has a local maximum in (delta, gamma_star) with positive value.
    rep.f3.checked = true;
    rep.f3.pass = false;
    rep.f3.witness = "F has no positive local maximum";
    for (const CriticalPoint& cp : critical_points(m, rep.delta > 0 ? rep.delta : 0.0, hi)) {
        if (cp.is_max && cp.F > 0.0) {
            rep.f3.pass = true;
            rep.f3.witness.clear();
            break;
        }
    }

    // (f4): finitely many zeros of f outside (-delta, delta), each a sign change.
    rep.f4.checked = true;
    rep.f4.pass = true;
    for (const Segment& g : m.segments()) {
        if (g.f.is_zero()) {
            rep.f4.pass = false;
            rep.f4.witness_s = g.s_lo;
            rep.f4.witness = "f vanishes identically on a segment";
        }
    }
    if (rep.f4.pass && rep.delta > 0) {
        double tol_s = 1e-9 * std::max({1.0, std::abs(floor), std::abs(hi)});
        for (const CriticalPoint& cp : critical_points(m, floor, hi)) {
            if (std::abs(cp.s) < rep.delta) continue;
            if (cp.s <= floor + tol_s || cp.s >= hi - tol_s) continue;
            rep.zeros.push_back({cp.s, cp.sign_change});
            if (!cp.sign_change) {
                rep.f4.pass = false;
                rep.f4.witness_s = cp.s;
                rep.f4.witness = "f does not change sign at a zero";
            }
        }
    }

    // (f5), case (A2) only: analytic for the power-tail family.
    if (infinite) {
        rep.f5.checked = true;
        rep.f5.pass = false;
        if (!m.has_tail()) {
            rep.f5.witness = "no power tail: (f5) not verifiable, case A2 rejected";
        } else {
            double pcrit = N > 2 ? (N + 2.0) / (N - 2.0) : std::numeric_limits<double>::infinity();
            if (!(m.tail.p < pcrit)) {
                rep.f5.witness = "tail exponent p >= (N+2)/(N-2): the (f5) limit stays bounded";
                rep.f5.witness_s = m.tail.p;
            } else {
                // s0: Q > 0 on (gamma_star_minus, s0)
                double probe = floor + 1e-9 * std::max(1.0, std::abs(floor));
                if (!(m.Q(N, probe) > 0.0)) {
                    rep.f5.witness = "Q <= 0 at the left end of the domain";
                    rep.f5.witness_s = probe;
                } else {
                    double s0 = -1e-14;
                    auto qr = Q_roots(m, N, floor, -1e-14);
                    if (!qr.empty()) s0 = qr.front();
                    rep.f5.pass = true;
                    rep.f5.witness_s = s0;
                }
            }
        }
    }

    bool core = rep.f1.pass && rep.f2.pass && rep.f3.pass && rep.f4.pass;
    if (!infinite)
        rep.case_ = core ? HypothesisCase::A1 : HypothesisCase::Neither;
    else
        rep.case_ = core && rep.f5.pass ? HypothesisCase::A2 : HypothesisCase::Neither;
    return rep;
}

} // namespace nodal
