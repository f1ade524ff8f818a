#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nodal/analysis.hpp"
#include "nodal/errors.hpp"
#include "nodal/landmarks.hpp"
#include "nodal/nonlinearity.hpp"

namespace nodal {

/// Closed-form evaluation of one of the nonexistence / multiplicity
/// inequalities, with every named constant recorded.
struct TheoremReport {
    enum class Which { nonexistence_a1, nonexistence_a2, k0_condition };
    Which which = Which::nonexistence_a1;
    std::vector<std::pair<std::string, double>> constants;
    double lhs = 0;
    double rhs = 0;
    bool holds = false; // lhs < rhs, oriented as the cited inequality

    double constant(const std::string& name) const {
        for (const auto& [k, v] : constants)
            if (k == name) return v;
        throw Error("unknown constant " + name);
    }
};

inline const char* to_string(TheoremReport::Which w) {
    switch (w) {
    case TheoremReport::Which::nonexistence_a1: return "NonexistenceA1";
    case TheoremReport::Which::nonexistence_a2: return "NonexistenceA2";
    default: return "K0Condition";
    }
}

/// C_k = (k+1) (2 bbar - ubar) (N-1) sqrt(2 (F(2 bbar) + Ftilde))
///       / (F(2 bbar) - F(bbar)); exposed for synthetic-input checks.
inline double ck_formula(int k, int N, double beta_bar, double u_bar_2betabar, double F_2betabar,
                         double F_tilde, double F_betabar) {
    return (k + 1.0) * (2.0 * beta_bar - u_bar_2betabar) * (N - 1.0) *
           std::sqrt(2.0 * (F_2betabar + F_tilde)) / (F_2betabar - F_betabar);
}

/// The level point with F = F(2 beta_bar) on the negative side; this is the
/// u_bar of the radius estimate, distinct from the nonexistence theorem's
/// u_bar at level F(gamma_1).
inline double compute_u_bar_2betabar(const NonlinearityModel& m, const Landmarks& lm) {
    double level = m.F_unchecked(2.0 * lm.beta_bar);
    return rightmost_level_point(m, level, m.domain_lo(), 0.0);
}

/// Rightmost negative point at the level of the first barrier, F = F(gamma_1).
inline double compute_u_bar(const NonlinearityModel& m, const Landmarks& lm) {
    return rightmost_level_point(m, m.F_unchecked(lm.gammas_pos.front()), m.domain_lo(), 0.0);
}

/// The minimal radius certificate constant of the node-count lemma (case A2).
inline double compute_Ck(const NonlinearityModel& m, const Landmarks& lm, int N, int k) {
    if (!(2.0 * lm.beta_bar > 0) || !m.in_domain(2.0 * lm.beta_bar))
        throw LevelNotAttained("2 beta_bar outside the evaluable range");
    double F2b = m.F_unchecked(2.0 * lm.beta_bar);
    double ub2 = compute_u_bar_2betabar(m, lm);
    double F_tilde = -extrema_F(m, lm.beta_star_minus, lm.beta_star).min_value;
    double Fb = m.F_unchecked(lm.beta_bar);
    return ck_formula(k, N, lm.beta_bar, ub2, F2b, F_tilde, Fb);
}

namespace detail {

inline double simpson_rec_impl(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double tol,
                               int depth) {
    double m = 0.5 * (a + b);
    double lm_ = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm_), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) return left + right;
    return simpson_rec_impl(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec_impl(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec_impl(f, a, b, fa, fm, fb, whole, tol, 44);
}

} // namespace detail

/// int_0^{beta_1} |F(s)| ds by adaptive quadrature.
inline double integral_abs_F(const NonlinearityModel& m, double b1) {
    return detail::adaptive_simpson([&m](double s) { return std::abs(m.F_unchecked(s)); }, 0.0, b1,
                                    1e-13);
}

/// Theorem-style nonexistence inequality. holds = true certifies that no
/// bound state with j <= k sign changes starts in (beta_star, gamma_star).
/// Case (A2) needs alpha_k from the search module's estimate.
inline TheoremReport nonexistence_condition(const NonlinearityModel& m, const Landmarks& lm, int N,
                                            int k, std::optional<double> alpha_k = std::nullopt) {
    TheoremReport rep;
    if (lm.gammas_pos.empty()) throw LandmarkNotFound("missing gamma_1");
    double g1 = lm.gammas_pos.front();
    double Fg1 = m.F_unchecked(g1);
    double u_bar = lm.u_bar;
    double minF = extrema_F(m, lm.beta_star_minus, lm.beta_star).min_value;
    rep.lhs = -minF;
    double tail_term;
    if (lm.case_ == HypothesisCase::A1) {
        rep.which = TheoremReport::Which::nonexistence_a1;
        tail_term = m.F_unchecked(m.gamma_star);
        rep.constants.emplace_back("F_gamma_star", tail_term);
    } else {
        rep.which = TheoremReport::Which::nonexistence_a2;
        if (!alpha_k) throw LandmarkNotFound("case (A2) needs alpha_k from estimate_alpha_k");
        tail_term = extrema_F(m, 0.0, *alpha_k).max_value;
        rep.constants.emplace_back("alpha_k", *alpha_k);
        rep.constants.emplace_back("sup_F_0_alpha_k", tail_term);
    }
    rep.rhs = (lm.beta_star - g1) / (2.0 * (N - 1.0) * (k + 1.0)) * Fg1 / (g1 - u_bar) - tail_term;
    rep.constants.emplace_back("k", k);
    rep.constants.emplace_back("beta_star", lm.beta_star);
    rep.constants.emplace_back("beta_star_minus", lm.beta_star_minus);
    rep.constants.emplace_back("gamma_1", g1);
    rep.constants.emplace_back("F_gamma_1", Fg1);
    rep.constants.emplace_back("u_bar_gamma1", u_bar);
    rep.constants.emplace_back("min_F_bsm_bs", minF);
    rep.holds = rep.lhs < rep.rhs;
    return rep;
}

/// The sufficient condition for k_0 = 0: two bound states for every count.
/// F_inf_override stands in for lim F at infinity when a bounded tail is not
/// representable; case (A2) with a finite limit uses I_bar = F_inf.
inline TheoremReport k0_condition(const NonlinearityModel& m, const Landmarks& lm, int N,
                                  std::optional<double> F_inf_override = std::nullopt) {
    TheoremReport rep;
    rep.which = TheoremReport::Which::k0_condition;
    double b1 = lm.betas_pos.front();
    double bstar = lm.beta_star;
    double bbar = lm.beta_bar;
    double gM = lm.gammas_pos.back();
    double FgM = m.F_unchecked(gM);
    double Fbb = m.F_unchecked(bbar);

    double F_bar = -extrema_F(m, 0.0, b1).min_value;
    double F_hat = -extrema_F(m, b1, bstar).min_value;
    double C_bar = 2.0 * (N - 1.0) * (bbar - b1) / (Fbb - FgM) * std::sqrt(2.0 * (Fbb + F_hat));
    double min_f = extrema_f(m, bstar, bbar).min_value;
    double A = (bstar - b1) / std::sqrt(Fbb - FgM) + std::sqrt(2.0 * N * (bbar - bstar) / min_f);
    double I_bar;
    double Q_bar = 0.0;
    if (lm.case_ == HypothesisCase::A1) {
        I_bar = m.F_unchecked(m.gamma_star);
    } else {
        A = std::max(1.0, A);
        Q_bar = -extrema_Q(m, N, lm.s0, bbar).min_value;
        double F_inf = F_inf_override ? *F_inf_override : m.F_infinity();
        if (std::isfinite(F_inf)) {
            I_bar = F_inf; // the remark's substitution
            rep.constants.emplace_back("F_inf", F_inf);
        } else {
            double supQ = extrema_Q(m, N, b1, bbar).max_value;
            double minQ = extrema_Q(m, N, lm.s0, bbar).min_value;
            double ratio = (C_bar + 1.0) / C_bar;
            I_bar = std::pow(ratio, N) *
                        (2.0 * Fbb + (bbar - b1) * (bbar - b1) + (supQ - minQ) / N) +
                    (N - 2.0) * (N - 2.0) * bbar * bbar / (2.0 * C_bar * C_bar);
        }
    }
    double intF = integral_abs_F(m, b1);
    rep.lhs = (C_bar + A) * I_bar;
    rep.rhs = std::sqrt(2.0) * (N - 1.0) / std::sqrt(I_bar + F_bar) * intF;
    rep.holds = rep.lhs < rep.rhs;
    rep.constants.emplace_back("F_bar", F_bar);
    rep.constants.emplace_back("F_hat", F_hat);
    rep.constants.emplace_back("C_bar", C_bar);
    rep.constants.emplace_back("A", A);
    rep.constants.emplace_back("I_bar", I_bar);
    rep.constants.emplace_back("Q_bar", Q_bar);
    rep.constants.emplace_back("beta_1", b1);
    rep.constants.emplace_back("beta_star", bstar);
    rep.constants.emplace_back("beta_bar", bbar);
    rep.constants.emplace_back("int_abs_F", intF);
    return rep;
}

} // namespace nodal
