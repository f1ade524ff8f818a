#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "nodal/analysis.hpp"
#include "nodal/errors.hpp"
#include "nodal/hypotheses.hpp"
#include "nodal/nonlinearity.hpp"

namespace nodal {

/// Interval (lo, hi) between consecutive chain maxima of F. A trajectory
/// with lo < u < hi and I < edge_min_F can never leave the interval.
struct Well {
    int index = 0; // paper index of the left edge gamma
    double lo = 0;
    double hi = 0;
    double F_lo = 0;
    double F_hi = 0;
    double edge_min_F = 0;
};

/// The Definition 1.1 constants of a model that passed (A1) or (A2).
struct Landmarks {
    HypothesisCase case_ = HypothesisCase::Neither;
    double delta = 0;
    std::vector<double> gammas_pos; // gamma_1 .. gamma_M, ascending
    std::vector<double> gammas_neg; // gamma_{-1}, gamma_{-2}, ... (descending s)
    std::vector<double> betas_pos;  // beta_i aligned with gammas_pos
    std::vector<double> betas_neg;  // beta_{-1}, ... aligned with gammas_neg
    double beta_star = 0;
    double beta_star_minus = 0;
    double beta_bar = 0;
    double u_bar = 0; // rightmost s < 0 with F(u_bar) = F(gamma_1)
    double s0 = std::numeric_limits<double>::quiet_NaN();    // (A2)
    double theta = std::numeric_limits<double>::quiet_NaN(); // (A2)
    int M = 0;
    int M_bar = 0;
    double gamma_star = 0;       // +inf in case (A2)
    double gamma_star_minus = 0; // finite floor
    double F_gamma_star = 0;     // F(gamma_star), +inf in case (A2)
    double origin_well_depth = 0;
    std::vector<Well> wells; // ascending in s, indices M_bar-1 .. M (paper numbering)

    /// gamma_i for i in [-(M_bar+1), M+1]; gamma_0 = 0, the extremes are the
    /// domain endpoints.
    double gamma(int i) const {
        if (i == 0) return 0.0;
        if (i > 0) {
            if (i <= M) return gammas_pos[static_cast<std::size_t>(i - 1)];
            return gamma_star;
        }
        int j = -i;
        if (j <= M_bar) return gammas_neg[static_cast<std::size_t>(j - 1)];
        return gamma_star_minus;
    }

    const Well* well_containing(double u) const {
        for (const Well& w : wells)
            if (u > w.lo && u < w.hi) return &w;
        return nullptr;
    }
};

/// All Definition 1.1 constants. Throws LandmarkNotFound when the hypotheses
/// fail or a required level crossing does not exist.
inline Landmarks compute_landmarks(const NonlinearityModel& m, int N) {
    HypothesisReport rep = check_hypotheses(m, N);
    if (!rep.passed())
        throw LandmarkNotFound("hypotheses not satisfied: " + rep.first_failure());

    Landmarks lm;
    lm.case_ = rep.case_;
    lm.delta = rep.delta;
    lm.gamma_star = m.gamma_star_infinite ? std::numeric_limits<double>::infinity() : m.gamma_star;
    lm.gamma_star_minus = m.domain_lo();
    lm.F_gamma_star = m.F_infinity();

    const double floor = m.domain_lo();
    const double spline_hi = m.has_tail() ? m.tail.s_tail : m.gamma_star;

    std::vector<CriticalPoint> maxima;
    for (const CriticalPoint& cp : critical_points(m, floor, spline_hi))
        if (cp.is_max) maxima.push_back(cp);

    // positive chain: gamma_1 = first positive maximum with F > 0, then each
    // next maximum whose value strictly exceeds the previous one
    {
        double cur_s = 0, cur_F = 0;
        bool started = false;
        for (const CriticalPoint& cp : maxima) {
            if (cp.s <= 0.0) continue;
            if (!started) {
                if (cp.F > 0.0) {
                    lm.gammas_pos.push_back(cp.s);
                    cur_s = cp.s;
                    cur_F = cp.F;
                    started = true;
                }
            } else if (cp.s > cur_s && cp.F > cur_F) {
                lm.gammas_pos.push_back(cp.s);
                cur_s = cp.s;
                cur_F = cp.F;
            }
        }
        if (!started) throw LandmarkNotFound("no positive local maximum of F with F > 0");
        lm.M = static_cast<int>(lm.gammas_pos.size());
    }

    // negative chain, moving left from 0
    {
        double cur_F = 0;
        bool started = false;
        for (auto it = maxima.rbegin(); it != maxima.rend(); ++it) {
            if (it->s >= 0.0) continue;
            if (!started) {
                if (it->F > 0.0) {
                    lm.gammas_neg.push_back(it->s);
                    cur_F = it->F;
                    started = true;
                }
            } else if (it->s < lm.gammas_neg.back() && it->F > cur_F) {
                lm.gammas_neg.push_back(it->s);
                cur_F = it->F;
            }
        }
        lm.M_bar = static_cast<int>(lm.gammas_neg.size());
    }

    auto F_of = [&m](double s) { return m.F_unchecked(s); };

    try {
        // beta_i, i >= 1: largest point in (gamma_{i-1}, gamma_i) at the level
        // of the left maximum (gamma_0 = 0 with F = 0)
        for (int i = 1; i <= lm.M; ++i) {
            double lo = i == 1 ? 0.0 : lm.gammas_pos[static_cast<std::size_t>(i - 2)];
            double level = i == 1 ? 0.0 : F_of(lo);
            lm.betas_pos.push_back(
                rightmost_level_point(m, level, lo, lm.gammas_pos[static_cast<std::size_t>(i - 1)]));
        }
        lm.beta_star = rightmost_level_point(m, F_of(lm.gammas_pos.back()), lm.gammas_pos.back(),
                                             m.gamma_star_infinite
                                                 ? std::numeric_limits<double>::infinity()
                                                 : m.gamma_star);

        // beta_i, i <= -1: smallest point in (gamma_i, gamma_{i+1}) at the level
        // of the right maximum
        for (int j = 1; j <= lm.M_bar; ++j) {
            double hi = j == 1 ? 0.0 : lm.gammas_neg[static_cast<std::size_t>(j - 2)];
            double level = j == 1 ? 0.0 : F_of(hi);
            lm.betas_neg.push_back(
                leftmost_level_point(m, level, lm.gammas_neg[static_cast<std::size_t>(j - 1)], hi));
        }
        double gamma_mbar = lm.M_bar == 0 ? 0.0 : lm.gammas_neg.back();
        double level_mbar = lm.M_bar == 0 ? 0.0 : F_of(gamma_mbar);
        lm.beta_star_minus = leftmost_level_point(m, level_mbar, floor, gamma_mbar);

        // u_bar: the rightmost negative point at the level of gamma_1. The
        // search runs over the whole negative domain: when M_bar = 0 the level
        // F(gamma_1) > 0 is only attained left of beta_star_minus.
        lm.u_bar = rightmost_level_point(m, F_of(lm.gammas_pos.front()), floor, 0.0);
    } catch (const LevelNotAttained& e) {
        throw LandmarkNotFound(std::string("level equation unsolvable: ") + e.what());
    }

    // beta_bar: smallest candidate above beta_star clearing the
    // F(beta_star_minus) level, in case (A2) additionally with Q > 0 on
    // {F > F(beta_bar)}
    {
        double F_bsm = F_of(lm.beta_star_minus);
        double step;
        int count;
        if (lm.case_ == HypothesisCase::A1) {
            step = (m.gamma_star - lm.beta_star) / 64.0;
            count = 63;
        } else {
            step = std::max(1.0, lm.beta_star) / 64.0;
            count = 256;
        }
        bool found = false;
        for (int j = 1; j <= count && !found; ++j) {
            double s = lm.beta_star + j * step;
            if (!(F_of(s) > F_bsm + 1e-6)) continue;
            if (lm.case_ == HypothesisCase::A2) {
                double level = F_of(s);
                // positive part of {F > level}
                double w = rightmost_level_point(m, level, 0.0,
                                                 std::numeric_limits<double>::infinity());
                if (w < spline_hi && extrema_Q(m, N, w, spline_hi).min_value <= 0.0) continue;
                double q_at = Q_unchecked(m, N, std::max(w, spline_hi));
                double B = m.tail.c * (2.0 * N / (m.tail.p + 1.0) - (N - 2.0));
                if (!(q_at > 0.0) || !(B > 0.0)) continue;
                // negative part of {F > level}
                if (m.F_at_floor() > level) {
                    double z = leftmost_level_point(m, level, floor, 0.0);
                    if (extrema_Q(m, N, floor, z).min_value <= 0.0) continue;
                }
            }
            lm.beta_bar = s;
            found = true;
        }
        if (!found) throw LandmarkNotFound("no admissible beta_bar candidate");
    }

    if (lm.case_ == HypothesisCase::A2) {
        lm.s0 = rep.f5.witness_s;
        lm.theta = 0.5;
        double need = 1.1 * std::max(F_of(lm.gammas_pos.back()), F_of(lm.beta_bar));
        if (m.gamma_star_minus_infinite && !(m.F_at_floor() >= need))
            throw LandmarkNotFound("gamma_star_minus floor too shallow for the referenced levels");
    }

    // depth of the F < 0 neighborhood of the origin
    {
        auto [nroot, proot] = origin_negative_span(m);
        lm.origin_well_depth = -extrema_F(m, nroot, proot).min_value;
    }

    // wells between consecutive chain maxima, paper indexing by the left edge
    {
        std::vector<std::pair<int, double>> chain;
        chain.emplace_back(-(lm.M_bar + 1), floor);
        for (int j = lm.M_bar; j >= 1; --j)
            chain.emplace_back(-j, lm.gammas_neg[static_cast<std::size_t>(j - 1)]);
        chain.emplace_back(0, 0.0);
        for (int i = 1; i <= lm.M; ++i)
            chain.emplace_back(i, lm.gammas_pos[static_cast<std::size_t>(i - 1)]);
        chain.emplace_back(lm.M + 1, m.gamma_star_infinite
                                         ? std::numeric_limits<double>::infinity()
                                         : m.gamma_star);
        for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
            Well w;
            w.index = chain[k].first;
            w.lo = chain[k].second;
            w.hi = chain[k + 1].second;
            w.F_lo = k == 0 ? m.F_at_floor() : F_of(w.lo);
            w.F_hi = std::isfinite(w.hi) ? F_of(w.hi) : m.F_infinity();
            w.edge_min_F = std::min(w.F_lo, w.F_hi);
            lm.wells.push_back(w);
        }
    }

    // ordering sanity per Definition 1.1
    {
        bool ok = lm.delta > 0 && lm.delta < lm.gammas_pos.front() &&
                  lm.gammas_pos.back() < lm.beta_star && lm.beta_star < lm.beta_bar;
        if (!m.gamma_star_infinite) ok = ok && lm.beta_bar < m.gamma_star;
        for (int i = 0; i + 1 < lm.M; ++i)
            ok = ok && F_of(lm.gammas_pos[i]) < F_of(lm.gammas_pos[i + 1]);
        if (!ok) throw LandmarkNotFound("landmark ordering chain violated");
    }

    return lm;
}

} // namespace nodal
