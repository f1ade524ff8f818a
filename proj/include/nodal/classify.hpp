#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nodal/energies.hpp"
#include "nodal/integrate.hpp"
#include "nodal/landmarks.hpp"

namespace nodal {

enum class Label { Q, S, Upsilon, F, G, Undetermined };

inline const char* to_string(Label l) {
    switch (l) {
    case Label::Q: return "Q";
    case Label::S: return "S";
    case Label::Upsilon: return "Upsilon";
    case Label::F: return "F";
    case Label::G: return "G";
    default: return "Undetermined";
    }
}

/// Set membership of a completed trajectory, with numeric margins.
struct Classification {
    Label label = Label::Undetermined;
    int k = 0;                // paper index: a P/G/F-type outcome after k-1 zeros
    int zero_count = 0;       // simple zeros = the retained N_k history
    double critical_value = std::numeric_limits<double>::quiet_NaN();
    double margin = 0;        // distance to the nearest decision boundary in u
    int well_index = 0;       // S only: the capturing well (gamma_i, gamma_{i+1})
    int upsilon_index = 0;    // Upsilon only: the matched gamma index
    std::string reason;       // Undetermined only
    double terminal_r = 0, terminal_u = 0, terminal_v = 0, terminal_I = 0;

    bool is_P_type() const { return label == Label::Q || label == Label::S || label == Label::Upsilon; }
};

struct ClassifyParams {
    double eps_gamma_rel = 1e-6; // Upsilon window, relative to the gamma scale
    double eps_margin = 1e-8;    // below this the classification is ambiguous
};

/// Zero radii Z_k (with the sign of u') and extremum radii T_k (with values).
struct ZkTk {
    std::vector<double> Z;
    std::vector<int> Z_sign; // 0 marks a terminal double zero
    std::vector<double> T;
    std::vector<double> T_value;
};

/// Splits the event list into the zero/turning cascade. A terminal double
/// zero contributes the final Z with u' = 0. Throws MalformedTrajectory if
/// some pair of consecutive zeros does not enclose exactly one extremum.
inline ZkTk extract_Zk_Tk(const Trajectory& traj) {
    ZkTk out;
    for (const Event& e : traj.events) {
        if (e.kind == Event::Kind::simple_zero) {
            out.Z.push_back(e.r);
            out.Z_sign.push_back(e.uprime_sign);
        } else if (e.kind == Event::Kind::double_zero) {
            out.Z.push_back(e.r);
            out.Z_sign.push_back(0);
        } else if (e.kind == Event::Kind::extremum) {
            out.T.push_back(e.r);
            out.T_value.push_back(e.u);
        }
    }
    for (std::size_t i = 0; i + 1 < out.Z.size(); ++i) {
        int between = 0;
        for (double t : out.T)
            if (t > out.Z[i] && t < out.Z[i + 1]) ++between;
        if (between != 1)
            throw MalformedTrajectory("zeros at r = " + std::to_string(out.Z[i]) + " and r = " +
                                      std::to_string(out.Z[i + 1]) + " enclose " +
                                      std::to_string(between) + " extrema");
    }
    return out;
}

/// Maps a terminated trajectory to its set label. The critical value is the
/// first extremum after the last zero; the trajectory's own termination
/// certificate decides between the G / F / P-type branches.
inline Classification classify(const Trajectory& traj, const Landmarks& lm,
                               const ClassifyParams& par = {}) {
    Classification out;
    out.zero_count = traj.sign_changes();
    out.k = out.zero_count + 1;
    out.terminal_r = traj.r_end();
    out.terminal_u = traj.u_at(out.terminal_r);
    out.terminal_v = traj.v_at(out.terminal_r);
    out.terminal_I = energy_I(traj, out.terminal_r);

    using R = Termination::Reason;
    R reason = traj.termination.reason;

    if (reason == R::reached_rmax || reason == R::oscillation_fault || reason == R::level_stop) {
        out.label = Label::Undetermined;
        out.reason = reason == R::reached_rmax  ? "reached r_max before a terminal certificate"
                     : reason == R::level_stop ? "stopped at a tracked level"
                                               : "sign changes exceeded k_cap";
        return out;
    }
    if (reason == R::double_zero || (reason == R::converged && traj.termination.ell == 0.0)) {
        out.label = Label::G;
        out.critical_value = 0.0;
        out.margin = 0.0;
        return out;
    }

    // first extremum after the last simple zero
    double last_zero = -1.0;
    for (const Event& e : traj.events)
        if (e.kind == Event::Kind::simple_zero) last_zero = e.r;
    std::optional<double> cv;
    for (const Event& e : traj.events) {
        if (e.kind == Event::Kind::extremum && e.r > last_zero) {
            cv = e.u;
            break;
        }
    }

    if (!cv) {
        if (reason == R::converged) {
            // monotone tail into a zero of f: the forbidden-sign class F_k
            out.label = Label::F;
            out.critical_value = traj.termination.ell;
            out.margin = std::abs(traj.termination.ell);
            return out;
        }
        // trapped without a recorded turning point: classify by position
        cv = out.terminal_u;
    }

    out.critical_value = *cv;
    double gscale = std::isfinite(lm.gamma_star) ? std::abs(lm.gamma_star)
                                                 : std::max(1.0, lm.gammas_pos.back());
    double eps_gamma = par.eps_gamma_rel * gscale;

    // Upsilon: the critical value sits on an interior maximum of F
    for (int i = -lm.M_bar; i <= lm.M; ++i) {
        if (i == 0) continue;
        double g = lm.gamma(i);
        if (std::abs(*cv - g) <= eps_gamma) {
            out.label = Label::Upsilon;
            out.upsilon_index = i;
            out.margin = eps_gamma - std::abs(*cv - g);
            return out;
        }
    }

    double gm1 = lm.gamma(-1); // gamma_star_minus floor when M_bar = 0
    double gp1 = lm.gamma(1);
    if (*cv > gm1 && *cv < gp1 && *cv != 0.0) {
        out.label = Label::Q;
        out.margin = std::min({std::abs(*cv - gm1), std::abs(*cv), std::abs(gp1 - *cv)});
    } else if (const Well* w = lm.well_containing(*cv); w && w->index != 0 && w->index != -1) {
        out.label = Label::S;
        out.well_index = w->index;
        double hi_margin = std::isfinite(w->hi) ? w->hi - *cv : std::numeric_limits<double>::infinity();
        out.margin = std::min(*cv - w->lo, hi_margin);
    } else {
        out.label = Label::Undetermined;
        out.reason = "critical value outside all wells";
        return out;
    }
    if (out.margin < par.eps_margin)
        throw AmbiguousClassification("margin " + std::to_string(out.margin) +
                                      " below eps_margin; refine integrator tolerances");
    return out;
}

} // namespace nodal
