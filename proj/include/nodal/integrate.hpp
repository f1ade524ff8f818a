#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "nodal/errors.hpp"
#include "nodal/landmarks.hpp"
#include "nodal/nonlinearity.hpp"

namespace nodal {

/// Everything the initial value solver needs besides the model.
struct ProblemConfig {
    int N = 3;
    double alpha = 1.0;
    double rel_tol = 1e-9;
    double abs_tol = 1e-9;
    double r_max = 200.0;
    double eps_zero = 1e-10;  // zero-detection scale
    double eps_double = 1e-6; // double-zero threshold on |u'| at a zero
    int k_cap = 50;           // admissible sign changes before declaring a fault
    int stop_at_level = -1;   // terminate once this tracked level is crossed
    double conv_window = 5.0; // persistence interval for ConvergedTo
    double conv_eps_f = 1e-7;
    double conv_eps_v = 1e-7;
    double conv_eps_I = 1e-9;
    std::vector<std::pair<int, double>> tracked_levels; // (id, u level)

    void validate() const {
        if (!(rel_tol > 0) || !(abs_tol > 0)) throw Error("tolerances must be positive");
        if (!(r_max > 0)) throw Error("r_max must be positive");
        if (!(eps_double >= eps_zero) || !(eps_zero > 0))
            throw Error("need eps_double >= eps_zero > 0");
        if (k_cap < 1) throw Error("k_cap must be >= 1");
    }
};

struct Event {
    enum class Kind { simple_zero, extremum, double_zero, level_crossing };
    Kind kind = Kind::simple_zero;
    double r = 0;
    double u = 0;
    double uprime = 0;
    double I = 0;
    int uprime_sign = 0; // simple zeros
    int level_id = -1;   // level crossings
};

struct Termination {
    enum class Reason { double_zero, converged, trapped, reached_rmax, oscillation_fault, level_stop };
    Reason reason = Reason::reached_rmax;
    double r = 0;
    double ell = 0;      // converged: the zero of f
    int well_index = 0;  // trapped: paper index of the capturing well
};

inline const char* to_string(Termination::Reason t) {
    switch (t) {
    case Termination::Reason::double_zero: return "DoubleZeroAt";
    case Termination::Reason::converged: return "ConvergedTo";
    case Termination::Reason::trapped: return "TrappedInWell";
    case Termination::Reason::reached_rmax: return "ReachedRmax";
    case Termination::Reason::oscillation_fault: return "OscillationFault";
    default: return "LevelStop";
    }
}

namespace detail {

/// One accepted step with its contiguous dense-output coefficients.
struct DenseStep {
    double r0 = 0, h = 0;
    std::array<double, 5> cu{}, cv{};

    static double eval(const std::array<double, 5>& c, double theta) {
        double t1 = 1.0 - theta;
        return c[0] + theta * (c[1] + t1 * (c[2] + theta * (c[3] + t1 * c[4])));
    }
    double u(double theta) const { return eval(cu, theta); }
    double v(double theta) const { return eval(cv, theta); }
};

} // namespace detail

struct Sample {
    double r = 0, u = 0, v = 0;
};

/// Solution of the IVP on [0, r_end] with events and a termination
/// certificate. Dense output is kept per step, so state and energies can be
/// evaluated anywhere in the domain. Immutable once integrate() returns.
class Trajectory {
  public:
    std::shared_ptr<const NonlinearityModel> model;
    ProblemConfig config;
    double I0 = 0;      // F(alpha)
    double r_series = 0; // series start radius
    double series_c2 = 0, series_c4 = 0; // u = alpha + c2 r^2 + c4 r^4 below r_series
    std::vector<detail::DenseStep> steps;
    std::vector<Sample> samples;
    std::vector<Event> events;
    Termination termination;

    double r_end() const { return termination.r; }

    double u_at(double r) const {
        check_range(r);
        if (r <= r_series) return config.alpha + r * r * (series_c2 + r * r * series_c4);
        const detail::DenseStep& s = step_at(r);
        return s.u((r - s.r0) / s.h);
    }

    double v_at(double r) const {
        check_range(r);
        if (r <= r_series) return r * (2.0 * series_c2 + 4.0 * r * r * series_c4);
        const detail::DenseStep& s = step_at(r);
        return s.v((r - s.r0) / s.h);
    }

    int sign_changes() const {
        int n = 0;
        for (const Event& e : events)
            if (e.kind == Event::Kind::simple_zero) ++n;
        return n;
    }

  private:
    void check_range(double r) const {
        if (!(r >= 0.0) || r > r_end() * (1.0 + 1e-12) + 1e-300)
            throw OutOfRange("r outside trajectory domain");
    }

    const detail::DenseStep& step_at(double r) const {
        std::size_t lo = 0, hi = steps.size();
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            if (r < steps[mid].r0)
                hi = mid;
            else
                lo = mid;
        }
        return steps[lo];
    }
};

/// State at a small r0 > 0 from the regularizing series
/// u(r) = alpha - f(alpha) r^2 / (2N) + c4 r^4 + O(r^6).
inline std::tuple<double, double, double> series_start(const NonlinearityModel& m,
                                                       const ProblemConfig& cfg) {
    m.require_in_domain(cfg.alpha);
    double fa = m.f_unchecked(cfg.alpha);
    double fpa = m.f_prime(cfg.alpha);
    double c2 = -fa / (2.0 * cfg.N);
    double c4 = fa * fpa / (8.0 * cfg.N * (cfg.N + 2.0));
    double r0 = std::pow(cfg.abs_tol / std::max(std::abs(c4), 1e-30), 0.25);
    r0 = std::min(std::max(r0, 1e-6), 1e-2);
    double u = cfg.alpha + r0 * r0 * (c2 + r0 * r0 * c4);
    double v = r0 * (2.0 * c2 + 4.0 * r0 * r0 * c4);
    return {r0, u, v};
}

namespace detail {

struct Dopri5 {
    // Dormand-Prince 5(4) tableau
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    // dense output weights
    static constexpr double d1 = -12715105075.0 / 11282082432.0;
    static constexpr double d3 = 87487479700.0 / 32700410799.0;
    static constexpr double d4 = -10690763975.0 / 1880347072.0;
    static constexpr double d5 = 701980252875.0 / 199316789632.0;
    static constexpr double d6 = -1453857185.0 / 822651844.0;
    static constexpr double d7 = 69997945.0 / 29380423.0;
};

/// Bisection for a root of g on [ta, tb] given opposite signs.
template <class G>
double bisect_theta(const G& g, double ta, double tb, double ga) {
    for (int i = 0; i < 90; ++i) {
        double tm = 0.5 * (ta + tb);
        double gm = g(tm);
        if (gm == 0.0) return tm;
        if ((ga < 0.0) == (gm < 0.0)) {
            ta = tm;
            ga = gm;
        } else {
            tb = tm;
        }
        if (tb - ta < 1e-16) break;
    }
    return 0.5 * (ta + tb);
}

} // namespace detail

/// Integrates the IVP u'' + (N-1)/r u' + f(u) = 0, u(0) = alpha, u'(0) = 0.
/// Landmarks enable well-trapping detection and the double-zero threshold
/// scale; without them (diagnostic runs) those certificates are disabled.
inline Trajectory integrate(const NonlinearityModel& model, const ProblemConfig& cfg,
                            const Landmarks* lm) {
    cfg.validate();
    model.require_in_domain(cfg.alpha);

    Trajectory traj;
    traj.model = std::make_shared<NonlinearityModel>(model);
    traj.config = cfg;
    traj.I0 = model.F_unchecked(cfg.alpha);

    const int N = cfg.N;
    auto rhs = [&model, N](double r, double u, double v, double& du, double& dv) {
        du = v;
        dv = -(N - 1) / r * v - model.f_unchecked(u);
    };

    auto [r0, u0, v0] = series_start(model, cfg);
    traj.r_series = r0;
    {
        double fa = model.f_unchecked(cfg.alpha);
        traj.series_c2 = -fa / (2.0 * N);
        traj.series_c4 = fa * model.f_prime(cfg.alpha) / (8.0 * N * (N + 2.0));
    }
    traj.samples.push_back({0.0, cfg.alpha, 0.0});
    traj.samples.push_back({r0, u0, v0});

    const double uscale = std::max(1.0, std::abs(cfg.alpha));
    const double vscale = lm ? std::sqrt(2.0 * std::max(lm->origin_well_depth, 0.0)) : 0.0;

    // Isolated zeros of f that a trajectory can settle on. Local maxima of F
    // are saddle levels: a solution lingers there arbitrarily long before
    // escaping, so they are never convergence targets. The origin is kept as
    // the bound-state decay target.
    std::vector<double> f_zero_list;
    {
        double lo = model.domain_lo();
        double hi = model.has_tail() ? model.tail.s_tail : model.domain_hi();
        bool any_zero_segment = false;
        for (const Segment& g : model.segments())
            if (g.f.is_zero()) any_zero_segment = true;
        if (!any_zero_segment) {
            for (const CriticalPoint& cp : critical_points(model, lo, hi))
                if (cp.is_min) f_zero_list.push_back(cp.s);
            f_zero_list.push_back(0.0);
        }
    }
    auto nearest_f_zero = [&f_zero_list](double u) -> std::optional<double> {
        std::optional<double> best;
        for (double z : f_zero_list)
            if (!best || std::abs(u - z) < std::abs(u - *best)) best = z;
        return best;
    };

    double energy = [&] {
        return 0.5 * v0 * v0 + model.F_unchecked(u0);
    }();

    int zero_count = 0;
    bool trap_pending = false;
    int trap_well = 0;
    double trap_r = 0;
    bool conv_active = false;
    double conv_start = 0, conv_ell = 0;
    bool done = false;

    auto finish = [&](Termination::Reason reason, double r, double ell, int well) {
        traj.termination.reason = reason;
        traj.termination.r = r;
        traj.termination.ell = ell;
        traj.termination.well_index = well;
        done = true;
    };

    // level trackers: remaining levels to detect are all of them; every
    // crossing is recorded
    const auto& levels = cfg.tracked_levels;

    double r = r0, u = u0, v = v0;
    double h = r0;
    double k1u, k1v;
    rhs(r, u, v, k1u, k1v);

    using D = detail::Dopri5;
    int rejected_in_row = 0;

    while (!done) {
        if (r >= cfg.r_max) {
            finish(Termination::Reason::reached_rmax, cfg.r_max, 0, 0);
            break;
        }
        h = std::min({h, 1.0, cfg.r_max - r});
        if (h < 1e-12 * std::max(1.0, r)) throw StepFailure("step size underflow at r = " + std::to_string(r));

        double k2u, k2v, k3u, k3v, k4u, k4v, k5u, k5v, k6u, k6v, k7u, k7v;
        double tu, tv;
        tu = u + h * D::a21 * k1u;
        tv = v + h * D::a21 * k1v;
        rhs(r + D::c2 * h, tu, tv, k2u, k2v);
        tu = u + h * (D::a31 * k1u + D::a32 * k2u);
        tv = v + h * (D::a31 * k1v + D::a32 * k2v);
        rhs(r + D::c3 * h, tu, tv, k3u, k3v);
        tu = u + h * (D::a41 * k1u + D::a42 * k2u + D::a43 * k3u);
        tv = v + h * (D::a41 * k1v + D::a42 * k2v + D::a43 * k3v);
        rhs(r + D::c4 * h, tu, tv, k4u, k4v);
        tu = u + h * (D::a51 * k1u + D::a52 * k2u + D::a53 * k3u + D::a54 * k4u);
        tv = v + h * (D::a51 * k1v + D::a52 * k2v + D::a53 * k3v + D::a54 * k4v);
        rhs(r + D::c5 * h, tu, tv, k5u, k5v);
        tu = u + h * (D::a61 * k1u + D::a62 * k2u + D::a63 * k3u + D::a64 * k4u + D::a65 * k5u);
        tv = v + h * (D::a61 * k1v + D::a62 * k2v + D::a63 * k3v + D::a64 * k4v + D::a65 * k5v);
        rhs(r + h, tu, tv, k6u, k6v);
        double u1 = u + h * (D::b1 * k1u + D::b3 * k3u + D::b4 * k4u + D::b5 * k5u + D::b6 * k6u);
        double v1 = v + h * (D::b1 * k1v + D::b3 * k3v + D::b4 * k4v + D::b5 * k5v + D::b6 * k6v);
        rhs(r + h, u1, v1, k7u, k7v);

        double eu = h * (D::e1 * k1u + D::e3 * k3u + D::e4 * k4u + D::e5 * k5u + D::e6 * k6u +
                         D::e7 * k7u);
        double ev = h * (D::e1 * k1v + D::e3 * k3v + D::e4 * k4v + D::e5 * k5v + D::e6 * k6v +
                         D::e7 * k7v);
        double su = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(u), std::abs(u1));
        double sv = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(v), std::abs(v1));
        double err = std::sqrt(0.5 * ((eu / su) * (eu / su) + (ev / sv) * (ev / sv)));

        if (err > 1.0) {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            if (++rejected_in_row > 200) throw StepFailure("controller stalled");
            continue;
        }
        rejected_in_row = 0;

        // dense output
        detail::DenseStep st;
        st.r0 = r;
        st.h = h;
        double du = u1 - u, dv = v1 - v;
        st.cu = {u, du, h * k1u - du, du - h * k7u - (h * k1u - du),
                 h * (D::d1 * k1u + D::d3 * k3u + D::d4 * k4u + D::d5 * k5u + D::d6 * k6u +
                      D::d7 * k7u)};
        st.cv = {v, dv, h * k1v - dv, dv - h * k7v - (h * k1v - dv),
                 h * (D::d1 * k1v + D::d3 * k3v + D::d4 * k4v + D::d5 * k5v + D::d6 * k6v +
                      D::d7 * k7v)};
        traj.steps.push_back(st);

        // locate events inside the step from the dense polynomials
        struct Cand {
            double theta;
            int what; // 0 = u-zero, 1 = v-zero, 2.. = level index + 2
        };
        std::vector<Cand> cands;
        constexpr int nscan = 8;
        auto scan = [&](auto&& g, int what) {
            double prev = g(0.0);
            for (int j = 1; j <= nscan; ++j) {
                double th = static_cast<double>(j) / nscan;
                double val = g(th);
                if (prev == 0.0 && j == 1 && what != 0) {
                    // event exactly at the step start was handled previously
                } else if (prev * val < 0.0) {
                    double t = detail::bisect_theta(g, th - 1.0 / nscan, th, prev);
                    cands.push_back({t, what});
                }
                prev = val;
            }
        };
        scan([&st](double th) { return st.u(th); }, 0);
        scan([&st](double th) { return st.v(th); }, 1);
        for (std::size_t li = 0; li < levels.size(); ++li)
            scan([&st, L = levels[li].second](double th) { return st.u(th) - L; },
                 static_cast<int>(li) + 2);
        std::sort(cands.begin(), cands.end(),
                  [](const Cand& a, const Cand& b) { return a.theta < b.theta; });

        for (const Cand& c : cands) {
            double re = r + c.theta * h;
            double ue = st.u(c.theta);
            double ve = st.v(c.theta);
            double Ie = 0.5 * ve * ve + model.F_unchecked(ue);
            if (!traj.events.empty() &&
                std::abs(traj.events.back().r - re) <= 1e-10 * (1.0 + re) &&
                ((c.what == 0 && traj.events.back().kind == Event::Kind::simple_zero) ||
                 (c.what == 1 && traj.events.back().kind == Event::Kind::extremum)))
                continue; // seam duplicate from the previous step's boundary
            if (c.what == 0) {
                if (std::abs(ve) <= cfg.eps_double * vscale) {
                    traj.events.push_back({Event::Kind::double_zero, re, ue, ve, Ie, 0, -1});
                    finish(Termination::Reason::double_zero, re, 0, 0);
                    break;
                }
                Event e{Event::Kind::simple_zero, re, ue, ve, Ie, ve > 0 ? 1 : -1, -1};
                traj.events.push_back(e);
                trap_pending = false; // a zero contradicts a pending trap: keep going
                if (++zero_count > cfg.k_cap) {
                    finish(Termination::Reason::oscillation_fault, re, 0, 0);
                    break;
                }
            } else if (c.what == 1) {
                traj.events.push_back({Event::Kind::extremum, re, ue, ve, Ie, 0, -1});
                if (!trap_pending && lm) {
                    const Well* w = lm->well_containing(ue);
                    if (w && Ie < w->edge_min_F) {
                        trap_pending = true;
                        trap_well = w->index;
                        trap_r = re;
                    }
                }
                if (trap_pending) {
                    finish(Termination::Reason::trapped, re, 0, trap_well);
                    break;
                }
            } else {
                int id = levels[c.what - 2].first;
                traj.events.push_back({Event::Kind::level_crossing, re, ue, ve, Ie, 0, id});
                if (id == cfg.stop_at_level) {
                    finish(Termination::Reason::level_stop, re, 0, 0);
                    break;
                }
            }
        }
        if (done) {
            traj.samples.push_back({traj.termination.r, traj.u_at(traj.termination.r),
                                    traj.v_at(traj.termination.r)});
            break;
        }

        r += h;
        u = u1;
        v = v1;
        k1u = k7u;
        k1v = k7v;
        traj.samples.push_back({r, u, v});
        energy = 0.5 * v * v + model.F_unchecked(u);

        // well trapping at the step end
        if (!trap_pending && lm) {
            const Well* w = lm->well_containing(u);
            if (w && energy < w->edge_min_F) {
                trap_pending = true;
                trap_well = w->index;
                trap_r = r;
            }
        }
        if (trap_pending && r - trap_r > 4.0 * cfg.conv_window) {
            // overdamped capture without a turning point
            finish(Termination::Reason::trapped, r, 0, trap_well);
            break;
        }

        // convergence to an isolated zero of f
        if (!trap_pending) {
            auto ell = nearest_f_zero(u);
            bool ok = ell && std::abs(model.f_unchecked(u)) <= cfg.conv_eps_f &&
                      std::abs(v) <= cfg.conv_eps_v &&
                      std::abs(energy - model.F_unchecked(*ell)) <= cfg.conv_eps_I;
            if (ok) {
                if (!conv_active || conv_ell != *ell) {
                    conv_active = true;
                    conv_start = r;
                    conv_ell = *ell;
                } else if (r - conv_start >= cfg.conv_window) {
                    finish(Termination::Reason::converged, r, conv_ell, 0);
                    break;
                }
            } else {
                conv_active = false;
            }
        }

        if (r >= cfg.r_max) {
            finish(Termination::Reason::reached_rmax, cfg.r_max, 0, 0);
            break;
        }
        h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-10), -0.2)));
    }

    return traj;
}

inline Trajectory integrate(const NonlinearityModel& model, const ProblemConfig& cfg) {
    std::optional<Landmarks> lm;
    try {
        lm = compute_landmarks(model, cfg.N);
    } catch (const Error&) {
        lm.reset();
    }
    return integrate(model, cfg, lm ? &*lm : nullptr);
}

} // namespace nodal
