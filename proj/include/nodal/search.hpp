#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "nodal/classify.hpp"
#include "nodal/energies.hpp"
#include "nodal/integrate.hpp"
#include "nodal/theorems.hpp"

namespace nodal {

struct SearchParams {
    int grid_points = 512;        // initial scan resolution
    int grid_max = 65536;         // escalation cap
    double bisect_tol_rel = 1e-11; // of the scan span
    double cert_u = 1e-5;         // bound-state contract on the certified trajectory
    double cert_v = 1e-5;
    double cert_I = 1e-8;
    double gap_min_rel = 1e-15;   // innermost grid gap toward the dense end
    double alpha_cap = 1e6;       // case (A2): estimate scan cap
    int max_candidates = 64;
    unsigned threads = 0;         // 0 = hardware concurrency
    ProblemConfig integrator;     // alpha is overwritten per evaluation
};

/// One classified initial value.
struct Outcome {
    double alpha = 0;
    std::optional<Classification> cls;
    int count = -1; // sign changes; -1 when integration failed outright
    double term_u = 0, term_v = 0, term_I = 0;
    std::string error;

    bool q_side(int k) const {
        return cls && count == k && (cls->label == Label::Q || cls->label == Label::G);
    }
};

/// Shared alpha -> Outcome store so repeated searches reuse integrations.
class ScanCache {
  public:
    bool get(double alpha, Outcome& out) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = map_.find(alpha);
        if (it == map_.end()) return false;
        out = it->second;
        return true;
    }
    void put(const Outcome& o) {
        std::lock_guard<std::mutex> lock(mu_);
        map_.emplace(o.alpha, o);
    }
    std::size_t size() const {
        std::lock_guard<std::mutex> lock(mu_);
        return map_.size();
    }

  private:
    mutable std::mutex mu_;
    std::map<double, Outcome> map_;
};

namespace detail {

class Evaluator {
  public:
    Evaluator(const NonlinearityModel& m, const Landmarks& lm, int N, const SearchParams& par,
              ScanCache* cache)
        : m_(m), lm_(lm), par_(par), cache_(cache) {
        cfg_ = par.integrator;
        cfg_.N = N;
    }

    Outcome eval(double alpha) const {
        Outcome o;
        if (cache_ && cache_->get(alpha, o)) return o;
        o = eval_fresh(alpha);
        if (cache_) cache_->put(o);
        return o;
    }

    void eval_many(const std::vector<double>& alphas) const {
        std::vector<double> todo;
        Outcome tmp;
        for (double a : alphas)
            if (!cache_ || !cache_->get(a, tmp)) todo.push_back(a);
        if (todo.empty()) return;
        unsigned nthreads = par_.threads ? par_.threads : std::thread::hardware_concurrency();
        nthreads = std::max(1u, std::min<unsigned>(nthreads, todo.size()));
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= todo.size()) return;
                Outcome o = eval_fresh(todo[i]);
                if (cache_) cache_->put(o);
            }
        };
        if (nthreads == 1 || !cache_) {
            // without a cache concurrent results would be dropped
            for (double a : todo)
                if (cache_) cache_->put(eval_fresh(a));
            return;
        }
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    const Landmarks& landmarks() const { return lm_; }
    const NonlinearityModel& model() const { return m_; }
    const ProblemConfig& config() const { return cfg_; }

  private:
    Outcome eval_fresh(double alpha) const {
        Outcome o;
        o.alpha = alpha;
        try {
            ProblemConfig cfg = cfg_;
            cfg.alpha = alpha;
            Trajectory t = integrate(m_, cfg, &lm_);
            o.count = t.sign_changes();
            o.term_u = t.u_at(t.r_end());
            o.term_v = t.v_at(t.r_end());
            o.term_I = energy_I(t, t.r_end());
            try {
                o.cls = classify(t, lm_);
            } catch (const AmbiguousClassification& e) {
                o.error = e.what();
            }
        } catch (const Error& e) {
            o.error = e.what();
        }
        return o;
    }

    const NonlinearityModel& m_;
    const Landmarks& lm_;
    SearchParams par_;
    ScanCache* cache_;
    ProblemConfig cfg_;
};

} // namespace detail

/// Classified grid with maximal constant-label runs.
struct ScanReport {
    std::vector<Outcome> points;
    struct Run {
        std::size_t lo = 0, hi = 0; // inclusive indices
        Label label = Label::Undetermined;
        int k = 0;
    };
    std::vector<Run> runs;
};

namespace detail {

inline void build_runs(ScanReport& rep) {
    rep.runs.clear();
    auto key = [](const Outcome& o) {
        if (!o.cls) return std::pair<Label, int>(Label::Undetermined, -1);
        return std::pair<Label, int>(o.cls->label, o.cls->is_P_type() || o.cls->label == Label::G
                                                       ? o.cls->k
                                                       : 0);
    };
    for (std::size_t i = 0; i < rep.points.size(); ++i) {
        if (rep.runs.empty() || key(rep.points[i]) != key(rep.points[rep.runs.back().lo])) {
            ScanReport::Run r;
            r.lo = r.hi = i;
            auto [label, k] = key(rep.points[i]);
            r.label = label;
            r.k = k;
            rep.runs.push_back(r);
        } else {
            rep.runs.back().hi = i;
        }
    }
}

} // namespace detail

/// Classifies a uniform grid over [alpha_lo, alpha_hi]. Integration errors at
/// single points are recorded in the outcome, not rethrown.
inline ScanReport scan(const NonlinearityModel& m, const Landmarks& lm, int N, double alpha_lo,
                       double alpha_hi, int grid_points, const SearchParams& par = {},
                       ScanCache* cache = nullptr) {
    if (!(alpha_lo < alpha_hi) && grid_points != 1)
        throw InvalidRange("need alpha_lo < alpha_hi");
    if (grid_points < 1) throw InvalidRange("need at least one grid point");
    std::vector<double> grid;
    for (int i = 0; i < grid_points; ++i) {
        double t = grid_points == 1 ? 0.0 : static_cast<double>(i) / (grid_points - 1);
        grid.push_back(alpha_lo + (alpha_hi - alpha_lo) * t);
    }
    ScanCache local;
    detail::Evaluator engc(m, lm, N, par, cache ? cache : &local);
    engc.eval_many(grid);
    ScanReport rep;
    for (double a : grid) rep.points.push_back(engc.eval(a));
    detail::build_runs(rep);
    return rep;
}

/// A located boundary of the node-count function, with its certificate.
struct GBracket {
    double alpha_lo = 0, alpha_hi = 0;
    int count_lo = -1, count_hi = -1;
    std::string label_lo, label_hi;
    double alpha_best = 0;      // the evaluated point with the smallest terminal miss
    double best_u = 0, best_v = 0, best_I = 0;
    int best_count = -1;
    bool certified = false;
    std::string note;

    double width() const { return alpha_hi - alpha_lo; }
};

namespace detail {

/// Bisects the predicate count(alpha) > k over [a, b] down to machine
/// resolution, tracking the best bound-state certificate seen on the way.
inline GBracket bisect_count_boundary(const Evaluator& eng, Outcome a, Outcome b, int k,
                                      const SearchParams& par) {
    GBracket out;
    auto pred = [k](const Outcome& o) { return o.count > k; };
    if (pred(a) == pred(b)) {
        out.note = "endpoints agree on the count predicate";
        return out;
    }
    auto consider_best = [&out, &par, k](const Outcome& o) {
        if (o.count != k && o.count != k + 1) return;
        double miss = std::max(std::abs(o.term_u), std::abs(o.term_v));
        double cur = std::max(std::abs(out.best_u), std::abs(out.best_v));
        if (out.best_count < 0 || miss < cur) {
            out.alpha_best = o.alpha;
            out.best_u = o.term_u;
            out.best_v = o.term_v;
            out.best_I = o.term_I;
            out.best_count = o.count;
        }
        (void)par;
    };
    consider_best(a);
    consider_best(b);
    for (int it = 0; it < 110; ++it) {
        double mid = 0.5 * (a.alpha + b.alpha);
        if (mid <= std::min(a.alpha, b.alpha) || mid >= std::max(a.alpha, b.alpha)) break;
        Outcome om = eng.eval(mid);
        if (om.count < 0) {
            out.note = "integration failure inside the bracket: " + om.error;
            break;
        }
        consider_best(om);
        if (pred(om) == pred(a))
            a = om;
        else
            b = om;
    }
    const Outcome& lo_side = a.count <= k ? a : b;
    const Outcome& hi_side = a.count <= k ? b : a;
    out.alpha_lo = std::min(a.alpha, b.alpha);
    out.alpha_hi = std::max(a.alpha, b.alpha);
    out.count_lo = lo_side.count;
    out.count_hi = hi_side.count;
    out.label_lo = lo_side.cls ? to_string(lo_side.cls->label) : "error";
    out.label_hi = hi_side.cls ? to_string(hi_side.cls->label) : "error";
    bool q_ok = lo_side.q_side(k);
    bool cert_ok = out.best_count == k && std::abs(out.best_u) <= par.cert_u &&
                   std::abs(out.best_v) <= par.cert_v && std::abs(out.best_I) <= par.cert_I;
    out.certified = q_ok && cert_ok;
    if (!out.certified && out.note.empty())
        out.note = !q_ok ? "low side is not a Q/G point of the requested count"
                         : "terminal state misses the bound-state contract";
    return out;
}

/// Log-spaced grid accumulating at the hi end: gaps shrink geometrically
/// from the full span down to gap_min.
inline std::vector<double> log_grid_toward(double lo, double hi, int n, double gap_min) {
    std::vector<double> g;
    double span = hi - lo;
    double lambda = std::log(span / gap_min);
    for (int i = 0; i < n; ++i) {
        double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
        double a = hi - span * std::exp(-lambda * t);
        if (g.empty() || a > g.back()) g.push_back(a);
    }
    return g;
}

/// Inserts log-spaced probes above every steep count cliff, so walls where
/// the node count accumulates become visible to the boundary enumeration.
inline void augment_walls(const Evaluator& eng, std::vector<Outcome>& pts,
                          const SearchParams& par) {
    for (int pass = 0; pass < 2; ++pass) {
        std::vector<double> extra;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const Outcome& a = pts[i];
            const Outcome& b = pts[i + 1];
            if (a.count < 0 || b.count < 0) continue;
            if (std::abs(a.count - b.count) < 2) continue;
            // locate the low edge of the cliff
            Outcome lo = a, hi = b;
            int base = std::min(a.count, b.count);
            auto pred = [base](const Outcome& o) { return o.count > base; };
            for (int it = 0; it < 90; ++it) {
                double mid = 0.5 * (lo.alpha + hi.alpha);
                if (mid <= std::min(lo.alpha, hi.alpha) || mid >= std::max(lo.alpha, hi.alpha))
                    break;
                Outcome om = eng.eval(mid);
                if (om.count < 0) break;
                if (pred(om) == pred(lo))
                    lo = om;
                else
                    hi = om;
            }
            // probe geometrically away from the wall on the high-count side
            const Outcome& wall = pred(lo) ? lo : hi;
            const Outcome& far_pt = pred(a) ? a : b;
            double gap = far_pt.alpha - wall.alpha;
            for (int j = 1; j <= 12; ++j) {
                double p = wall.alpha + gap * std::pow(10.0, -j);
                if (p != wall.alpha && p != far_pt.alpha) extra.push_back(p);
            }
        }
        if (extra.empty()) return;
        eng.eval_many(extra);
        for (double a : extra) pts.push_back(eng.eval(a));
        std::sort(pts.begin(), pts.end(),
                  [](const Outcome& x, const Outcome& y) { return x.alpha < y.alpha; });
        pts.erase(std::unique(pts.begin(), pts.end(),
                              [](const Outcome& x, const Outcome& y) { return x.alpha == y.alpha; }),
                  pts.end());
    }
}

} // namespace detail

/// Bisection between two initial values that classify differently; converges
/// to the boundary and reports the bound-state certificate found there.
inline GBracket refine_boundary(const NonlinearityModel& m, const Landmarks& lm, int N,
                                double alpha_left, double alpha_right, double bisect_tol,
                                const SearchParams& par = {}, ScanCache* cache = nullptr) {
    if (!(alpha_left < alpha_right)) throw InvalidRange("need alpha_left < alpha_right");
    detail::Evaluator eng(m, lm, N, par, cache);
    Outcome a = eng.eval(alpha_left), b = eng.eval(alpha_right);
    if (a.count < 0 || b.count < 0) throw NoSignSplit("endpoint integration failed");
    if (a.count == b.count) {
        bool same_label = a.cls && b.cls && a.cls->label == b.cls->label;
        if (same_label) throw NoSignSplit("both endpoints classify identically");
        // same count, different labels: bisect on the label of the left side
        Label la = a.cls ? a.cls->label : Label::Undetermined;
        for (int it = 0; it < 110; ++it) {
            double mid = 0.5 * (a.alpha + b.alpha);
            if (mid <= a.alpha || mid >= b.alpha) break;
            Outcome om = eng.eval(mid);
            Label lm_ = om.cls ? om.cls->label : Label::Undetermined;
            if (lm_ == la && om.count == a.count)
                a = om;
            else
                b = om;
        }
        GBracket out;
        out.alpha_lo = a.alpha;
        out.alpha_hi = b.alpha;
        out.count_lo = a.count;
        out.count_hi = b.count;
        out.label_lo = a.cls ? to_string(a.cls->label) : "error";
        out.label_hi = b.cls ? to_string(b.cls->label) : "error";
        out.certified = false;
        out.note = "label split without a count change (Upsilon-type boundary)";
        (void)bisect_tol;
        return out;
    }
    int k = std::min(a.count, b.count);
    GBracket out = detail::bisect_count_boundary(eng, a, b, k, par);
    if (out.width() > bisect_tol && out.certified)
        out.note = "width above bisect_tol; alpha resolution exhausted";
    return out;
}

/// Certificate data behind an alpha_k estimate (case A2).
struct AlphaKEstimate {
    double alpha = 0;
    int k = 0;
    double r_bar = 0;      // first radius with F(u) = F(2 beta_bar)
    double C_k = 0;        // minimal-radius certificate constant
    double E_r_bar = 0;    // Pohozaev value at r_bar
    double E_threshold = 0;
    std::string certificate; // "radius" or "pohozaev"
};

/// Smallest alpha from which the trajectory provably passes k zeros.
/// Case (A1): empirical scan threshold; case (A2): the radius or Pohozaev
/// certificate, whichever fires first along a geometric alpha scan.
inline AlphaKEstimate estimate_alpha_k(const NonlinearityModel& m, const Landmarks& lm, int N,
                                       int k, const SearchParams& par = {},
                                       ScanCache* cache = nullptr) {
    AlphaKEstimate est;
    est.k = k;
    if (k == 0) {
        est.alpha = lm.beta_star; // membership is vacuous
        est.certificate = "vacuous";
        return est;
    }
    if (lm.case_ == HypothesisCase::A1) {
        ScanCache local;
        detail::Evaluator engc(m, lm, N, par, cache ? cache : &local);
        double lo = lm.beta_star + 1e-9;
        double span = lm.gamma_star - lo;
        double gap_min = std::max(par.gap_min_rel * span, 8.0 * lm.gamma_star * 2.3e-16);
        auto grid = detail::log_grid_toward(lo, lm.gamma_star - gap_min, par.grid_points, gap_min);
        engc.eval_many(grid);
        // a reached-r_max point carries only a lower count bound, so it never
        // disqualifies a suffix
        int best = -1;
        for (int i = static_cast<int>(grid.size()) - 1; i >= 0; --i) {
            Outcome o = engc.eval(grid[static_cast<std::size_t>(i)]);
            bool ok = o.count >= k ||
                      (o.cls && o.cls->label == Label::Undetermined && o.count >= 0);
            if (!ok) break;
            best = i;
        }
        if (best < 0) throw NotFound("no suffix run with count >= k on the scan grid");
        est.alpha = grid[static_cast<std::size_t>(best)];
        est.certificate = "scan suffix";
        return est;
    }

    // case (A2)
    est.C_k = compute_Ck(m, lm, N, k);
    double two_bb = 2.0 * lm.beta_bar;
    double F2b = m.F_unchecked(two_bb);
    double ub2 = compute_u_bar_2betabar(m, lm);
    double Q_bar = -extrema_Q(m, N, lm.s0, lm.beta_bar).min_value;
    double Ck1 = est.C_k + 1.0;
    double B = std::pow(4.0 * lm.beta_bar - 2.0 * ub2 + (N - 2.0) * std::abs(ub2) / (2.0 * Ck1), 2) +
               F2b;
    est.E_threshold = 2.0 * std::pow(Ck1, N) * B + (k + 1.0) * Q_bar * std::pow(Ck1, N) / N;

    ProblemConfig cfg = par.integrator;
    cfg.N = N;
    cfg.tracked_levels = {{0, two_bb}};
    cfg.stop_at_level = 0;
    for (double alpha = two_bb * 1.05; alpha <= par.alpha_cap; alpha *= 1.2) {
        cfg.alpha = alpha;
        Trajectory t = integrate(m, cfg, &lm);
        double r_bar = -1.0;
        for (const Event& e : t.events)
            if (e.kind == Event::Kind::level_crossing) {
                r_bar = e.r;
                break;
            }
        if (r_bar < 0) continue; // never reached the level before r_max
        est.r_bar = r_bar;
        est.E_r_bar = pohozaev_E(t, r_bar, N);
        est.alpha = alpha;
        if (r_bar >= est.C_k) {
            est.certificate = "radius";
            return est;
        }
        if (est.E_r_bar >= est.E_threshold) {
            est.certificate = "pohozaev";
            return est;
        }
    }
    throw NotFound("no alpha below the cap satisfies the node-count certificate");
}

/// The two extremal bound states with exactly k sign changes.
struct PairResult {
    int k = 0;
    bool found = false;
    GBracket sharp; // alpha^# : the lowest certified boundary
    GBracket star;  // alpha^* : the highest
    bool distinct = false;
    int grid_used = 0;
    std::string note;
};

/// Locates the extremal boundaries of the count-k capture region and
/// certifies a bound state at each. NotFound outcomes are reported in the
/// result, never thrown: small k may genuinely have none.
inline PairResult find_pairs(const NonlinearityModel& m, const Landmarks& lm, int N, int k,
                             const SearchParams& par = {}, ScanCache* cache = nullptr) {
    PairResult res;
    res.k = k;
    ScanCache local;
    detail::Evaluator engc(m, lm, N, par, cache ? cache : &local);

    double lo = lm.beta_star + 1e-9 * std::max(1.0, std::abs(lm.beta_star));
    double hi;
    if (std::isfinite(lm.gamma_star)) {
        hi = lm.gamma_star;
    } else {
        // above the node-count estimate everything is N_k, so nothing is lost
        hi = 4.0 * lm.beta_bar;
        try {
            AlphaKEstimate est = estimate_alpha_k(m, lm, N, k + 1, par, cache);
            hi = std::max(hi, 10.0 * est.alpha);
        } catch (const Error&) {
        }
    }
    double span = hi - lo;
    double bisect_tol = par.bisect_tol_rel * span;

    for (int n = par.grid_points;; n *= 2) {
        double gap_min = std::max(par.gap_min_rel * span, 8.0 * std::abs(hi) * 2.3e-16);
        std::vector<double> grid = detail::log_grid_toward(lo, hi - gap_min, n, gap_min);
        engc.eval_many(grid);
        std::vector<Outcome> pts;
        for (double a : grid) pts.push_back(engc.eval(a));
        detail::augment_walls(engc, pts, par);

        std::vector<GBracket> cands;
        for (std::size_t i = 0; i + 1 < pts.size() && cands.size() < (std::size_t)par.max_candidates;
             ++i) {
            const Outcome& a = pts[i];
            const Outcome& b = pts[i + 1];
            if (a.count < 0 || b.count < 0) continue;
            if ((a.count <= k) == (b.count <= k)) continue;
            GBracket g = detail::bisect_count_boundary(engc, a, b, k, par);
            if (g.certified) cands.push_back(g);
        }
        std::sort(cands.begin(), cands.end(),
                  [](const GBracket& x, const GBracket& y) { return x.alpha_best < y.alpha_best; });
        // merge candidates that found the same boundary
        std::vector<GBracket> uniq;
        for (const GBracket& g : cands) {
            if (uniq.empty() || g.alpha_best - uniq.back().alpha_best > 10.0 * bisect_tol)
                uniq.push_back(g);
        }
        res.grid_used = n;
        if (uniq.size() >= 2) {
            res.found = true;
            res.sharp = uniq.front();
            res.star = uniq.back();
            res.distinct = res.star.alpha_best - res.sharp.alpha_best > 10.0 * bisect_tol;
            return res;
        }
        if (n >= par.grid_max) {
            res.note = uniq.empty() ? "NotFoundAtResolution: no certified boundary"
                                    : "NotFoundAtResolution: only one certified boundary";
            if (uniq.size() == 1) res.sharp = uniq.front();
            return res;
        }
    }
}

/// Result of find_k0: the first count from which pairs persist.
struct K0Result {
    int k0 = -1;
    bool found = false;
    std::vector<PairResult> per_k;
    bool consistent = true; // no failures after the first success
};

inline K0Result find_k0(const NonlinearityModel& m, const Landmarks& lm, int N, int k_max,
                        const SearchParams& par = {}, ScanCache* cache = nullptr) {
    K0Result res;
    ScanCache local;
    ScanCache* c = cache ? cache : &local;
    for (int k = 0; k <= k_max; ++k) {
        PairResult pr = find_pairs(m, lm, N, k, par, c);
        bool ok = pr.found && pr.distinct;
        if (ok && !res.found) {
            res.k0 = k;
            res.found = true;
        }
        if (!ok && res.found) res.consistent = false;
        res.per_k.push_back(std::move(pr));
    }
    return res;
}

} // namespace nodal
