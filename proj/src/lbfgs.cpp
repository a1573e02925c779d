#include "kitaev/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <utility>

namespace kitaev {

auto to_string(StopReason r) -> const char* {
    switch (r) {
        case StopReason::GradTolerance: return "grad_tolerance";
        case StopReason::Goal: return "goal";
        case StopReason::SmallDecrease: return "small_decrease";
        case StopReason::MaxIterations: return "max_iterations";
        case StopReason::LineSearchFailed: return "line_search_failed";
        default: return "non_finite";
    }
}

namespace {

struct Eval {
    double alpha;
    double f;
    double df;  // directional derivative along the search direction
};

// Minimizer of the cubic interpolating (a.f, a.df) and (b.f, b.df); falls
// back to bisection when the interpolation is degenerate or outside the
// bracket interior.
auto cubic_step(const Eval& a, const Eval& b) -> double {
    const double d1 = a.df + b.df - 3.0 * (a.f - b.f) / (a.alpha - b.alpha);
    const double disc = d1 * d1 - a.df * b.df;
    const double mid = 0.5 * (a.alpha + b.alpha);
    if (disc < 0.0 || !std::isfinite(disc)) { return mid; }
    const double d2 = std::copysign(std::sqrt(disc), b.alpha - a.alpha);
    const double t = b.alpha - (b.alpha - a.alpha) * (b.df + d2 - d1) / (b.df - a.df + 2.0 * d2);
    const double lo = std::min(a.alpha, b.alpha);
    const double hi = std::max(a.alpha, b.alpha);
    const double margin = 0.1 * (hi - lo);
    if (!std::isfinite(t) || t < lo + margin || t > hi - margin) { return mid; }
    return t;
}

class LineSearch {
  public:
    LineSearch(const Objective& objective, const Eigen::VectorXd& x0, const Eigen::VectorXd& dir,
               double f0, double df0, const LbfgsOptions& opt)
        : obj_(objective), x0_(x0), dir_(dir), phi0_{0.0, f0, df0}, opt_(opt) {}

    // Returns true on a strong-Wolfe point; on failure returns false with
    // the best finite point seen (if any) stored in last().
    auto run(double alpha_init) -> bool {
        Eval prev = phi0_;
        double alpha = alpha_init;
        for (int i = 0; i < opt_.max_line_search; ++i) {
            Eval cur = eval(alpha);
            if (!std::isfinite(cur.f)) {
                alpha = 0.5 * (prev.alpha + alpha);  // back off from overflow territory
                continue;
            }
            if (cur.f > phi0_.f + opt_.wolfe_c1 * cur.alpha * phi0_.df || (i > 0 && cur.f >= prev.f)) {
                return zoom(prev, cur);
            }
            if (std::abs(cur.df) <= -opt_.wolfe_c2 * phi0_.df) {
                accept(cur);
                return true;
            }
            if (cur.df >= 0.0) { return zoom(cur, prev); }
            prev = cur;
            alpha = std::min(2.0 * alpha, 1e10);
        }
        return false;
    }

    auto last() const -> const Eval& { return best_; }
    auto evaluations() const -> int { return evals_; }
    auto grad() const -> const Eigen::VectorXd& { return g_; }
    auto x() const -> const Eigen::VectorXd& { return x_; }
    auto have_best() const -> bool { return best_.alpha > 0.0 && std::isfinite(best_.f); }

  private:
    auto eval(double alpha) -> Eval {
        ++evals_;
        xtmp_ = x0_ + alpha * dir_;
        gtmp_.resizeLike(x0_);
        const double f = obj_(xtmp_, gtmp_);
        Eval e{alpha, f, gtmp_.dot(dir_)};
        if (std::isfinite(f) && f < best_.f) { accept(e); }
        return e;
    }

    auto accept(const Eval& e) -> void {
        best_ = e;
        x_ = xtmp_;
        g_ = gtmp_;
    }

    auto zoom(Eval lo, Eval hi) -> bool {
        while (evals_ < opt_.max_line_search) {
            if (std::abs(hi.alpha - lo.alpha) < 1e-16 * std::max(1.0, std::abs(lo.alpha))) { break; }
            Eval cur = eval(cubic_step(lo, hi));
            if (!std::isfinite(cur.f) || cur.f > phi0_.f + opt_.wolfe_c1 * cur.alpha * phi0_.df ||
                cur.f >= lo.f) {
                hi = cur;
                continue;
            }
            if (std::abs(cur.df) <= -opt_.wolfe_c2 * phi0_.df) {
                accept(cur);
                return true;
            }
            if (cur.df * (hi.alpha - lo.alpha) >= 0.0) { hi = lo; }
            lo = cur;
        }
        return false;
    }

    const Objective&       obj_;
    const Eigen::VectorXd& x0_;
    const Eigen::VectorXd& dir_;
    Eval                   phi0_;
    const LbfgsOptions&    opt_;
    Eval                   best_{0.0, std::numeric_limits<double>::infinity(), 0.0};
    Eigen::VectorXd        x_, g_, xtmp_, gtmp_;
    int                    evals_ = 0;
};

}  // namespace

auto lbfgs_minimize(const Objective& objective, Eigen::VectorXd& x, const LbfgsOptions& options)
    -> LbfgsReport {
    LbfgsReport rep;
    const auto n = x.size();
    Eigen::VectorXd g(n);
    double f = objective(x, g);
    if (!std::isfinite(f)) {
        rep.f = f;
        rep.reason = StopReason::NonFinite;
        return rep;
    }

    std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> pairs;  // (s, y)
    Eigen::VectorXd dir(n), alpha_buf;

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        rep.f = f;
        rep.iterations = iter;
        if (g.lpNorm<Eigen::Infinity>() <= options.grad_tolerance) {
            rep.reason = StopReason::GradTolerance;
            return rep;
        }
        if (f <= options.f_goal) {
            rep.reason = StopReason::Goal;
            return rep;
        }

        // two-loop recursion
        dir = -g;
        const auto m = static_cast<int>(pairs.size());
        alpha_buf.resize(m);
        for (int i = m - 1; i >= 0; --i) {
            const auto& [s, y] = pairs[static_cast<std::size_t>(i)];
            const double a = s.dot(dir) / y.dot(s);
            alpha_buf(i) = a;
            dir -= a * y;
        }
        if (m > 0) {
            const auto& [s, y] = pairs.back();
            dir *= y.dot(s) / y.dot(y);
        }
        for (int i = 0; i < m; ++i) {
            const auto& [s, y] = pairs[static_cast<std::size_t>(i)];
            dir += (alpha_buf(i) - y.dot(dir) / y.dot(s)) * s;
        }

        double df0 = g.dot(dir);
        if (df0 >= 0.0) {  // stale curvature produced a non-descent direction
            pairs.clear();
            dir = -g;
            df0 = g.dot(dir);
        }

        LineSearch ls(objective, x, dir, f, df0, options);
        const double init = iter == 0 ? std::min(1.0, 1.0 / std::max(1e-12, g.norm())) : 1.0;
        const bool ok = ls.run(init);
        if (!ok && !ls.have_best()) {
            rep.reason = StopReason::LineSearchFailed;
            return rep;
        }

        const Eigen::VectorXd x_new = ls.x();
        const Eigen::VectorXd g_new = ls.grad();
        const double f_new = ls.last().f;

        Eigen::VectorXd s = x_new - x;
        Eigen::VectorXd y = g_new - g;
        const double sy = s.dot(y);
        if (sy > 1e-10 * s.norm() * y.norm()) {
            pairs.emplace_back(std::move(s), std::move(y));
            if (static_cast<int>(pairs.size()) > options.memory) { pairs.pop_front(); }
        }

        const double decrease = f - f_new;
        x = x_new;
        g = g_new;
        f = f_new;
        rep.f = f;
        rep.iterations = iter + 1;

        if (!std::isfinite(f)) {
            rep.reason = StopReason::NonFinite;
            return rep;
        }
        if (!ok) {
            rep.reason = StopReason::LineSearchFailed;  // made progress but no Wolfe point
            return rep;
        }
        if (decrease <= options.f_rel_tolerance * std::max({std::abs(f), std::abs(f) + decrease, 1.0})) {
            rep.reason = StopReason::SmallDecrease;
            return rep;
        }
    }
    rep.reason = StopReason::MaxIterations;
    return rep;
}

}  // namespace kitaev
