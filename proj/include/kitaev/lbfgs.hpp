#pragma once

#include <functional>
#include <limits>

#include <Eigen/Dense>

namespace kitaev {

/// Objective callback: fills `grad` and returns the function value.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

struct LbfgsOptions {
    int    memory = 10;
    int    max_iterations = 5000;
    double grad_tolerance = 1e-12;   ///< stop when ||g||_inf falls below
    double f_goal = -std::numeric_limits<double>::infinity();  ///< stop when f <= f_goal
    double f_rel_tolerance = 1e-16;  ///< stop when the relative decrease per step falls below
    double wolfe_c1 = 1e-4;
    double wolfe_c2 = 0.9;
    int    max_line_search = 60;     ///< objective evaluations per line search
};

enum class StopReason {
    GradTolerance,
    Goal,
    SmallDecrease,
    MaxIterations,
    LineSearchFailed,
    NonFinite,
};

auto to_string(StopReason r) -> const char*;

struct LbfgsReport {
    double     f = std::numeric_limits<double>::quiet_NaN();
    int        iterations = 0;
    StopReason reason = StopReason::MaxIterations;

    auto failed() const -> bool { return reason == StopReason::NonFinite; }
};

/// Limited-memory BFGS with a strong-Wolfe line search (bracket + cubic
/// zoom). Minimizes `objective` starting from x, which is updated in place
/// to the best point found.
auto lbfgs_minimize(const Objective& objective, Eigen::VectorXd& x, const LbfgsOptions& options = {})
    -> LbfgsReport;

}  // namespace kitaev
