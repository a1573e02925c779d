#include "kitaev/grape.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "kitaev/rng.hpp"

namespace kitaev {

namespace {

using Cplx = std::complex<double>;

auto sinc(double x) -> double {
    if (std::abs(x) < 1e-4) { return 1.0 - x * x / 6.0 * (1.0 - x * x / 20.0); }
    return std::sin(x) / x;
}

auto now() -> std::chrono::steady_clock::time_point { return std::chrono::steady_clock::now(); }

auto seconds_since(std::chrono::steady_clock::time_point t0) -> double {
    return std::chrono::duration<double>(now() - t0).count();
}

}  // namespace

auto objective_and_gradient(const CouplingModel& model, const Pulse& pulse, const Eigen::MatrixXd& target)
    -> std::pair<double, Eigen::VectorXd> {
    const int n = pulse.n_segments();
    const int N = model.n_sites();
    if (target.rows() != N || target.cols() != N) {
        throw std::invalid_argument("objective_and_gradient: target dimension mismatch");
    }
    const double dt = pulse.dt();

    std::vector<SegmentEig> seg;
    seg.reserve(static_cast<std::size_t>(n));
    std::vector<Eigen::MatrixXd> prefix;  // prefix[k] = O_{k-1} ... O_1, prefix[0] = 1
    prefix.reserve(static_cast<std::size_t>(n) + 1);
    prefix.push_back(Eigen::MatrixXd::Identity(N, N));
    for (int k = 0; k < n; ++k) {
        seg.push_back(segment_eig(model.generator(pulse.values[static_cast<std::size_t>(k)]), dt));
        prefix.push_back(seg.back().O * prefix.back());
    }

    const double z = N + (target.transpose() * prefix.back()).trace();
    const double infid = 1.0 - std::abs(z) / (2.0 * N);
    const double s = z >= 0.0 ? 1.0 : -1.0;

    const Eigen::MatrixXcd dtGc = (dt * model.control_generator()).cast<Cplx>();
    Eigen::VectorXd grad(n);
    Eigen::MatrixXd R = target.transpose();  // R = target^T O_n ... O_{k+1}
    Eigen::MatrixXcd B(N, N), D(N, N);
    for (int k = n - 1; k >= 0; --k) {
        const auto& sk = seg[static_cast<std::size_t>(k)];
        B.noalias() = sk.V.adjoint() * dtGc * sk.V;
        D.noalias() = sk.V.adjoint() * (prefix[static_cast<std::size_t>(k)] * R).cast<Cplx>() * sk.V;
        // d exp / df in the eigenbasis: B gets weighted by
        // Phi_pq = exp(i (th_p + th_q) / 2) * sinc((th_p - th_q) / 2)
        Cplx acc(0.0, 0.0);
        for (int p = 0; p < N; ++p) {
            for (int q = 0; q < N; ++q) {
                const double tp = sk.theta(p);
                const double tq = sk.theta(q);
                const Cplx phi = std::exp(Cplx(0.0, 0.5 * (tp + tq))) * sinc(0.5 * (tp - tq));
                acc += D(q, p) * phi * B(p, q);  // Tr(C V (Phi o B) V^dag) with D = V^dag C V
            }
        }
        grad(k) = -s / (2.0 * N) * acc.real();
        R = R * sk.O;
    }
    return {infid, grad};
}

auto optimize_to_target(const CouplingModel& model, const Eigen::MatrixXd& target,
                        const OptimizeConfig& config) -> OptimizationResult {
    if (config.restarts < 1 || config.n_segments < 1 || config.T <= 0.0) {
        throw std::invalid_argument("optimize: need restarts >= 1, n_segments >= 1, T > 0");
    }
    if (config.clamp_endpoints && config.n_segments < 3) {
        throw std::invalid_argument("optimize: clamped pulses need at least 3 segments");
    }
    const auto t0 = now();
    const int n = config.n_segments;
    const int n_free = config.clamp_endpoints ? n - 2 : n;

    const auto assemble_pulse = [&](const Eigen::VectorXd& x) {
        Pulse p;
        p.duration = config.T;
        p.values.resize(static_cast<std::size_t>(n));
        if (config.clamp_endpoints) {
            p.values.front() = 0.0;
            p.values.back() = 1.0;
            for (int i = 0; i < n_free; ++i) { p.values[static_cast<std::size_t>(i + 1)] = x(i); }
        } else {
            for (int i = 0; i < n; ++i) { p.values[static_cast<std::size_t>(i)] = x(i); }
        }
        return p;
    };

    const Objective objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
        auto [infid, full_grad] = objective_and_gradient(model, assemble_pulse(x), target);
        if (config.clamp_endpoints) {
            grad = full_grad.segment(1, n_free);
        } else {
            grad = std::move(full_grad);
        }
        return infid;
    };

    LbfgsOptions opt;
    opt.max_iterations = config.max_iterations;
    opt.grad_tolerance = config.grad_tolerance;
    opt.f_goal = config.infidelity_goal;

    OptimizationResult result;
    for (int r = 0; r < config.restarts; ++r) {
        const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(r);
        Rng rng(seed);
        Eigen::VectorXd x(n_free);
        for (int i = 0; i < n_free; ++i) { x(i) = rng.uniform(); }
        const auto tr = now();
        const LbfgsReport rep = lbfgs_minimize(objective, x, opt);
        result.per_restart.push_back({seed, rep.f, rep.iterations, rep.reason, seconds_since(tr)});
        if (!rep.failed() && rep.f < result.best_infidelity) {
            result.best_infidelity = rep.f;
            result.best_pulse = assemble_pulse(x);
        }
        if (result.best_infidelity <= config.infidelity_goal) { break; }
    }
    result.wall_time_s = seconds_since(t0);
    return result;
}

auto optimize(const CouplingModel& model, const OptimizeConfig& config) -> OptimizationResult {
    return optimize_to_target(model, adiabatic_target(model, config.T_ad).O, config);
}

auto optimized_target(const CouplingModel& model, const OptimizeConfig& config) -> OptimizedTarget {
    const Propagator wad = adiabatic_target(model, config.T_ad);
    OptimizedTarget out;
    out.stage1 = optimize_to_target(model, wad.O, config);
    if (out.stage1.best_pulse.n_segments() == 0) {
        throw std::runtime_error("optimized_target: every restart diverged");
    }
    out.O = propagate(model, out.stage1.best_pulse).O;
    return out;
}

auto drop_time_sweep(const CouplingModel& model, const Eigen::MatrixXd& target,
                     const std::vector<double>& T_grid, const OptimizeConfig& config) -> DropTimeResult {
    DropTimeResult out;
    out.threshold = config.infidelity_goal;
    for (std::size_t i = 0; i + 1 < T_grid.size(); ++i) {
        if (T_grid[i + 1] <= T_grid[i]) {
            throw std::invalid_argument("drop_time_sweep: T grid must be sorted ascending");
        }
    }
    for (const double T : T_grid) {
        OptimizeConfig cfg = config;
        cfg.T = T;
        const OptimizationResult res = optimize_to_target(model, target, cfg);
        out.grid.emplace_back(T, res.best_infidelity);
        if (!out.drop_time && res.best_infidelity < out.threshold) { out.drop_time = T; }
    }
    return out;
}

auto min_segments(const CouplingModel& model, const Eigen::MatrixXd& target, double T,
                  const OptimizeConfig& config, int cap) -> MinSegmentsResult {
    MinSegmentsResult out;
    const auto succeeds = [&](int n) {
        OptimizeConfig cfg = config;
        cfg.T = T;
        cfg.n_segments = n;
        OptimizationResult res = optimize_to_target(model, target, cfg);
        const bool ok = res.best_infidelity < config.infidelity_goal;
        out.probes.emplace_back(n, std::move(res));
        return ok;
    };
    int lo = 0;  // largest known failure
    int hi = -1; // smallest known success
    for (int n = 1; n <= cap; n *= 2) {
        if (succeeds(n)) {
            hi = n;
            break;
        }
        lo = n;
    }
    if (hi < 0) { return out; }
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        if (succeeds(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    out.min_segments = hi;
    return out;
}

}  // namespace kitaev
