#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "kitaev/grape.hpp"
#include "kitaev/rng.hpp"

using namespace kitaev;

namespace {

auto model6(double K = 0.0) -> CouplingModel {
    const auto lat = build_lattice(1, 1);
    return assemble_coupling(lat, trivial_gauge(lat), {1.0, K}, lat.central_z_link());
}

auto random_pulse(Rng& rng, int n, double T) -> Pulse {
    Pulse p;
    p.duration = T;
    p.values.resize(static_cast<std::size_t>(n));
    for (double& v : p.values) { v = rng.uniform(); }
    return p;
}

auto fd_gradient(const CouplingModel& model, const Pulse& pulse, const Eigen::MatrixXd& target,
                 double h) -> Eigen::VectorXd {
    Eigen::VectorXd g(pulse.n_segments());
    Pulse probe = pulse;
    for (int k = 0; k < pulse.n_segments(); ++k) {
        const double v = pulse.values[static_cast<std::size_t>(k)];
        probe.values[static_cast<std::size_t>(k)] = v + h;
        const double up = objective_and_gradient(model, probe, target).first;
        probe.values[static_cast<std::size_t>(k)] = v - h;
        const double down = objective_and_gradient(model, probe, target).first;
        probe.values[static_cast<std::size_t>(k)] = v;
        g(k) = (up - down) / (2.0 * h);
    }
    return g;
}

}  // namespace

TEST_SUITE("grape") {

TEST_CASE("analytic gradient matches central differences") {
    const auto model = model6(0.01);
    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 4 + static_cast<int>(rng.next() % 7);
        const auto pulse = random_pulse(rng, n, rng.uniform(0.5, 4.0));
        const Eigen::MatrixXd target = propagate(model6(0.01), random_pulse(rng, 8, 2.0)).O;
        const auto [obj, grad] = objective_and_gradient(model, pulse, target);
        CHECK(obj >= 0.0);
        const Eigen::VectorXd fd = fd_gradient(model, pulse, target, 1e-5);
        const double scale = std::max(grad.cwiseAbs().maxCoeff(), 1e-12);
        CHECK((grad - fd).cwiseAbs().maxCoeff() / scale <= 1e-6);
    }
}

TEST_CASE("objective vanishes at the target with a flat gradient") {
    const auto model = model6();
    Rng rng(7);
    const auto pulse = random_pulse(rng, 10, 2.0);
    const Eigen::MatrixXd target = propagate(model, pulse).O;
    const auto [obj, grad] = objective_and_gradient(model, pulse, target);
    CHECK(obj <= 1e-14);
    CHECK(grad.cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("optimization to a reachable target succeeds and reports restarts") {
    const auto model = model6();
    Rng rng(13);
    const Eigen::MatrixXd target = propagate(model, random_pulse(rng, 6, 2.0)).O;

    OptimizeConfig cfg;
    cfg.n_segments = 24;
    cfg.T = 2.0;
    cfg.restarts = 3;
    cfg.seed = 42;
    cfg.max_iterations = 1500;
    cfg.infidelity_goal = 1e-9;
    const auto res = optimize_to_target(model, target, cfg);

    CHECK(res.per_restart.size() == 3);
    CHECK(res.best_infidelity <= 1e-9);
    double best = 1.0;
    for (const auto& r : res.per_restart) { best = std::min(best, r.infidelity); }
    CHECK(res.best_infidelity == best);
    CHECK(res.best_pulse.n_segments() == 24);
    CHECK(res.best_pulse.duration == 2.0);
}

TEST_CASE("same seed, same result, bit for bit") {
    const auto model = model6();
    const Eigen::MatrixXd target = adiabatic_target(model, 40.0, 2048).O;
    OptimizeConfig cfg;
    cfg.n_segments = 32;
    cfg.T = 3.0;
    cfg.restarts = 2;
    cfg.seed = 1234;
    cfg.max_iterations = 200;
    cfg.infidelity_goal = 0.0;  // never stop early

    const auto a = optimize_to_target(model, target, cfg);
    const auto b = optimize_to_target(model, target, cfg);
    CHECK(std::memcmp(&a.best_infidelity, &b.best_infidelity, sizeof(double)) == 0);
    REQUIRE(a.best_pulse.values.size() == b.best_pulse.values.size());
    CHECK(std::memcmp(a.best_pulse.values.data(), b.best_pulse.values.data(),
                      a.best_pulse.values.size() * sizeof(double)) == 0);
    REQUIRE(a.per_restart.size() == b.per_restart.size());
    for (std::size_t i = 0; i < a.per_restart.size(); ++i) {
        CHECK(a.per_restart[i].seed == b.per_restart[i].seed);
        CHECK(a.per_restart[i].iterations == b.per_restart[i].iterations);
        CHECK(std::memcmp(&a.per_restart[i].infidelity, &b.per_restart[i].infidelity,
                          sizeof(double)) == 0);
    }

    OptimizeConfig other = cfg;
    other.seed = 99;
    const auto c = optimize_to_target(model, target, other);
    CHECK(c.best_infidelity != a.best_infidelity);
}

TEST_CASE("endpoint clamping pins the first and last segments") {
    const auto model = model6();
    const Eigen::MatrixXd target = adiabatic_target(model, 40.0, 2048).O;
    OptimizeConfig cfg;
    cfg.n_segments = 12;
    cfg.T = 2.0;
    cfg.restarts = 2;
    cfg.seed = 3;
    cfg.max_iterations = 120;
    cfg.clamp_endpoints = true;
    const auto res = optimize_to_target(model, target, cfg);
    CHECK(res.best_pulse.values.front() == 0.0);
    CHECK(res.best_pulse.values.back() == 1.0);
}

TEST_CASE("a loose infidelity goal stops a restart early") {
    const auto model = model6();
    const Eigen::MatrixXd target = adiabatic_target(model, 40.0, 2048).O;
    OptimizeConfig cfg;
    cfg.n_segments = 24;
    cfg.T = 3.0;
    cfg.restarts = 1;
    cfg.seed = 8;
    cfg.max_iterations = 5000;
    cfg.infidelity_goal = 0.5;
    const auto res = optimize_to_target(model, target, cfg);
    CHECK(res.best_infidelity <= 0.5);
    CHECK(res.per_restart.front().reason == StopReason::Goal);
    CHECK(res.per_restart.front().iterations < 5000);
}

TEST_CASE("drop time sweep finds the first grid point under threshold") {
    const auto model = model6();
    Rng rng(17);
    // target generated at T = 2 is reachable there but not well below
    const Eigen::MatrixXd target = propagate(model, random_pulse(rng, 8, 2.0)).O;
    OptimizeConfig cfg;
    cfg.n_segments = 24;
    cfg.restarts = 2;
    cfg.seed = 5;
    cfg.max_iterations = 1200;
    cfg.infidelity_goal = 1e-8;
    const auto sweep = drop_time_sweep(model, target, {0.05, 2.0}, cfg);
    REQUIRE(sweep.grid.size() == 2);
    CHECK(sweep.grid[0].first == 0.05);
    CHECK(sweep.grid[0].second > 1e-6);
    CHECK(sweep.grid[1].second < 1e-6);
    REQUIRE(sweep.drop_time.has_value());
    CHECK(*sweep.drop_time == 2.0);
}

TEST_CASE("min segment search brackets the success boundary") {
    const auto model = model6();
    Rng rng(19);
    const Eigen::MatrixXd target = propagate(model, random_pulse(rng, 6, 2.0)).O;
    OptimizeConfig cfg;
    cfg.T = 2.0;
    cfg.restarts = 2;
    cfg.seed = 21;
    cfg.max_iterations = 1200;
    cfg.infidelity_goal = 1e-7;
    const auto res = min_segments(model, target, 2.0, cfg, 128);
    REQUIRE(res.min_segments.has_value());
    const int n_star = *res.min_segments;
    CHECK(n_star <= 128);
    bool found_success_at_min = false;
    for (const auto& [n, probe] : res.probes) {
        if (n == n_star) {
            found_success_at_min = probe.best_infidelity < cfg.infidelity_goal;
        } else if (n < n_star) {
            CHECK(probe.best_infidelity >= cfg.infidelity_goal);
        }
    }
    CHECK(found_success_at_min);
}

TEST_CASE("stop reasons map to readable names") {
    CHECK(std::string(to_string(StopReason::Goal)) != "");
    CHECK(std::string(to_string(StopReason::MaxIterations)) != "");
    CHECK(std::string(to_string(StopReason::GradTolerance)) != "");
}

}  // TEST_SUITE
