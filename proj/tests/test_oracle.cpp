#include <doctest.h>

#include <cmath>
#include <complex>

#include "kitaev/errors.hpp"
#include "kitaev/oracle.hpp"
#include "kitaev/rng.hpp"

using namespace kitaev;

namespace {

const ModelParams kSingle{1.0, 0.0};   // single-plaquette study parameters
const ModelParams kGeneric{1.0, 0.01};

auto commutator_norm(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) -> double {
    return (a * b - b * a).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("spin Hamiltonian is Hermitian and conserves every plaquette") {
    const auto lat = build_lattice(1, 2);
    const int flip = lat.central_z_link();
    const Eigen::MatrixXcd H = oracle::spin_hamiltonian(lat, kGeneric, flip, 0.5);
    CHECK((H - H.adjoint()).cwiseAbs().maxCoeff() <= 1e-13);
    for (std::size_t p = 0; p < lat.plaquettes.size(); ++p) {
        const Eigen::MatrixXcd W = oracle::plaquette_operator(lat, static_cast<int>(p));
        CHECK(commutator_norm(H, W) <= 1e-12);
        const auto dim = W.rows();
        CHECK((W * W - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("plaquette operators commute with each other") {
    const auto lat = build_lattice(1, 2);
    const Eigen::MatrixXcd W0 = oracle::plaquette_operator(lat, 0);
    const Eigen::MatrixXcd W1 = oracle::plaquette_operator(lat, 1);
    CHECK(commutator_norm(W0, W1) <= 1e-12);
}

TEST_CASE("sector spectra match the free-fermion reconstruction") {
    const auto lat = build_lattice(1, 1);
    const int flip = lat.central_z_link();
    const std::vector<int> all_plus(lat.plaquettes.size(), 1);

    // static vortex-free sector against the unflipped quadratic model
    const auto free0 = oracle::spectrum_match(lat, kSingle, flip, 0.0, 0.0, all_plus);
    CHECK(free0.max_level_error <= 1e-8);
    CHECK(free0.ground_energy_error <= 1e-8);

    // vortex-pair pattern of H(0) against the flipped model: flipping u on a
    // link and flipping its coupling sign build the same matrix
    LinkSector flipped = trivial_gauge(lat);
    flipped.u[static_cast<std::size_t>(flip)] = -1;
    const auto w = vortex_sector(lat, flipped);
    const auto pair0 = oracle::spectrum_match(lat, kSingle, flip, 0.0, 1.0, w.w);
    CHECK(pair0.max_level_error <= 1e-8);
    CHECK(pair0.ground_energy_error <= 1e-8);

    // driven endpoint H(1) in the vortex-free sector
    const auto driven = oracle::spectrum_match(lat, kSingle, flip, 1.0, 1.0, all_plus);
    CHECK(driven.max_level_error <= 1e-8);
    CHECK(driven.ground_energy_error <= 1e-8);
}

TEST_CASE("fermion level reconstruction is guarded and symmetric") {
    const auto lat = build_lattice(1, 1);
    const auto model = assemble_coupling(lat, trivial_gauge(lat), kGeneric, lat.central_z_link());
    const auto levels = oracle::fermion_levels(model, 0.0);
    CHECK(levels.size() == 8);  // 2^(N/2)
    // particle-hole symmetry of the many-body spectrum (absolute tolerance:
    // mid-spectrum levels sit near zero)
    for (std::size_t i = 0; i < levels.size(); ++i) {
        CHECK(std::abs(levels[i] + levels[levels.size() - 1 - i]) <= 1e-10);
    }
}

TEST_CASE("bond expectations follow the rotated covariance") {
    const auto lat = build_lattice(1, 1);
    const int flip = lat.central_z_link();
    const auto model = assemble_coupling(lat, trivial_gauge(lat), kGeneric, flip);

    Rng rng(41);
    Pulse pulse;
    pulse.duration = 1.5;
    pulse.values.resize(12);
    for (double& v : pulse.values) { v = rng.uniform(); }

    const Eigen::VectorXd spin_vals = oracle::bond_expectations(lat, kGeneric, flip, pulse);
    const Eigen::MatrixXd O = propagate(model, pulse).O;
    const Eigen::MatrixXd gamma = O * ground_covariance(model, 0.0) * O.transpose();
    REQUIRE(spin_vals.size() == static_cast<Eigen::Index>(lat.links.size()));
    for (std::size_t li = 0; li < lat.links.size(); ++li) {
        const auto& link = lat.links[li];
        CHECK(spin_vals(static_cast<Eigen::Index>(li)) ==
              doctest::Approx(-gamma(link.from, link.to)).epsilon(1e-10));
    }
}

TEST_CASE("linear-ramp state fidelity reproduces the frozen single-plaquette value") {
    const auto lat = build_lattice(1, 1);
    const auto rep =
        oracle::state_fidelity(lat, kSingle, lat.central_z_link(), Pulse::linear_ramp(1.0, 100));
    CHECK(rep.init_degeneracy == 4);
    CHECK(rep.target_degeneracy == 8);
    CHECK(rep.fidelity == doctest::Approx(0.9227527584635655).epsilon(1e-9));
    CHECK(rep.choice_spread <= 1e-10);
    CHECK(rep.init_energy < rep.target_energy);
}

TEST_CASE("state optimization reaches deep infidelity quickly at short duration") {
    const auto lat = build_lattice(1, 1);
    OptimizeConfig cfg;
    cfg.n_segments = 100;
    cfg.T = 0.9;
    cfg.restarts = 2;
    cfg.seed = 10;
    cfg.max_iterations = 1500;
    cfg.infidelity_goal = 1e-8;
    const auto res = oracle::optimize_state(lat, kSingle, lat.central_z_link(), cfg);
    CHECK(res.best_infidelity <= 1e-6);
    CHECK(res.per_restart.size() >= 1);
}

TEST_CASE("random pulses never violate the fidelity bound") {
    const auto lat = build_lattice(1, 1);
    const auto rep = oracle::verify_bound(lat, kGeneric, lat.central_z_link(), 5, 7);
    CHECK(rep.trials == 5);
    CHECK(rep.violations == 0);
    CHECK(rep.b24_violations == 0);
    CHECK(rep.per_trial.size() == 5);
    CHECK(rep.bound_constant == doctest::Approx(1.0 / (32.0 * 6.0 * 6.0 * 6.0)).epsilon(1e-12));
    CHECK(!rep.offending_pulse.has_value());
    for (const auto& t : rep.per_trial) {
        CHECK(t.bound_ok);
        CHECK(t.b24_ok);
        CHECK(t.infidelity_h >= t.bound_rhs - 1e-12);
    }
}

TEST_CASE("gauge orbit accounting matches the closed forms") {
    // open: every fiber is a single orbit of size 2^(N-1)
    const auto open_rep = oracle::gauge_orbits(build_lattice(1, 1));
    CHECK(open_rep.total == 64);  // 2^L, L = 6
    CHECK(open_rep.classes.size() == 2);
    for (const auto& cls : open_rep.classes) {
        CHECK(cls.orbit_sizes.size() == 1);
        CHECK(cls.orbit_sizes.front() == 32);
        CHECK(cls.fiber_size == 32);
    }

    // one wrapped direction doubles the orbit count per fiber
    const auto half_rep = oracle::gauge_orbits(build_lattice(1, 2, Boundary::HalfPeriodic));
    CHECK(half_rep.total == 1024);  // 2^L, L = 10
    for (const auto& cls : half_rep.classes) {
        CHECK(cls.orbit_sizes.size() == 2);
        for (const auto s : cls.orbit_sizes) { CHECK(s == 128); }
    }

    // torus: four orbits per fiber, and only patterns with even vortex count
    const auto torus_rep = oracle::gauge_orbits(build_lattice(2, 2, Boundary::Periodic));
    CHECK(torus_rep.total == 4096);  // 2^L, L = 12
    CHECK(torus_rep.classes.size() == 8);
    for (const auto& cls : torus_rep.classes) {
        CHECK(cls.orbit_sizes.size() == 4);
        for (const auto s : cls.orbit_sizes) { CHECK(s == 128); }
        int minus = 0;
        for (const int w : cls.vortex) { minus += w == -1 ? 1 : 0; }
        CHECK(minus % 2 == 0);
    }
}

TEST_CASE("exponential-cost oracles refuse oversized lattices") {
    const auto big = build_lattice(2, 3);  // 22 sites
    CHECK_THROWS_AS(oracle::spin_hamiltonian(big, kGeneric, big.central_z_link(), 0.0),
                    ResourceGuardError);
    CHECK_THROWS_AS(oracle::verify_bound(big, kGeneric, big.central_z_link(), 1, 1),
                    ResourceGuardError);
    const auto huge = build_lattice(3, 3);
    CHECK_THROWS_AS(oracle::gauge_orbits(huge), ResourceGuardError);
}

}  // TEST_SUITE
