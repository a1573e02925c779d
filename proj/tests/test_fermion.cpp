#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kitaev/fermion.hpp"
#include "kitaev/lattice.hpp"

using namespace kitaev;

namespace {

auto model_for(int rows, int cols, double J, double K) -> CouplingModel {
    const auto lat = build_lattice(rows, cols);
    return assemble_coupling(lat, trivial_gauge(lat), {J, K}, lat.central_z_link());
}

}  // namespace

TEST_SUITE("fermion") {

TEST_CASE("coupling matrices are antisymmetric along the whole ramp") {
    const auto model = model_for(1, 2, 1.0, 0.01);
    for (const double f : {0.0, 0.3, 0.7, 1.0}) {
        const Eigen::MatrixXd A = model.A(f);
        CHECK((A + A.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("flipping the coupling sign equals flipping the gauge link") {
    const auto lat = build_lattice(1, 2);
    const int flip = lat.central_z_link();
    const ModelParams params{1.0, 0.01};
    const auto model = assemble_coupling(lat, trivial_gauge(lat), params, flip);

    LinkSector flipped = trivial_gauge(lat);
    flipped.u[static_cast<std::size_t>(flip)] = -1;
    const Eigen::MatrixXd direct = coupling_matrix(lat, flipped, params);
    CHECK((model.A(1.0) - direct).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("the flipped link toggles exactly one plaquette pair") {
    const auto lat = build_lattice(1, 2);
    LinkSector flipped = trivial_gauge(lat);
    flipped.u[static_cast<std::size_t>(lat.central_z_link())] = -1;
    const auto w = vortex_sector(lat, flipped);
    const int minus = static_cast<int>(std::count(w.w.begin(), w.w.end(), -1));
    CHECK(minus == 2);
    const auto w0 = vortex_sector(lat, trivial_gauge(lat));
    CHECK(std::count(w0.w.begin(), w0.w.end(), 1) == static_cast<long>(w0.w.size()));
}

TEST_CASE("single-plaquette vortex gap is 4 - 2*sqrt(3) at K = 0") {
    const auto lat = build_lattice(1, 1);
    const double gap = vortex_gap(lat, lat.central_z_link(), {1.0, 0.0});
    CHECK(gap == doctest::Approx(4.0 - 2.0 * std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("two-plaquette vortex gap at K = 0.01 matches the frozen value") {
    const auto lat = build_lattice(1, 2);
    const double gap = vortex_gap(lat, lat.central_z_link(), {1.0, 0.01});
    CHECK(gap == doctest::Approx(0.37583457).epsilon(1e-6));
}

TEST_CASE("mode energies are positive and pair up with the ground energy") {
    const auto model = model_for(1, 2, 1.0, 0.01);
    for (const double f : {0.0, 0.5, 1.0}) {
        const auto omega = spectrum(model, f);
        CHECK(static_cast<int>(omega.size()) == model.n_sites() / 2);
        for (std::size_t i = 0; i < omega.size(); ++i) {
            CHECK(omega[i] >= -1e-12);
            if (i > 0) { CHECK(omega[i] >= omega[i - 1] - 1e-12); }
        }
        // E_g = -(1/2) sum_k omega_k
        const double sum = std::accumulate(omega.begin(), omega.end(), 0.0);
        CHECK(ground_energy(model, f) == doctest::Approx(-0.5 * sum).epsilon(1e-12));
    }
}

TEST_CASE("single plaquette at K = 0: initial gap 2J, zero mode at the endpoint") {
    const auto model = model_for(1, 1, 1.0, 0.0);
    CHECK(fermionic_gap(model, 0.0) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(fermionic_gap(model, 1.0) <= 1e-9);
}

TEST_CASE("ground covariance is an antisymmetric complex structure") {
    const auto model = model_for(1, 2, 1.0, 0.01);
    const Eigen::MatrixXd G = ground_covariance(model, 0.0);
    const int n = model.n_sites();
    CHECK((G + G.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((G * G + Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("control generator only involves terms touching the flipped link") {
    const auto lat = build_lattice(2, 2);
    const auto model = assemble_coupling(lat, trivial_gauge(lat), {1.0, 0.01}, lat.central_z_link());
    const auto& link = lat.links[static_cast<std::size_t>(lat.central_z_link())];
    const Eigen::MatrixXd C = 0.5 * model.control_generator();  // = Ac
    for (int i = 0; i < model.n_sites(); ++i) {
        for (int j = 0; j < model.n_sites(); ++j) {
            if (C(i, j) != 0.0) {
                const bool touches = i == link.from || i == link.to || j == link.from || j == link.to;
                CHECK(touches);
            }
        }
    }
}

}  // TEST_SUITE
