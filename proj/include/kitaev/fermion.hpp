#pragma once

#include <vector>

#include <Eigen/Dense>

#include "kitaev/lattice.hpp"

namespace kitaev {

struct ModelParams {
    double J = 1.0;
    double K = 0.01;
};

/// One +-1 value per stored oriented link; the reverse orientation carries
/// the opposite sign implicitly.
struct LinkSector {
    std::vector<int> u;
};

/// Plaquette eigenvalues induced by a link sector: w_p is the product of the
/// boundary u values read in the stored link orientation.
struct VortexSector {
    std::vector<int> w;
};

/// Quadratic (Majorana) form of the spin Hamiltonian in a fixed link sector:
/// H(f) ~ (i/2) sum A(f)_{jk} c_j c_k with A(f) = A0 + f * Ac real and
/// antisymmetric. Ac is supported only on the entries whose assembly
/// involves the flipped link (its nearest-neighbour pair plus the four
/// mediated next-nearest-neighbour pairs).
struct CouplingModel {
    Eigen::MatrixXd A0;
    Eigen::MatrixXd Ac;
    int             flipped_link = -1;
    ModelParams     params;

    auto n_sites() const -> int { return static_cast<int>(A0.rows()); }
    auto A(double f) const -> Eigen::MatrixXd { return A0 + f * Ac; }
    /// Generator of the Heisenberg-picture propagator: dO/dt = G(f) O.
    auto generator(double f) const -> Eigen::MatrixXd { return 2.0 * (A0 + f * Ac); }
    auto control_generator() const -> Eigen::MatrixXd { return 2.0 * Ac; }
};

/// All link values +1 (vortex-free gauge).
auto trivial_gauge(const HoneycombLattice& lat) -> LinkSector;

auto vortex_sector(const HoneycombLattice& lat, const LinkSector& sector) -> VortexSector;

/// Coupling matrix of the sector with no control applied.
auto coupling_matrix(const HoneycombLattice& lat, const LinkSector& sector, const ModelParams& params)
    -> Eigen::MatrixXd;

/// Ramp family A(f) interpolating between the sector (f=0) and the sector
/// with u negated on `flipped_link` (f=1): every amplitude whose assembly
/// uses the flipped link scales by (1 - 2f).
auto assemble_coupling(const HoneycombLattice& lat, const LinkSector& sector, const ModelParams& params,
                       int flipped_link) -> CouplingModel;

/// Quasiparticle energies at ramp value f: the N/2 nonnegative values
/// omega_j = 2 * (positive eigenvalues of iA(f)), sorted ascending.
auto spectrum(const CouplingModel& model, double f) -> std::vector<double>;

/// Ground energy E_g = -1/2 sum omega_j.
auto ground_energy(const CouplingModel& model, double f) -> double;

/// Vortex-pair creation gap |E_g(f=1) - E_g(f=0)| for flipping `flipped_link`
/// out of the trivial gauge.
auto vortex_gap(const HoneycombLattice& lat, int flipped_link, const ModelParams& params) -> double;

/// Smallest quasiparticle energy at ramp value f.
auto fermionic_gap(const CouplingModel& model, double f) -> double;

/// Ground-state Majorana covariance Gamma_{jk} = <i c_j c_k> at ramp value f.
auto ground_covariance(const CouplingModel& model, double f) -> Eigen::MatrixXd;

}  // namespace kitaev
