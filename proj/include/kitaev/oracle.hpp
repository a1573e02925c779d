#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "kitaev/errors.hpp"
#include "kitaev/evolve.hpp"
#include "kitaev/fermion.hpp"
#include "kitaev/grape.hpp"
#include "kitaev/lattice.hpp"

// Exact spin-space brute force at small N. Validates the fermionization
// conventions, reproduces the state-fidelity experiment, checks the
// infidelity bound, and enumerates gauge orbits. Dimensions are guarded:
// spin_hamiltonian N <= 14, propagation N <= 12, state optimization N <= 8,
// orbit enumeration L <= 24. Guard violations throw ResourceGuardError.

namespace kitaev::oracle {

/// Dense 2^N x 2^N Hamiltonian H(f) = H + f * H_control. Two-body terms are
/// -J sigma^k_a sigma^k_b over links; each plaquette contributes six
/// three-body terms -K sigma^{k1}_a sigma^{km}_m sigma^{k2}_b where km is
/// the kind of the link pointing outwards at the middle site. Terms touching
/// `flipped_link` scale by (1 - 2f).
auto spin_hamiltonian(const HoneycombLattice& lat, const ModelParams& params, int flipped_link, double f)
    -> Eigen::MatrixXcd;

/// Plaquette operator W_p: product over the six middle-site outward Paulis.
auto plaquette_operator(const HoneycombLattice& lat, int plaquette_index) -> Eigen::MatrixXcd;

/// Piecewise-constant propagator of the spin Hamiltonian family.
auto spin_propagator(const HoneycombLattice& lat, const ModelParams& params, int flipped_link,
                     const Pulse& pulse) -> Eigen::MatrixXcd;

/// Ground-multiplet averaged bond expectations <sigma^k_a sigma^k_b>, one
/// entry per link, after evolving the H(0) ground space under the pulse.
/// The fermionic counterpart is -u_l * (O Gamma0 O^T)_{from,to}; agreement
/// pins the generator normalization and the three-body sign conventions.
auto bond_expectations(const HoneycombLattice& lat, const ModelParams& params, int flipped_link,
                       const Pulse& pulse) -> Eigen::VectorXd;

/// Orthonormal basis of the simultaneous W_p eigenspace with the given
/// pattern of +-1 eigenvalues (all +1 = vortex-free sector).
auto sector_basis(const HoneycombLattice& lat, const std::vector<int>& pattern) -> Eigen::MatrixXcd;

/// Spin spectrum restricted to a W_p sector, sorted ascending.
auto sector_spectrum(const HoneycombLattice& lat, const ModelParams& params, int flipped_link, double f,
                     const std::vector<int>& pattern) -> Eigen::VectorXd;

struct StateFidelityReport {
    double fidelity = 0.0;
    int    init_degeneracy = 0;    ///< ground multiplicity of H(0) in the vortex-free sector
    int    target_degeneracy = 0;  ///< lowest-eigenspace multiplicity of H(1) in the same sector
    double choice_spread = 0.0;    ///< max |F(psi) - F(psi')| over the init multiplet
    double init_energy = 0.0;
    double target_energy = 0.0;
};

/// Subspace state fidelity F_s = ||P_target U(pulse) psi_init||^2 in the
/// vortex-free W_p sector (the sector is conserved by every H(f)). The
/// target is the lowest eigenspace of H(1) restricted to that sector, which
/// is the adiabatic image of the initial state; both ground spaces are
/// structurally degenerate, so the report carries the multiplicities and the
/// observed spread of F over initial-state choices instead of failing.
auto state_fidelity(const HoneycombLattice& lat, const ModelParams& params, int flipped_link,
                    const Pulse& pulse) -> StateFidelityReport;

/// GRAPE on the state objective 1 - ||P_target U psi_init||^2, same restart
/// and L-BFGS loop as the Heisenberg optimizer (config.T_ad is unused).
auto optimize_state(const HoneycombLattice& lat, const ModelParams& params, int flipped_link,
                    const OptimizeConfig& config) -> OptimizationResult;

struct BoundTrial {
    double T;
    double infidelity_h;  ///< I_H against the adiabatic propagator
    double state_fid;     ///< F_s against the adiabatically evolved state
    double bound_rhs;     ///< (1 - sqrt(F_s)) / (32 N^3)
    bool   bound_ok;
    double b24_lhs;  ///< min_phi ||U_ad - e^{i phi} U||_op
    double b24_rhs;  ///< sqrt(2) * sqrt(1 - sqrt(F_s))
    bool   b24_ok;
};

struct BoundReport {
    int                      trials = 0;
    int                      violations = 0;
    int                      b24_violations = 0;
    double                   bound_constant = 0.0;  ///< 1 / (32 N^3)
    double                   min_ratio = 0.0;       ///< empirical min I_H / (1 - sqrt(F_s))
    std::vector<BoundTrial>  per_trial;
    std::optional<Pulse>     offending_pulse;  ///< first violating pulse, if any
};

/// Random-pulse check of I_H >= (1 - sqrt(F_s)) / (32 N^3) (slack 1e-12) and
/// of the operator-norm inequality it is derived from. Trial t draws a
/// duration in [0.5, 4] and 16 segment values in [0, 1) from seed + t.
auto verify_bound(const HoneycombLattice& lat, const ModelParams& params, int flipped_link, int trials,
                  std::uint64_t seed, double T_ad = 300.0) -> BoundReport;

/// All 2^{N/2} many-body energies of the quadratic Hamiltonian at ramp value
/// f: ground energy plus every subset sum of the positive mode energies.
/// Sorted ascending. Guarded for N/2 > 26.
auto fermion_levels(const CouplingModel& model, double f) -> std::vector<double>;

struct SpectrumMatchReport {
    Eigen::Index sector_dimension = 0;
    int          n_levels_spin = 0;     ///< distinct spin levels at cluster_tol
    int          n_levels_fermion = 0;  ///< distinct reconstructed levels at cluster_tol
    double       max_level_error = 0.0;  ///< infinity when the level counts differ
    double       ground_energy_error = 0.0;
};

/// Compare the spin spectrum of H(spin_f) restricted to a vortex sector
/// against the free-fermion reconstruction at ramp value fermion_f.
/// Degenerate levels are collapsed at cluster_tol on both sides before the
/// level-by-level comparison; multiplicities are not compared because a
/// single link sector spans a full spin sector only up to gauge multiplicity.
auto spectrum_match(const HoneycombLattice& lat, const ModelParams& params, int flipped_link,
                    double spin_f, double fermion_f, const std::vector<int>& pattern,
                    double cluster_tol = 1e-6) -> SpectrumMatchReport;

struct OrbitClass {
    std::vector<int>       vortex;  ///< w_p pattern of this sector
    long long              fiber_size = 0;
    std::vector<long long> orbit_sizes;  ///< under the site-flip (D_j) action
};

struct GaugeOrbitReport {
    std::vector<OrbitClass> classes;
    long long               total = 0;  ///< sum of fiber sizes, must equal 2^L
};

/// Enumerate all 2^L link sectors, group them by vortex sector, and split
/// each fiber into orbits of the involutions "flip every link incident to
/// site j". kappa of a sector is the number of orbits in its fiber.
auto gauge_orbits(const HoneycombLattice& lat) -> GaugeOrbitReport;

}  // namespace kitaev::oracle
