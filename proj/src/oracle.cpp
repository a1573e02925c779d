#include "kitaev/oracle.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>

#include "kitaev/lbfgs.hpp"
#include "kitaev/rng.hpp"

namespace kitaev::oracle {

namespace {

using Cplx = std::complex<double>;
constexpr double kPi = 3.14159265358979323846;

auto check_sites(const HoneycombLattice& lat, int limit, const char* what) -> void {
    if (lat.n_sites > limit) {
        throw ResourceGuardError(std::string(what) + ": " + std::to_string(lat.n_sites) +
                                 " sites exceeds the guard of " + std::to_string(limit));
    }
}

auto third_kind(LinkKind a, LinkKind b) -> LinkKind {
    if (a == b) { throw std::logic_error("third_kind: equal kinds"); }
    return static_cast<LinkKind>(3 - static_cast<int>(a) - static_cast<int>(b));
}

struct PauliFactor {
    int      site;
    LinkKind kind;
};

/// In-place single-Pauli action on a computational basis state.
inline auto apply_factor(const PauliFactor& pf, std::uint32_t& state, Cplx& amp) -> void {
    const std::uint32_t bit = 1u << static_cast<unsigned>(pf.site);
    const bool one = (state & bit) != 0;
    switch (pf.kind) {
        case LinkKind::X: state ^= bit; break;
        case LinkKind::Y:
            amp *= one ? Cplx(0.0, -1.0) : Cplx(0.0, 1.0);
            state ^= bit;
            break;
        case LinkKind::Z:
            if (one) { amp = -amp; }
            break;
    }
}

struct Term {
    double                     coef;
    int                        n_factors;
    std::array<PauliFactor, 3> factor;
};

auto build_terms(const HoneycombLattice& lat, const ModelParams& params, int flipped_link, double f)
    -> std::vector<Term> {
    std::vector<Term> terms;
    terms.reserve(lat.links.size() + lat.triples.size());
    for (std::size_t li = 0; li < lat.links.size(); ++li) {
        const Link& l = lat.links[li];
        double c = -params.J;
        if (static_cast<int>(li) == flipped_link) { c *= 1.0 - 2.0 * f; }
        terms.push_back({c, 2, {{{l.from, l.kind}, {l.to, l.kind}, {0, LinkKind::X}}}});
    }
    for (const ThreeBodyTriple& t : lat.triples) {
        const Link& l1 = lat.links[static_cast<std::size_t>(t.link_left)];
        const Link& l2 = lat.links[static_cast<std::size_t>(t.link_right)];
        double c = -params.K;
        if (t.link_left == flipped_link) { c *= 1.0 - 2.0 * f; }
        if (t.link_right == flipped_link) { c *= 1.0 - 2.0 * f; }
        terms.push_back(
            {c, 3, {{{t.left, l1.kind}, {t.middle, third_kind(l1.kind, l2.kind)}, {t.right, l2.kind}}}});
    }
    return terms;
}

/// Outward Pauli kinds around a plaquette: at each corner, the kind not used
/// by the two boundary links meeting there.
auto plaquette_factors(const HoneycombLattice& lat, int plaquette_index) -> std::vector<PauliFactor> {
    const Plaquette& p = lat.plaquettes[static_cast<std::size_t>(plaquette_index)];
    std::vector<PauliFactor> out;
    out.reserve(6);
    for (int i = 0; i < 6; ++i) {
        const LinkKind ka = lat.links[static_cast<std::size_t>(p.links[static_cast<std::size_t>((i + 5) % 6)])].kind;
        const LinkKind kb = lat.links[static_cast<std::size_t>(p.links[static_cast<std::size_t>(i)])].kind;
        out.push_back({p.sites[static_cast<std::size_t>(i)], third_kind(ka, kb)});
    }
    return out;
}

/// W * B for a Pauli string W (a signed permutation) without forming W.
auto apply_pauli_string(const std::vector<PauliFactor>& factors, const Eigen::MatrixXcd& B)
    -> Eigen::MatrixXcd {
    const auto dim = static_cast<std::uint32_t>(B.rows());
    Eigen::MatrixXcd out(B.rows(), B.cols());
    for (std::uint32_t s = 0; s < dim; ++s) {
        std::uint32_t s2 = s;
        Cplx amp(1.0, 0.0);
        for (const PauliFactor& pf : factors) { apply_factor(pf, s2, amp); }
        out.row(s2) = amp * B.row(s);
    }
    return out;
}

auto hermitize(const Eigen::MatrixXcd& M) -> Eigen::MatrixXcd { return 0.5 * (M + M.adjoint()); }

/// Piecewise-constant unitary for the family H0 + f * Hc.
auto propagate_unitary(const Eigen::MatrixXcd& H0, const Eigen::MatrixXcd& Hc, const Pulse& pulse)
    -> Eigen::MatrixXcd {
    if (pulse.n_segments() < 1) { throw std::invalid_argument("propagate_unitary: empty pulse"); }
    const double dt = pulse.dt();
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Identity(H0.rows(), H0.cols());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
    for (const double f : pulse.values) {
        es.compute(H0 + f * Hc);
        const Eigen::VectorXcd ph = (Cplx(0.0, -dt) * es.eigenvalues().cast<Cplx>().array()).exp();
        U = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint() * U;
    }
    return U;
}

auto all_plus_pattern(const HoneycombLattice& lat) -> std::vector<int> {
    return std::vector<int>(lat.plaquettes.size(), 1);
}

auto ground_multiplicity(const Eigen::VectorXd& evals, double tol = 1e-8) -> int {
    int m = 1;
    while (m < evals.size() && std::abs(evals(m) - evals(0)) < tol) { ++m; }
    return m;
}

auto sinc(double x) -> double {
    if (std::abs(x) < 1e-4) { return 1.0 - x * x / 6.0 * (1.0 - x * x / 20.0); }
    return std::sin(x) / x;
}

auto now() -> std::chrono::steady_clock::time_point { return std::chrono::steady_clock::now(); }

auto seconds_since(std::chrono::steady_clock::time_point t0) -> double {
    return std::chrono::duration<double>(now() - t0).count();
}

}  // namespace

auto spin_hamiltonian(const HoneycombLattice& lat, const ModelParams& params, int flipped_link, double f)
    -> Eigen::MatrixXcd {
    check_sites(lat, 14, "spin_hamiltonian");
    if (flipped_link >= static_cast<int>(lat.links.size())) {
        throw std::invalid_argument("spin_hamiltonian: flipped_link out of range");
    }
    const auto terms = build_terms(lat, params, flipped_link, f);
    const auto dim = std::uint32_t{1} << static_cast<unsigned>(lat.n_sites);
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::uint32_t s = 0; s < dim; ++s) {
        for (const Term& t : terms) {
            std::uint32_t s2 = s;
            Cplx amp(t.coef, 0.0);
            for (int i = 0; i < t.n_factors; ++i) { apply_factor(t.factor[static_cast<std::size_t>(i)], s2, amp); }
            H(s2, s) += amp;
        }
    }
    return H;
}

auto plaquette_operator(const HoneycombLattice& lat, int plaquette_index) -> Eigen::MatrixXcd {
    check_sites(lat, 14, "plaquette_operator");
    if (plaquette_index < 0 || plaquette_index >= static_cast<int>(lat.plaquettes.size())) {
        throw std::invalid_argument("plaquette_operator: index out of range");
    }
    const auto dim = std::int64_t{1} << lat.n_sites;
    return apply_pauli_string(plaquette_factors(lat, plaquette_index),
                              Eigen::MatrixXcd::Identity(dim, dim));
}

auto spin_propagator(const HoneycombLattice& lat, const ModelParams& params, int flipped_link,
                     const Pulse& pulse) -> Eigen::MatrixXcd {
    check_sites(lat, 12, "spin_propagator");
    const Eigen::MatrixXcd H0 = spin_hamiltonian(lat, params, flipped_link, 0.0);
    const Eigen::MatrixXcd Hc = spin_hamiltonian(lat, params, flipped_link, 1.0) - H0;
    return propagate_unitary(H0, Hc, pulse);
}

auto bond_expectations(const HoneycombLattice& lat, const ModelParams& params, int flipped_link,
                       const Pulse& pulse) -> Eigen::VectorXd {
    check_sites(lat, 12, "bond_expectations");
    const Eigen::MatrixXcd H0 = spin_hamiltonian(lat, params, flipped_link, 0.0);
    const Eigen::MatrixXcd Hc = spin_hamiltonian(lat, params, flipped_link, 1.0) - H0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H0);
    const int m = ground_multiplicity(es.eigenvalues());
    Eigen::MatrixXcd Pg = es.eigenvectors().leftCols(m);
    if (pulse.n_segments() > 0) { Pg = propagate_unitary(H0, Hc, pulse) * Pg; }
    Eigen::VectorXd out(static_cast<Eigen::Index>(lat.links.size()));
    for (std::size_t li = 0; li < lat.links.size(); ++li) {
        const Link& l = lat.links[li];
        const std::vector<PauliFactor> bond{{l.from, l.kind}, {l.to, l.kind}};
        const Eigen::MatrixXcd BPg = apply_pauli_string(bond, Pg);
        out(static_cast<Eigen::Index>(li)) = (Pg.adjoint() * BPg).trace().real() / m;
    }
    return out;
}

auto sector_basis(const HoneycombLattice& lat, const std::vector<int>& pattern) -> Eigen::MatrixXcd {
    check_sites(lat, 12, "sector_basis");
    if (pattern.size() != lat.plaquettes.size()) {
        throw std::invalid_argument("sector_basis: pattern size must equal the plaquette count");
    }
    for (const int w : pattern) {
        if (w != 1 && w != -1) { throw std::invalid_argument("sector_basis: pattern entries must be +-1"); }
    }
    const auto dim = std::int64_t{1} << lat.n_sites;
    Eigen::MatrixXcd B = Eigen::MatrixXcd::Identity(dim, dim);
    for (std::size_t p = 0; p < lat.plaquettes.size(); ++p) {
        if (B.cols() == 0) { break; }
        const Eigen::MatrixXcd WB = apply_pauli_string(plaquette_factors(lat, static_cast<int>(p)), B);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitize(B.adjoint() * WB));
        if ((es.eigenvalues().array().abs() - 1.0).abs().maxCoeff() > 1e-8) {
            throw std::runtime_error("sector_basis: plaquette eigenvalues are not +-1");
        }
        std::vector<Eigen::Index> keep;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            if (pattern[p] * es.eigenvalues()(i) > 0.5) { keep.push_back(i); }
        }
        Eigen::MatrixXcd next(B.rows(), static_cast<Eigen::Index>(keep.size()));
        for (std::size_t i = 0; i < keep.size(); ++i) {
            next.col(static_cast<Eigen::Index>(i)) = B * es.eigenvectors().col(keep[i]);
        }
        B = std::move(next);
    }
    return B;
}

auto sector_spectrum(const HoneycombLattice& lat, const ModelParams& params, int flipped_link, double f,
                     const std::vector<int>& pattern) -> Eigen::VectorXd {
    const Eigen::MatrixXcd B = sector_basis(lat, pattern);
    if (B.cols() == 0) { return Eigen::VectorXd(0); }
    const Eigen::MatrixXcd H = spin_hamiltonian(lat, params, flipped_link, f);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitize(B.adjoint() * H * B));
    return es.eigenvalues();
}

namespace {

auto collapse_levels(std::vector<double> sorted, double tol) -> std::vector<double> {
    std::vector<double> out;
    for (const double e : sorted) {
        if (out.empty() || e - out.back() > tol) { out.push_back(e); }
    }
    return out;
}

}  // namespace

auto fermion_levels(const CouplingModel& model, double f) -> std::vector<double> {
    const std::vector<double> omega = spectrum(model, f);
    const double eg = ground_energy(model, f);
    const auto n_modes = omega.size();
    if (n_modes > 26) {
        throw ResourceGuardError("fermion_levels: 2^" + std::to_string(n_modes) +
                                 " many-body energies exceed the enumeration guard");
    }
    std::vector<double> sums;
    sums.reserve(std::size_t{1} << n_modes);
    for (std::uint32_t S = 0; S < (std::uint32_t{1} << n_modes); ++S) {
        double e = eg;
        for (std::size_t j = 0; j < n_modes; ++j) {
            if (S >> j & 1u) { e += omega[j]; }
        }
        sums.push_back(e);
    }
    std::sort(sums.begin(), sums.end());
    return sums;
}

auto spectrum_match(const HoneycombLattice& lat, const ModelParams& params, int flipped_link,
                    double spin_f, double fermion_f, const std::vector<int>& pattern,
                    double cluster_tol) -> SpectrumMatchReport {
    const Eigen::VectorXd spin = sector_spectrum(lat, params, flipped_link, spin_f, pattern);
    const CouplingModel model = assemble_coupling(lat, trivial_gauge(lat), params, flipped_link);
    const auto spin_levels =
        collapse_levels({spin.data(), spin.data() + spin.size()}, cluster_tol);
    const auto ferm_levels = collapse_levels(fermion_levels(model, fermion_f), cluster_tol);

    SpectrumMatchReport rep;
    rep.sector_dimension = spin.size();
    rep.n_levels_spin = static_cast<int>(spin_levels.size());
    rep.n_levels_fermion = static_cast<int>(ferm_levels.size());
    if (spin_levels.size() == ferm_levels.size()) {
        for (std::size_t i = 0; i < spin_levels.size(); ++i) {
            rep.max_level_error = std::max(rep.max_level_error, std::abs(spin_levels[i] - ferm_levels[i]));
        }
    } else {
        rep.max_level_error = std::numeric_limits<double>::infinity();
    }
    rep.ground_energy_error = spin.size() == 0 ? std::numeric_limits<double>::infinity()
                                               : std::abs(spin(0) - ground_energy(model, fermion_f));
    return rep;
}

auto state_fidelity(const HoneycombLattice& lat, const ModelParams& params, int flipped_link,
                    const Pulse& pulse) -> StateFidelityReport {
    check_sites(lat, 12, "state_fidelity");
    if (flipped_link < 0 || flipped_link >= static_cast<int>(lat.links.size())) {
        throw std::invalid_argument("state_fidelity: flipped_link out of range");
    }
    const Eigen::MatrixXcd B = sector_basis(lat, all_plus_pattern(lat));
    const Eigen::MatrixXcd H0 = spin_hamiltonian(lat, params, flipped_link, 0.0);
    const Eigen::MatrixXcd H1 = spin_hamiltonian(lat, params, flipped_link, 1.0);
    const Eigen::MatrixXcd Hs0 = hermitize(B.adjoint() * H0 * B);
    const Eigen::MatrixXcd Hs1 = hermitize(B.adjoint() * H1 * B);
    const Eigen::MatrixXcd Hsc = Hs1 - Hs0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es0(Hs0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es1(Hs1);

    StateFidelityReport rep;
    rep.init_degeneracy = ground_multiplicity(es0.eigenvalues());
    rep.target_degeneracy = ground_multiplicity(es1.eigenvalues());
    rep.init_energy = es0.eigenvalues()(0);
    rep.target_energy = es1.eigenvalues()(0);

    // propagate the whole initial ground multiplet to expose (non-)dependence
    // on the representative choice
    Eigen::MatrixXcd Psi = es0.eigenvectors().leftCols(rep.init_degeneracy);
    if (pulse.n_segments() > 0 && pulse.duration > 0.0) {
        const double dt = pulse.dt();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
        for (const double f : pulse.values) {
            es.compute(Hs0 + f * Hsc);
            const Eigen::VectorXcd ph = (Cplx(0.0, -dt) * es.eigenvalues().cast<Cplx>().array()).exp();
            Psi = es.eigenvectors() * ph.asDiagonal() * (es.eigenvectors().adjoint() * Psi);
        }
    }
    const Eigen::MatrixXcd G1 = es1.eigenvectors().leftCols(rep.target_degeneracy);
    const Eigen::MatrixXcd Y = G1.adjoint() * Psi;
    const Eigen::MatrixXcd M = Y.adjoint() * Y;  // fidelity form on the initial multiplet
    rep.fidelity = M(0, 0).real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esm(hermitize(M));
    rep.choice_spread = esm.eigenvalues().maxCoeff() - esm.eigenvalues().minCoeff();
    return rep;
}

auto optimize_state(const HoneycombLattice& lat, const ModelParams& params, int flipped_link,
                    const OptimizeConfig& config) -> OptimizationResult {
    check_sites(lat, 8, "optimize_state");
    if (flipped_link < 0 || flipped_link >= static_cast<int>(lat.links.size())) {
        throw std::invalid_argument("optimize_state: flipped_link out of range");
    }
    if (config.restarts < 1 || config.n_segments < 1 || config.T <= 0.0) {
        throw std::invalid_argument("optimize_state: need restarts >= 1, n_segments >= 1, T > 0");
    }
    if (config.clamp_endpoints && config.n_segments < 3) {
        throw std::invalid_argument("optimize_state: clamped pulses need at least 3 segments");
    }
    const auto t0 = now();

    const Eigen::MatrixXcd B = sector_basis(lat, all_plus_pattern(lat));
    const Eigen::MatrixXcd H0 = spin_hamiltonian(lat, params, flipped_link, 0.0);
    const Eigen::MatrixXcd H1 = spin_hamiltonian(lat, params, flipped_link, 1.0);
    const Eigen::MatrixXcd Hs0 = hermitize(B.adjoint() * H0 * B);
    const Eigen::MatrixXcd Hs1 = hermitize(B.adjoint() * H1 * B);
    const Eigen::MatrixXcd Hsc = Hs1 - Hs0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es0(Hs0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es1(Hs1);
    const Eigen::VectorXcd psi0 = es0.eigenvectors().col(0);
    const int m1 = ground_multiplicity(es1.eigenvalues());
    const Eigen::MatrixXcd G1 = es1.eigenvectors().leftCols(m1);
    const Eigen::MatrixXcd P = G1 * G1.adjoint();
    const auto d = Hs0.rows();

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

    // state-overlap objective, gradient by the eigenbasis derivative of each
    // segment exponential (identical Phi weights as the Heisenberg objective)
    const Objective objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad_out) -> double {
        const Pulse pulse = assemble_pulse(x);
        const double dt = pulse.dt();
        std::vector<Eigen::MatrixXcd> Vs(static_cast<std::size_t>(n));
        std::vector<Eigen::VectorXd> ths(static_cast<std::size_t>(n));
        std::vector<Eigen::VectorXcd> psis(static_cast<std::size_t>(n) + 1);
        psis[0] = psi0;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
        for (int k = 0; k < n; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            es.compute(Hs0 + pulse.values[ku] * Hsc);
            Vs[ku] = es.eigenvectors();
            ths[ku] = -dt * es.eigenvalues();
            const Eigen::VectorXcd ph = (Cplx(0.0, 1.0) * ths[ku].cast<Cplx>().array()).exp();
            psis[ku + 1] = Vs[ku] * (ph.asDiagonal() * (Vs[ku].adjoint() * psis[ku]));
        }
        const Eigen::VectorXcd phi = psis[static_cast<std::size_t>(n)];
        Eigen::VectorXcd lam = P * phi;
        const double F = std::real(phi.dot(lam));

        Eigen::VectorXd grad(n);
        Eigen::MatrixXcd Bm(d, d), Mx(d, d);
        for (int k = n - 1; k >= 0; --k) {
            const auto ku = static_cast<std::size_t>(k);
            const Eigen::MatrixXcd& V = Vs[ku];
            const Eigen::VectorXd& th = ths[ku];
            Bm.noalias() = V.adjoint() * Hsc * V;
            for (Eigen::Index p = 0; p < d; ++p) {
                for (Eigen::Index q = 0; q < d; ++q) {
                    const Cplx phi_pq =
                        std::exp(Cplx(0.0, 0.5 * (th(p) + th(q)))) * sinc(0.5 * (th(p) - th(q)));
                    Mx(p, q) = phi_pq * Cplx(0.0, -dt) * Bm(p, q);
                }
            }
            const Eigen::VectorXcd dU_psi = V * (Mx * (V.adjoint() * psis[ku]));
            grad(k) = -2.0 * std::real(lam.dot(dU_psi));
            const Eigen::VectorXcd ph_back = (Cplx(0.0, -1.0) * th.cast<Cplx>().array()).exp();
            lam = V * (ph_back.asDiagonal() * (V.adjoint() * lam));
        }
        if (config.clamp_endpoints) {
            grad_out = grad.segment(1, n_free);
        } else {
            grad_out = std::move(grad);
        }
        return 1.0 - F;
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

auto verify_bound(const HoneycombLattice& lat, const ModelParams& params, int flipped_link, int trials,
                  std::uint64_t seed, double T_ad) -> BoundReport {
    check_sites(lat, 10, "verify_bound");
    if (flipped_link < 0 || flipped_link >= static_cast<int>(lat.links.size())) {
        throw std::invalid_argument("verify_bound: flipped_link out of range");
    }
    if (trials < 1) { throw std::invalid_argument("verify_bound: trials must be >= 1"); }
    const int N = lat.n_sites;

    // Heisenberg side
    const CouplingModel model = assemble_coupling(lat, trivial_gauge(lat), params, flipped_link);
    const Eigen::MatrixXd Wad = adiabatic_target(model, T_ad).O;

    // spin side, restricted to the conserved all-+1 sector (psi0 lives
    // there and both propagators preserve it, so the bound chain closes
    // within the sector): ground representative and adiabatic unitary
    const Eigen::MatrixXcd H0 = spin_hamiltonian(lat, params, flipped_link, 0.0);
    const Eigen::MatrixXcd Hc = spin_hamiltonian(lat, params, flipped_link, 1.0) - H0;
    const Eigen::MatrixXcd B = sector_basis(lat, all_plus_pattern(lat));
    const Eigen::MatrixXcd H0s = hermitize(B.adjoint() * H0 * B);
    const Eigen::MatrixXcd Hcs = hermitize(B.adjoint() * Hc * B);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es0(H0s);
    const Eigen::VectorXcd psi0 = es0.eigenvectors().col(0);

    // same midpoint-rule 1/n^2 ladder as the fermionic target; 1e-6 leaves
    // the bound margins (O(1) on random pulses, slack 1e-12) untouched
    Eigen::MatrixXcd Uad = propagate_unitary(H0s, Hcs, Pulse::linear_ramp(T_ad, 4096));
    bool converged = false;
    for (int n_seg = 8192; n_seg <= (1 << 18); n_seg *= 2) {
        const Eigen::MatrixXcd next = propagate_unitary(H0s, Hcs, Pulse::linear_ramp(T_ad, n_seg));
        const double diff = (next - Uad).norm();
        Uad = next;
        if (diff <= 1e-6) {
            converged = true;
            break;
        }
    }
    if (!converged) { throw std::runtime_error("verify_bound: adiabatic spin propagator did not converge"); }
    const Eigen::VectorXcd psi_ad = Uad * psi0;

    BoundReport rep;
    rep.trials = trials;
    rep.bound_constant = 1.0 / (32.0 * N * N * N);
    rep.min_ratio = std::numeric_limits<double>::infinity();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces;
    for (int t = 0; t < trials; ++t) {
        Rng rng(seed + static_cast<std::uint64_t>(t));
        Pulse pulse;
        pulse.duration = rng.uniform(0.5, 4.0);
        pulse.values.resize(16);
        for (double& v : pulse.values) { v = rng.uniform(); }

        const Eigen::MatrixXd O = propagate(model, pulse).O;
        const double infid_h = 1.0 - heisenberg_fidelity(Wad, O);
        const Eigen::MatrixXcd U = propagate_unitary(H0s, Hcs, pulse);
        const Cplx overlap = psi_ad.dot(U * psi0);
        const double fs = std::clamp(std::norm(overlap), 0.0, 1.0);
        const double gap = 1.0 - std::sqrt(fs);

        BoundTrial trial;
        trial.T = pulse.duration;
        trial.infidelity_h = infid_h;
        trial.state_fid = fs;
        trial.bound_rhs = gap * rep.bound_constant;
        trial.bound_ok = infid_h >= trial.bound_rhs - 1e-12;

        // operator-norm link: distance up to global phase from the phase
        // spread of the relative unitary
        ces.compute(Uad.adjoint() * U);
        Eigen::VectorXd angles(ces.eigenvalues().size());
        for (Eigen::Index i = 0; i < angles.size(); ++i) { angles(i) = std::arg(ces.eigenvalues()(i)); }
        std::sort(angles.data(), angles.data() + angles.size());
        double max_gap = 2.0 * kPi - (angles(angles.size() - 1) - angles(0));
        for (Eigen::Index i = 0; i + 1 < angles.size(); ++i) {
            max_gap = std::max(max_gap, angles(i + 1) - angles(i));
        }
        const double arc = 2.0 * kPi - max_gap;
        trial.b24_lhs = 2.0 * std::sin(0.25 * arc);
        trial.b24_rhs = std::sqrt(2.0) * std::sqrt(gap);
        trial.b24_ok = trial.b24_lhs >= trial.b24_rhs - 1e-12;

        if (!trial.bound_ok) { ++rep.violations; }
        if (!trial.b24_ok) { ++rep.b24_violations; }
        if ((!trial.bound_ok || !trial.b24_ok) && !rep.offending_pulse) { rep.offending_pulse = pulse; }
        if (gap > 1e-12) { rep.min_ratio = std::min(rep.min_ratio, infid_h / gap); }
        rep.per_trial.push_back(trial);
    }
    return rep;
}

auto gauge_orbits(const HoneycombLattice& lat) -> GaugeOrbitReport {
    const int L = static_cast<int>(lat.links.size());
    if (L > 24) {
        throw ResourceGuardError("gauge_orbits: " + std::to_string(L) + " links exceeds the guard of 24");
    }
    const std::uint32_t total = std::uint32_t{1} << static_cast<unsigned>(L);

    // parity mask per plaquette; a link traversed twice cancels
    std::vector<std::uint32_t> pmask(lat.plaquettes.size(), 0);
    for (std::size_t p = 0; p < lat.plaquettes.size(); ++p) {
        for (const int li : lat.plaquettes[p].links) { pmask[p] ^= std::uint32_t{1} << static_cast<unsigned>(li); }
    }
    std::vector<std::uint32_t> site_mask(static_cast<std::size_t>(lat.n_sites), 0);
    for (std::size_t li = 0; li < lat.links.size(); ++li) {
        site_mask[static_cast<std::size_t>(lat.links[li].from)] |= std::uint32_t{1} << li;
        site_mask[static_cast<std::size_t>(lat.links[li].to)] |= std::uint32_t{1} << li;
    }
    const auto signature = [&](std::uint32_t u) {
        std::uint32_t sig = 0;
        for (std::size_t p = 0; p < pmask.size(); ++p) {
            if (std::popcount(u & pmask[p]) & 1) { sig |= std::uint32_t{1} << p; }
        }
        return sig;
    };

    std::vector<bool> visited(total, false);
    std::map<std::uint32_t, OrbitClass> classes;
    std::vector<std::uint32_t> stack;
    for (std::uint32_t u = 0; u < total; ++u) {
        if (visited[u]) { continue; }
        stack.assign(1, u);
        visited[u] = true;
        long long size = 0;
        while (!stack.empty()) {
            const std::uint32_t v = stack.back();
            stack.pop_back();
            ++size;
            for (const std::uint32_t m : site_mask) {
                const std::uint32_t w = v ^ m;
                if (!visited[w]) {
                    visited[w] = true;
                    stack.push_back(w);
                }
            }
        }
        const std::uint32_t sig = signature(u);
        auto [it, fresh] = classes.try_emplace(sig);
        if (fresh) {
            it->second.vortex.resize(lat.plaquettes.size());
            for (std::size_t p = 0; p < lat.plaquettes.size(); ++p) {
                it->second.vortex[p] = (sig >> p) & 1u ? -1 : 1;
            }
        }
        it->second.fiber_size += size;
        it->second.orbit_sizes.push_back(size);
    }

    GaugeOrbitReport rep;
    for (auto& [sig, cl] : classes) {
        std::sort(cl.orbit_sizes.begin(), cl.orbit_sizes.end());
        rep.total += cl.fiber_size;
        rep.classes.push_back(std::move(cl));
    }
    return rep;
}

}  // namespace kitaev::oracle
