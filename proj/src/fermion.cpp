#include "kitaev/fermion.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace kitaev {

namespace {

using Cplx = std::complex<double>;

auto check_sector(const HoneycombLattice& lat, const LinkSector& sector) -> void {
    if (sector.u.size() != lat.links.size()) {
        throw std::invalid_argument("link sector does not cover every link");
    }
    for (const int v : sector.u) {
        if (v != 1 && v != -1) { throw std::invalid_argument("link sector values must be +-1"); }
    }
}

// A(f) in a given sector. Nearest-neighbour entries carry J * u on the
// stored orientation. Each triple (a, m, b) contributes K * u_{a->m} * u_{b->m}
// to A[a, b]: both mediating link values are read in the direction pointing
// into the middle site, which is the sign convention pinned by the spin
// oracle equivalence tests.
auto assemble(const HoneycombLattice& lat, const LinkSector& sector, const ModelParams& params, int flip,
              double f) -> Eigen::MatrixXd {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(lat.n_sites, lat.n_sites);
    for (std::size_t li = 0; li < lat.links.size(); ++li) {
        const auto&  l = lat.links[li];
        const double coef = params.J * (static_cast<int>(li) == flip ? 1.0 - 2.0 * f : 1.0);
        const double v = coef * sector.u[li];
        A(l.from, l.to) += v;
        A(l.to, l.from) -= v;
    }
    for (const auto& t : lat.triples) {
        const auto& l1 = lat.links[static_cast<std::size_t>(t.link_left)];
        const auto& l2 = lat.links[static_cast<std::size_t>(t.link_right)];
        const double s1 = (l1.from == t.left && l1.to == t.middle) ? 1.0 : -1.0;
        const double s2 = (l2.from == t.middle && l2.to == t.right) ? -1.0 : 1.0;
        double coef = params.K;
        if (t.link_left == flip) { coef *= 1.0 - 2.0 * f; }
        if (t.link_right == flip) { coef *= 1.0 - 2.0 * f; }
        const double v = coef * s1 * sector.u[static_cast<std::size_t>(t.link_left)] * s2 *
                         sector.u[static_cast<std::size_t>(t.link_right)];
        A(t.left, t.right) += v;
        A(t.right, t.left) -= v;
    }
    return A;
}

// Eigendecomposition of the Hermitian matrix iA; eigenvalues come in +-e
// pairs and the quasiparticle energies are omega = 2e for e > 0.
auto positive_eigs(const Eigen::MatrixXd& A) -> Eigen::VectorXd {
    const int n = static_cast<int>(A.rows());
    Eigen::MatrixXcd H = Cplx(0.0, 1.0) * A.cast<Cplx>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
    return es.eigenvalues().tail(n / 2);
}

}  // namespace

auto trivial_gauge(const HoneycombLattice& lat) -> LinkSector {
    return {std::vector<int>(lat.links.size(), 1)};
}

auto vortex_sector(const HoneycombLattice& lat, const LinkSector& sector) -> VortexSector {
    check_sector(lat, sector);
    VortexSector w;
    w.w.reserve(lat.plaquettes.size());
    for (const auto& p : lat.plaquettes) {
        int prod = 1;
        for (const int li : p.links) { prod *= sector.u[static_cast<std::size_t>(li)]; }
        w.w.push_back(prod);
    }
    return w;
}

auto coupling_matrix(const HoneycombLattice& lat, const LinkSector& sector, const ModelParams& params)
    -> Eigen::MatrixXd {
    check_sector(lat, sector);
    return assemble(lat, sector, params, -1, 0.0);
}

auto assemble_coupling(const HoneycombLattice& lat, const LinkSector& sector, const ModelParams& params,
                       int flipped_link) -> CouplingModel {
    check_sector(lat, sector);
    if (flipped_link < 0 || flipped_link >= static_cast<int>(lat.links.size())) {
        throw std::invalid_argument("assemble_coupling: link not in lattice");
    }
    CouplingModel m;
    m.A0 = assemble(lat, sector, params, flipped_link, 0.0);
    m.Ac = assemble(lat, sector, params, flipped_link, 1.0) - m.A0;
    m.flipped_link = flipped_link;
    m.params = params;
    return m;
}

auto spectrum(const CouplingModel& model, double f) -> std::vector<double> {
    const Eigen::VectorXd e = positive_eigs(model.A(f));
    std::vector<double> out(static_cast<std::size_t>(e.size()));
    for (int i = 0; i < e.size(); ++i) { out[static_cast<std::size_t>(i)] = 2.0 * e(i); }
    return out;
}

auto ground_energy(const CouplingModel& model, double f) -> double {
    return -positive_eigs(model.A(f)).sum();
}

auto vortex_gap(const HoneycombLattice& lat, int flipped_link, const ModelParams& params) -> double {
    const CouplingModel m = assemble_coupling(lat, trivial_gauge(lat), params, flipped_link);
    return std::abs(ground_energy(m, 1.0) - ground_energy(m, 0.0));
}

auto fermionic_gap(const CouplingModel& model, double f) -> double {
    return positive_eigs(model.A(f))(0) * 2.0;
}

auto ground_covariance(const CouplingModel& model, double f) -> Eigen::MatrixXd {
    Eigen::MatrixXcd H = Cplx(0.0, 1.0) * model.A(f).cast<Cplx>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    Eigen::VectorXd sgn = es.eigenvalues().unaryExpr([](double e) { return e > 0.0 ? 1.0 : (e < 0.0 ? -1.0 : 0.0); });
    const Eigen::MatrixXcd G =
        Cplx(0.0, 1.0) * es.eigenvectors() * sgn.asDiagonal().toDenseMatrix().cast<Cplx>() * es.eigenvectors().adjoint();
    return G.real();
}

}  // namespace kitaev
