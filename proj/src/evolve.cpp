#include "kitaev/evolve.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace kitaev {

namespace {
using Cplx = std::complex<double>;
}

auto Pulse::linear_ramp(double duration, int n_segments) -> Pulse {
    if (n_segments < 1 || duration <= 0.0) {
        throw std::invalid_argument("linear_ramp: need duration > 0 and n_segments >= 1");
    }
    Pulse p;
    p.duration = duration;
    p.values.resize(static_cast<std::size_t>(n_segments));
    for (int k = 0; k < n_segments; ++k) {
        p.values[static_cast<std::size_t>(k)] = (k + 0.5) / static_cast<double>(n_segments);
    }
    return p;
}

auto Propagator::orthogonality_defect() const -> double {
    return (O.transpose() * O - Eigen::MatrixXd::Identity(O.rows(), O.cols())).norm();
}

auto segment_eig(const Eigen::MatrixXd& G, double dt) -> SegmentEig {
    SegmentEig s;
    const Eigen::MatrixXcd H = Cplx(0.0, 1.0) * G.cast<Cplx>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    s.theta = -dt * es.eigenvalues();
    s.V = es.eigenvectors();
    Eigen::VectorXcd phase(s.theta.size());
    for (int i = 0; i < s.theta.size(); ++i) { phase(i) = std::exp(Cplx(0.0, s.theta(i))); }
    s.O = (s.V * phase.asDiagonal() * s.V.adjoint()).real();
    return s;
}

auto segment_step(const CouplingModel& model, double f, double dt) -> Propagator {
    if (dt < 0.0) { throw std::invalid_argument("segment_step: dt must be >= 0"); }
    Propagator p;
    p.pulse = Pulse{dt, {f}};
    if (dt == 0.0) {
        p.O = Eigen::MatrixXd::Identity(model.n_sites(), model.n_sites());
        return p;
    }
    p.O = segment_eig(model.generator(f), dt).O;
    return p;
}

auto propagate(const CouplingModel& model, const Pulse& pulse) -> Propagator {
    if (pulse.n_segments() < 1 || pulse.duration <= 0.0) {
        throw std::invalid_argument("propagate: need duration > 0 and n_segments >= 1");
    }
    const double dt = pulse.dt();
    Propagator p;
    p.pulse = pulse;
    p.O = Eigen::MatrixXd::Identity(model.n_sites(), model.n_sites());
    for (const double f : pulse.values) { p.O = segment_eig(model.generator(f), dt).O * p.O; }
    return p;
}

auto adiabatic_target(const CouplingModel& model, double T_ad, int n_segments, double tolerance)
    -> Propagator {
    if (T_ad <= 0.0) { throw std::invalid_argument("adiabatic_target: T_ad must be > 0"); }
    if (n_segments > 0) { return propagate(model, Pulse::linear_ramp(T_ad, n_segments)); }

    constexpr int cap = 1 << 22;
    int n = 4096;
    Propagator prev = propagate(model, Pulse::linear_ramp(T_ad, n));
    while (true) {
        n *= 2;
        if (n > cap) {
            throw std::runtime_error("adiabatic_target: no convergence below tolerance " +
                                     std::to_string(tolerance) + " within " + std::to_string(cap) +
                                     " segments (T_ad = " + std::to_string(T_ad) + ")");
        }
        Propagator next = propagate(model, Pulse::linear_ramp(T_ad, n));
        if ((next.O - prev.O).norm() < tolerance) { return next; }
        prev = std::move(next);
    }
}

auto heisenberg_fidelity(const Eigen::MatrixXd& target, const Eigen::MatrixXd& actual) -> double {
    if (target.rows() != actual.rows() || target.cols() != actual.cols()) {
        throw std::invalid_argument("heisenberg_fidelity: dimension mismatch");
    }
    const double n = static_cast<double>(target.rows());
    const double z = n + (target.transpose() * actual).trace();
    return std::abs(z) / (2.0 * n);
}

auto heisenberg_fidelity(const Propagator& target, const Propagator& actual) -> double {
    return heisenberg_fidelity(target.O, actual.O);
}

}  // namespace kitaev
