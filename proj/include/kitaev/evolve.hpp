#pragma once

#include <vector>

#include <Eigen/Dense>

#include "kitaev/fermion.hpp"

namespace kitaev {

/// Piecewise-constant ramp: n equal segments of length duration / n with
/// value values[k] on segment k.
struct Pulse {
    double              duration = 0.0;
    std::vector<double> values;

    auto n_segments() const -> int { return static_cast<int>(values.size()); }
    auto dt() const -> double { return duration / static_cast<double>(values.size()); }

    /// Midpoint sampling of f(t) = t / T: values[k] = (k + 1/2) / n, so the
    /// n -> infinity limit is the exact linear ramp.
    static auto linear_ramp(double duration, int n_segments) -> Pulse;
};

/// Heisenberg-picture propagator of the dynamical Majorana block. The frozen
/// block is never materialized; fidelities account for it analytically.
struct Propagator {
    Eigen::MatrixXd O;
    Pulse           pulse;  ///< provenance

    auto n() const -> int { return static_cast<int>(O.rows()); }
    /// Frobenius defect of orthogonality, ||O^T O - 1||_F.
    auto orthogonality_defect() const -> double;
};

/// Spectral data of one constant-f segment: exp(dt * G) = V e^{i theta} V^dag
/// with theta = -dt * eigenvalues of the Hermitian matrix iG. Shared with the
/// exact-gradient rule in the optimizer.
struct SegmentEig {
    Eigen::VectorXd  theta;
    Eigen::MatrixXcd V;
    Eigen::MatrixXd  O;
};

auto segment_eig(const Eigen::MatrixXd& G, double dt) -> SegmentEig;

/// exp(dt * G(f)) for one constant-f segment (dt = 0 gives the identity).
auto segment_step(const CouplingModel& model, double f, double dt) -> Propagator;

/// Time-ordered product O = O_n ... O_1 (later segments act on the left).
auto propagate(const CouplingModel& model, const Pulse& pulse) -> Propagator;

/// Propagator of the linear ramp over T_ad. With n_segments = 0 the segment
/// count is chosen by doubling until one more doubling changes the result by
/// less than `tolerance` in Frobenius norm; throws std::runtime_error if the
/// cap of 2^22 segments is reached first. The midpoint rule converges as
/// 1/n^2, so the returned propagator sits within about tolerance/3 of the
/// exact limit; 1e-8 keeps T_ad = 300 affordable.
auto adiabatic_target(const CouplingModel& model, double T_ad, int n_segments = 0,
                      double tolerance = 1e-8) -> Propagator;

/// F_H = |N + Tr(O_target^T O_actual)| / (2N). The +N is the frozen block's
/// contribution to the full 2N-dimensional trace.
auto heisenberg_fidelity(const Eigen::MatrixXd& target, const Eigen::MatrixXd& actual) -> double;
auto heisenberg_fidelity(const Propagator& target, const Propagator& actual) -> double;

}  // namespace kitaev
