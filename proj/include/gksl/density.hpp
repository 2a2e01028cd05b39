#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace gksl {

// Hermitian, unit-trace, (numerically) positive-semidefinite state matrix.
// Construction validates: Hermitian to 1e-12, trace 1 to 1e-12, eigenvalues
// >= -1e-10 (all relative to the unit trace scale).
class DensityMatrix {
public:
    static DensityMatrix make(Eigen::MatrixXcd m);

    // Pure state from (not necessarily normalized) amplitudes.
    static DensityMatrix pure(const Eigen::VectorXcd& amplitudes);

    // Random full-rank state: G G^dagger / tr from a deterministic Gaussian.
    static DensityMatrix random(std::size_t dim, std::uint64_t seed);

    const Eigen::MatrixXcd& matrix() const { return rho_; }
    Eigen::Index dim() const { return rho_.rows(); }
    double purity() const { return (rho_ * rho_).trace().real(); }

    // Hermitizes, renormalizes the trace, and skips the eigenvalue floor
    // check; used by the evolution step, which tracks the floor itself.
    static DensityMatrix unchecked_normalized(Eigen::MatrixXcd m);

private:
    explicit DensityMatrix(Eigen::MatrixXcd m) : rho_(std::move(m)) {}
    Eigen::MatrixXcd rho_;
};

}  // namespace gksl
