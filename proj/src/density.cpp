#include "gksl/density.hpp"

#include <stdexcept>

#include "gksl/rng.hpp"

namespace gksl {

DensityMatrix DensityMatrix::make(Eigen::MatrixXcd m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("DensityMatrix: matrix must be square");
    const double herm_dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm_dev > 1e-12)
        throw std::invalid_argument("DensityMatrix: not Hermitian within 1e-12");
    if (std::abs(m.trace().real() - 1.0) > 1e-12 || std::abs(m.trace().imag()) > 1e-12)
        throw std::invalid_argument("DensityMatrix: trace must be 1 within 1e-12");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw std::invalid_argument("DensityMatrix: negative eigenvalue beyond -1e-10");
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& amplitudes) {
    const double norm = amplitudes.norm();
    if (norm == 0.0) throw std::invalid_argument("DensityMatrix: zero state vector");
    Eigen::VectorXcd psi = amplitudes / norm;
    Eigen::MatrixXcd rho = psi * psi.adjoint();
    rho = 0.5 * (rho + rho.adjoint().eval());
    rho /= rho.trace().real();
    return DensityMatrix(std::move(rho));
}

DensityMatrix DensityMatrix::random(std::size_t dim, std::uint64_t seed) {
    SplitMix64 rng(seed);
    auto gauss = [&rng] {
        // Box-Muller from the deterministic stream
        const double u1 = std::max(rng.next_double(), 1e-300);
        const double u2 = rng.next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.28318530717958647692 * u2);
    };
    Eigen::MatrixXcd g(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) g(i, j) = std::complex<double>(gauss(), gauss());
    Eigen::MatrixXcd rho = g * g.adjoint();
    rho = 0.5 * (rho + rho.adjoint().eval());
    rho /= rho.trace().real();
    return DensityMatrix(std::move(rho));
}

DensityMatrix DensityMatrix::unchecked_normalized(Eigen::MatrixXcd m) {
    Eigen::MatrixXcd h = 0.5 * (m + m.adjoint().eval());
    const double tr = h.trace().real();
    if (tr != 0.0) h /= tr;
    return DensityMatrix(std::move(h));
}

}  // namespace gksl
