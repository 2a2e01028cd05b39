#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "gksl/density.hpp"
#include "gksl/fock.hpp"
#include "gksl/loop_value.hpp"
#include "gksl/params.hpp"

namespace gksl::lind {

// Discretization dictionary used throughout this module:
//   delta^3(p - pbar) -> (L/2pi)^3 Kronecker, with the (L/2pi)^{3/2} factors
//   absorbed into the mode amplitudes; delta(energy at 0) -> T_eff/(2 pi);
//   energy conservation enforced within a bin dE = 2 pi / T_eff.

enum class KernelSector { one_particle, two_particle };

// Hamiltonian part + Lindblad kernel over one sector of the Fock basis, with
// the spectral data of the kernel cached for applying the generator. The
// kernel must be positive semidefinite: eigenvalues below
// -1e-8 * max eigenvalue are a hard assembly error, eigenvalues below
// 1e-12 * max are dropped from the Lindblad decomposition.
struct GeneratorMatrices {
    KernelSector sector{KernelSector::one_particle};
    std::size_t sector_offset{0};
    std::size_t full_dim{0};

    Eigen::MatrixXcd hamiltonian;      // over sector indices (may be zero)
    Eigen::MatrixXcd lindblad_kernel;  // Gamma over sector indices

    // spectral decomposition of the kernel, small eigenvalues dropped
    Eigen::VectorXd kernel_eigenvalues;
    Eigen::MatrixXcd kernel_vectors;   // columns
    Eigen::MatrixXcd kernel_kept;      // sum_k mu_k chi_k chi_k^dagger

    double min_eigenvalue{0.0};
    double max_eigenvalue{0.0};
};

struct DecayOptions {
    double t_eff{10.0};
    bool use_numeric_rate{false};  // phase-space route instead of the closed form
};

struct PairOptions {
    double t_eff{10.0};
    double loop_tol{1e-5};      // box-coefficient tolerance for Hamiltonian entries
    bool hamiltonian{true};     // include the two-to-two exchange part
    bool dissipator{true};      // include the annihilation kernel
};

// Decay generator: each one-particle mode connects to vacuum with weight
// gamma * (T_eff / 2 pi) / omega_p; Hamiltonian part zero (the one-loop
// self-energy is renormalized away).
GeneratorMatrices assemble_decay(const fock::FockBasis& basis, const ModelParams& params,
                                 const DecayOptions& opt);

// Pair generator on the two-particle sector (requires m_s < 2 m_E): exchange
// Hamiltonian from the imaginary part of the box coefficient and annihilation
// kernel from the pair kernel, both with grid-conserving Kronecker deltas and
// energy matching within dE = 2 pi / T_eff.
GeneratorMatrices assemble_pair(const fock::FockBasis& basis, const ModelParams& params,
                                const PairOptions& opt);

// L[rho] = -i [M, rho] + sum_k mu_k (A_k rho A_k^dag - 1/2 {A_k^dag A_k, rho})
// with A_k = |0><chi_k|. Output is trace-free and Hermitian.
Eigen::MatrixXcd apply_generator(const GeneratorMatrices& gen, const Eigen::MatrixXcd& rho);

struct StepDiagnostics {
    double generator_norm{0.0};      // ||L[rho]||_F
    double min_eigenvalue{0.0};
    double trace_before_renorm{1.0};  // trace of rho + dt L[rho] before cleanup
    bool eigenvalue_warning{false};   // some eigenvalue < -1e-8
};

// Single scattering map rho + dt * L[rho], hermitized and trace-renormalized.
// Enforces the weak-coupling guard ||L[rho]||_F * dt <= 0.1.
DensityMatrix evolve_step(const GeneratorMatrices& gen, const DensityMatrix& rho,
                          double dt_effective, StepDiagnostics* diag = nullptr);

// Unitarity check for the decay sector: compares 2 lambda^2 * (bubble
// absorptive part) at s = -m_s^2 against the final-state sum
// (1/2) Sum_{unordered chi-chi states} |T_beta|^2, the latter evaluated by
// bin-smeared Monte Carlo over d^3 k1 so the estimate converges with samples.
struct SumRuleReport {
    double lhs{0.0}, lhs_error{0.0};
    double rhs{0.0}, rhs_error{0.0};
    double relative_deviation{0.0};
    bool below_threshold{false};
    bool converged{true};
};

SumRuleReport sum_rule_check(const ModelParams& params, std::uint64_t mc_samples,
                             double bin_fraction = 0.02);

}  // namespace gksl::lind
