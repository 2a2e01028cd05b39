#pragma once

#include "gksl/fourvec.hpp"
#include "gksl/loop_value.hpp"
#include "gksl/params.hpp"

namespace gksl::coeff {

// ---------------------------------------------------------------------------
// Decay sector

// Closed-form decay coefficient (lambda^2/m_s) sqrt(m_s^2 - 4 m_E^2) with the
// threshold step; returns 0 at and below threshold.
double decay_rate_closed(const ModelParams& p);

// Phase-space route: (lambda^2 / 4 pi) * int d3k1 d3k2/(E1 E2) delta^4(p-k1-k2),
// Lorentz-invariant in p. The closed form above is exactly twice this value;
// the ratio is measured by an independent brute-force oracle in the test suite
// and both numbers are reported by the CLI.
inline constexpr double kDecayClosedOverPhaseSpaceRatio = 2.0;
LoopValue decay_rate_numeric(const ModelParams& p, const FourVector& momentum);

// ---------------------------------------------------------------------------
// Pair-annihilation kernel

// Incoming pair (p1, p2) and one barred momentum; pbar1 is fixed by
// conservation pbar1 = p1 + p2 - pbar2.
struct PairKernelPoint {
    FourVector p1, p2, pbar2;

    FourVector pbar1() const { return p1 + p2 - pbar2; }

    // All three supplied momenta must be on-shell with mass m_s; the
    // reconstructed pbar1 must be on-shell within `conservation_tol`
    // (relative, on the invariant square). Throws std::invalid_argument.
    void validate(double m_s, double conservation_tol = 1e-9) const;
};

// Monte Carlo route over the two-body phase space of (k1, k2), any frame.
// Evaluated at the two smallest schedule epsilons; a relative spread > 1% is
// flagged non-converged and folded into the error.
LoopValue pair_kernel(const PairKernelPoint& point, const ModelParams& p,
                      double conservation_tol = 1e-9);

// Center-of-mass route: (1/2) sqrt((s+4m_E^2)/s) theta(sqrt(-s)-2m_E) times
// the angular quadrature of the propagator product. Requires the spatial part
// of p1+p2 to vanish to 1e-10 relative.
LoopValue pair_kernel_cm(const PairKernelPoint& point, const ModelParams& p,
                         double conservation_tol = 1e-9);
LoopValue pair_kernel_cm(const PairKernelPoint& point, const ModelParams& p,
                         int n_theta, int n_phi, double conservation_tol);

// ---------------------------------------------------------------------------
// One-loop box coefficient

// i/(4 pi)^2 times the Feynman-parameter sum over the three denominators,
// with the parameter measure normalized so a unit integrand gives 1, and the
// i*eps regulator extrapolated to 0+ over the model's schedule.
LoopValue box_loop(const Mandelstam& m, const ModelParams& p);
LoopValue box_loop(const Mandelstam& m, const ModelParams& p, double tol_rel);

// Imaginary part with propagated error (this is what the two-particle
// Hamiltonian kernel needs).
LoopValue box_loop_im(const Mandelstam& m, const ModelParams& p);
LoopValue box_loop_im(const Mandelstam& m, const ModelParams& p, double tol_rel);

namespace detail {
// Single-epsilon evaluations of the bare parameter integral
// sum_j int_simplex 1/(M_j^2 - i eps)^2 (no i/(4pi)^2, no measure factor).
// The reduced route integrates the closed-form b-integral over (w, a); the
// simplex route drives the generic 3-simplex engine. They are
// equivalence-tested against each other.
LoopValue box_sum_reduced(const Mandelstam& m, const ModelParams& p, double eps, double tol_rel);
LoopValue box_sum_simplex(const Mandelstam& m, const ModelParams& p, double eps, double tol_rel);
}  // namespace detail

// ---------------------------------------------------------------------------
// Bubble absorptive part

// Absorptive part of the one-loop bubble at invariant square s (mostly-plus:
// physical timelike s < 0). Evaluated as a one-parameter Feynman integral of
// the regulated spectral angle, extrapolated in eps; the sign is fixed so the
// unitarity sum rule has a nonnegative right-hand side. Vanishes for
// -s < 4 m_E^2. Limit value: (1/16) sqrt((s + 4 m_E^2)/s).
LoopValue bubble_absorptive(double s, const ModelParams& p);

}  // namespace gksl::coeff
