#pragma once

#include <cstdint>
#include <vector>

#include "gksl/fourvec.hpp"
#include "gksl/loop_value.hpp"
#include "gksl/params.hpp"

namespace gksl::prob {

// Two-branch superposition of incident pairs: (q, -q) and (qbar, -qbar) with
// relative phase delta. The branches must be orthogonal (q . qbar = 0) and of
// equal magnitude.
struct SuperposedPairState {
    Vec3 q;
    Vec3 qbar;
    double delta{0.0};

    void validate() const;  // throws std::invalid_argument
};

// Finite stand-ins for the squared momentum-conservation deltas.
// delta4_zero regulates delta^4(0), delta3_zero regulates delta^3(0) (the
// latter enters the two-branch normalization N = 2 * delta3_zero^2).
struct Regulators {
    double delta4_zero{1.0};
    double delta3_zero{1.0};

    // Box dictionary: delta^3(0) = (L/2pi)^3, delta^4(0) = (L/2pi)^3 T/(2pi).
    static Regulators from_box(double box_length, double t_eff);
    // The bare spacetime-volume identification delta^4(0) = V*T with
    // delta^3(0) = V.
    static Regulators vt_literal(double volume, double time);
};

enum class KernelRoute { cm_quadrature, monte_carlo };

// Vacuum-transition probability of the superposed pair state: the
// annihilation kernel summed over the 16 boson-symmetrized branch
// combinations, cross terms weighted by cos(delta), squared deltas replaced
// by the regulators. The kernel route is the CM angular quadrature by
// default; the Monte Carlo route exercises the general-frame kernel.
LoopValue annihilation_probability(const SuperposedPairState& state, const ModelParams& params,
                                   const Regulators& regs,
                                   KernelRoute route = KernelRoute::cm_quadrature);

// Closed-form dimensionless m_E^2 sigma at x = sqrt(-s)/(2 m_E). Zero for
// x <= 1. The log arguments are evaluated via 1 - sqrt(a) = (1-a)/(1+sqrt(a))
// so the a -> 1 corner stays finite.
double sigma_closed(double x, double delta, const ModelParams& params);

// Kernel-route value of the same dimensionless quantity; the state
// normalization and the V*T regulator cancel by construction.
LoopValue sigma_numeric(double x, double delta, const ModelParams& params,
                        KernelRoute route = KernelRoute::cm_quadrature);

struct ScanRow {
    double x;
    double delta;
    double sigma_closed;
    double sigma_numeric;
    double numeric_error;
};

// Rows for each (x, delta) on a uniform x grid, computed in parallel with
// deterministic per-row seeding; row order is (x index major, delta index
// minor).
std::vector<ScanRow> sigma_scan(double x_min, double x_max, int steps,
                                const std::vector<double>& deltas, const ModelParams& params,
                                KernelRoute route = KernelRoute::monte_carlo);

}  // namespace gksl::prob
