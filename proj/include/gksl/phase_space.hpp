#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>

#include "gksl/fourvec.hpp"
#include "gksl/loop_value.hpp"

namespace gksl::ps {

// Integrand evaluated on batches of final-state momentum pairs.
using BatchIntegrand = std::function<void(std::span<const FourVector> k1,
                                          std::span<const FourVector> k2,
                                          std::span<std::complex<double>> out)>;

// Monte Carlo estimate of
//   int d3k1 d3k2 / (E1 E2) delta^4(total - k1 - k2) h(k1, k2)
// by uniform sampling of the CM solid angle: back-to-back on-shell momenta are
// built in the CM frame, boosted to the frame of `total`, and weighted by the
// exact measure 2*pi*sqrt(E*^2 - 4 m^2)/E*. Below threshold (-total^2 < 4 m^2)
// the result is exactly 0 with zero error.
//
// Samples are drawn in fixed-size blocks seeded as hash(seed, block_index) and
// combined in block order, so the result is bit-reproducible and independent
// of the worker count.
LoopValue phase_space_2body(const FourVector& total, double m, const BatchIntegrand& h,
                            std::uint64_t n_samples, std::uint64_t seed);

// Scalar-integrand convenience overload.
LoopValue phase_space_2body(const FourVector& total, double m,
                            const std::function<std::complex<double>(const FourVector&,
                                                                     const FourVector&)>& h,
                            std::uint64_t n_samples, std::uint64_t seed);

// The exact angular measure 2*pi*sqrt(E*^2 - 4 m^2)/E*, zero below threshold.
// e_star_sq = -square(total).
double two_body_measure(double e_star_sq, double m);

}  // namespace gksl::ps
