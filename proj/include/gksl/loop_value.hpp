#pragma once

#include <complex>

namespace gksl {

// Complex value with an absolute error estimate, returned by every integrator.
// `converged` is false when a subdivision/sample budget ran out or an
// extrapolation failed to settle; the value is still the best estimate.
struct LoopValue {
    std::complex<double> value{0.0, 0.0};
    double abs_error{0.0};
    bool converged{true};
};

}  // namespace gksl
