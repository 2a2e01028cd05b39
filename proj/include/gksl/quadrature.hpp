#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "gksl/loop_value.hpp"

namespace gksl::quad {

// ---------------------------------------------------------------------------
// Gauss-Legendre nodes/weights on [-1, 1], computed by Newton iteration and
// cached per order.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_legendre(int n);

// ---------------------------------------------------------------------------
// Adaptive 1D integration with nested Gauss rules on an interval heap.
LoopValue integrate_1d(const std::function<std::complex<double>(double)>& f,
                       double a, double b, double tol_rel,
                       std::size_t max_intervals = 20000);

// ---------------------------------------------------------------------------
// Sub-simplex of {z_i >= 0, sum z_i = 1} given by 4 barycentric corner points.
struct SimplexRegion {
    std::array<std::array<double, 4>, 4> vertices;

    static SimplexRegion standard();
    // Volume of the region in the (z1, z2, z3) embedding; the standard
    // 3-simplex has volume 1/6.
    double volume() const;
    std::pair<SimplexRegion, SimplexRegion> split_longest_edge() const;
};

// Batched integrand over barycentric points: fills out[i] = f(z1,z2,z3,z4)
// with z4 = 1 - z1 - z2 - z3 implied.
using SimplexBatchFn = std::function<void(const double* z1, const double* z2, const double* z3,
                                          std::size_t n, std::complex<double>* out)>;

struct SimplexOptions {
    double tol_rel{1e-8};
    std::size_t max_regions{400000};
};

// Integral of f over the 3-simplex (the delta(1 - sum z) already consumed:
// three free parameters, the fourth determined). Flags non-convergence when
// the subdivision budget runs out; throws on NaN from the integrand, naming
// the sample point.
LoopValue integrate_simplex(const SimplexBatchFn& f, const SimplexOptions& opt);
LoopValue integrate_simplex(const SimplexBatchFn& f, double tol_rel);

// Scalar-integrand convenience wrapper. Tiny negative z4 (>= -1e-14) from
// rounding is clamped to 0 before the call.
LoopValue integrate_simplex_fn(
    const std::function<std::complex<double>(double, double, double, double)>& f,
    double tol_rel);

// ---------------------------------------------------------------------------
// Adaptive 2D integration over an axis-aligned rectangle with a batched
// integrand (used by the reduced one-loop path).
using Rect2DBatchFn = std::function<void(const double* x, const double* y, std::size_t n,
                                         std::complex<double>* out)>;

struct Rect2DOptions {
    double tol_rel{1e-9};
    std::size_t max_regions{400000};
};

LoopValue integrate_rect2d(const Rect2DBatchFn& f, double x0, double x1, double y0, double y1,
                           const Rect2DOptions& opt);

// ---------------------------------------------------------------------------
// Richardson-style polynomial extrapolation of g(eps) to eps -> 0+.
//
// even_real: extrapolate the real part in eps^2. Valid when g comes from a
// causal-regulator integrand, where g(-eps) = conj(g(eps)) makes Re g even.
struct ExtrapolationOptions {
    bool even_real{false};
};

LoopValue extrapolate_eps(const std::function<LoopValue(double)>& g,
                          std::span<const double> schedule,
                          const ExtrapolationOptions& opt = {});

}  // namespace gksl::quad
