// Data-parallel inner kernels with scalar reference implementations and AVX2
// variants selected at runtime. Selection: GKSL_SIMD=scalar|avx2|auto
// (default auto -> AVX2 when the CPU supports it). For a fixed selection the
// accumulation order is fixed, so results are bit-reproducible.

#pragma once

#include <complex>
#include <cstddef>

namespace gksl::kernels {

enum class Isa { scalar, avx2 };

Isa active_isa();
const char* isa_name(Isa isa);
bool cpu_has_avx2();

// out[i] = S(d2a[i], d2b[i]) * conj(S(db2a[i], db2b[i])) where
// S(x, y) = 1/(x - i eps) + 1/(y - i eps).
// The d-arrays are the real propagator denominators q^2 + m^2 evaluated by the
// caller; this kernel does only the complex arithmetic.
void propagator_product(const double* d2a, const double* d2b,
                        const double* db2a, const double* db2b,
                        std::size_t n, double eps, std::complex<double>* out);

// out[i] = sum_{j=1..3} 1/(M_j^2 - i eps)^2 at the barycentric point
// (z1, z2, z3, z4 = 1 - z1 - z2 - z3) with
//   M_1^2 = base + z2 z3 t + z1 z4 u
//   M_2^2 = base + z2 z3 t + z1 z4 s
//   M_3^2 = base + z2 z3 s + z1 z4 u
//   base  = me2 - (z1 + z4)(z2 + z3) ms2.
void box_denominator_sum(const double* z1, const double* z2, const double* z3,
                         std::size_t n, double ms2, double me2,
                         double s, double t, double u, double eps,
                         std::complex<double>* out);

namespace detail {
// Reference implementations, exposed for equivalence tests.
void propagator_product_scalar(const double*, const double*, const double*, const double*,
                               std::size_t, double, std::complex<double>*);
void box_denominator_sum_scalar(const double*, const double*, const double*,
                                std::size_t, double, double, double, double, double, double,
                                std::complex<double>*);
void propagator_product_avx2(const double*, const double*, const double*, const double*,
                             std::size_t, double, std::complex<double>*);
void box_denominator_sum_avx2(const double*, const double*, const double*,
                              std::size_t, double, double, double, double, double, double,
                              std::complex<double>*);
}  // namespace detail

}  // namespace gksl::kernels
