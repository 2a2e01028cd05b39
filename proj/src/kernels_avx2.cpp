// AVX2 variants of the inner kernels. Only reached through the dispatcher
// after a cpuid check, so target attributes are safe without -mavx2 globally.

#include "gksl/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>

#define GKSL_AVX2_FN __attribute__((target("avx2,fma")))

namespace gksl::kernels::detail {

GKSL_AVX2_FN
void propagator_product_avx2(const double* d2a, const double* d2b,
                             const double* db2a, const double* db2b,
                             std::size_t n, double eps, std::complex<double>* out) {
    const __m256d veps = _mm256_set1_pd(eps);
    const __m256d veps2 = _mm256_set1_pd(eps * eps);
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xa = _mm256_loadu_pd(d2a + i);
        const __m256d xb = _mm256_loadu_pd(d2b + i);
        const __m256d ya = _mm256_loadu_pd(db2a + i);
        const __m256d yb = _mm256_loadu_pd(db2b + i);
        const __m256d ia = _mm256_div_pd(one, _mm256_fmadd_pd(xa, xa, veps2));
        const __m256d ib = _mm256_div_pd(one, _mm256_fmadd_pd(xb, xb, veps2));
        const __m256d ja = _mm256_div_pd(one, _mm256_fmadd_pd(ya, ya, veps2));
        const __m256d jb = _mm256_div_pd(one, _mm256_fmadd_pd(yb, yb, veps2));
        const __m256d s_re = _mm256_fmadd_pd(xa, ia, _mm256_mul_pd(xb, ib));
        const __m256d s_im = _mm256_mul_pd(veps, _mm256_add_pd(ia, ib));
        const __m256d t_re = _mm256_fmadd_pd(ya, ja, _mm256_mul_pd(yb, jb));
        const __m256d t_im = _mm256_mul_pd(veps, _mm256_add_pd(ja, jb));
        const __m256d o_re = _mm256_fmadd_pd(s_re, t_re, _mm256_mul_pd(s_im, t_im));
        const __m256d o_im = _mm256_fmsub_pd(s_im, t_re, _mm256_mul_pd(s_re, t_im));
        // interleave (re, im) pairs back into AoS complex layout
        const __m256d lo = _mm256_unpacklo_pd(o_re, o_im);
        const __m256d hi = _mm256_unpackhi_pd(o_re, o_im);
        double* dst = reinterpret_cast<double*>(out + i);
        _mm256_storeu_pd(dst, _mm256_permute2f128_pd(lo, hi, 0x20));
        _mm256_storeu_pd(dst + 4, _mm256_permute2f128_pd(lo, hi, 0x31));
    }
    if (i < n) propagator_product_scalar(d2a + i, d2b + i, db2a + i, db2b + i, n - i, eps, out + i);
}

GKSL_AVX2_FN
void box_denominator_sum_avx2(const double* z1, const double* z2, const double* z3,
                              std::size_t n, double ms2, double me2,
                              double s, double t, double u, double eps,
                              std::complex<double>* out) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d vms2 = _mm256_set1_pd(ms2);
    const __m256d vme2 = _mm256_set1_pd(me2);
    const __m256d vs = _mm256_set1_pd(s);
    const __m256d vt = _mm256_set1_pd(t);
    const __m256d vu = _mm256_set1_pd(u);
    const __m256d veps = _mm256_set1_pd(eps);
    const __m256d veps2 = _mm256_set1_pd(eps * eps);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(z1 + i);
        const __m256d b = _mm256_loadu_pd(z2 + i);
        const __m256d c = _mm256_loadu_pd(z3 + i);
        const __m256d d = _mm256_sub_pd(_mm256_sub_pd(_mm256_sub_pd(one, a), b), c);
        const __m256d base = _mm256_fnmadd_pd(
            _mm256_mul_pd(_mm256_add_pd(a, d), _mm256_add_pd(b, c)), vms2, vme2);
        const __m256d bc = _mm256_mul_pd(b, c);
        const __m256d ad = _mm256_mul_pd(a, d);
        const __m256d m1 = _mm256_fmadd_pd(ad, vu, _mm256_fmadd_pd(bc, vt, base));
        const __m256d m2 = _mm256_fmadd_pd(ad, vs, _mm256_fmadd_pd(bc, vt, base));
        const __m256d m3 = _mm256_fmadd_pd(ad, vu, _mm256_fmadd_pd(bc, vs, base));
        __m256d acc_re = _mm256_setzero_pd();
        __m256d acc_im = _mm256_setzero_pd();
        for (const __m256d m : {m1, m2, m3}) {
            const __m256d inv = _mm256_div_pd(one, _mm256_fmadd_pd(m, m, veps2));
            const __m256d w_re = _mm256_mul_pd(m, inv);
            const __m256d w_im = _mm256_mul_pd(veps, inv);
            acc_re = _mm256_add_pd(
                acc_re, _mm256_fmsub_pd(w_re, w_re, _mm256_mul_pd(w_im, w_im)));
            acc_im = _mm256_fmadd_pd(two, _mm256_mul_pd(w_re, w_im), acc_im);
        }
        const __m256d lo = _mm256_unpacklo_pd(acc_re, acc_im);
        const __m256d hi = _mm256_unpackhi_pd(acc_re, acc_im);
        double* dst = reinterpret_cast<double*>(out + i);
        _mm256_storeu_pd(dst, _mm256_permute2f128_pd(lo, hi, 0x20));
        _mm256_storeu_pd(dst + 4, _mm256_permute2f128_pd(lo, hi, 0x31));
    }
    if (i < n)
        box_denominator_sum_scalar(z1 + i, z2 + i, z3 + i, n - i, ms2, me2, s, t, u, eps, out + i);
}

}  // namespace gksl::kernels::detail

#else  // non-x86: AVX2 variants fall back to the scalar reference

namespace gksl::kernels::detail {

void propagator_product_avx2(const double* d2a, const double* d2b,
                             const double* db2a, const double* db2b,
                             std::size_t n, double eps, std::complex<double>* out) {
    propagator_product_scalar(d2a, d2b, db2a, db2b, n, eps, out);
}

void box_denominator_sum_avx2(const double* z1, const double* z2, const double* z3,
                              std::size_t n, double ms2, double me2,
                              double s, double t, double u, double eps,
                              std::complex<double>* out) {
    box_denominator_sum_scalar(z1, z2, z3, n, ms2, me2, s, t, u, eps, out);
}

}  // namespace gksl::kernels::detail

#endif
