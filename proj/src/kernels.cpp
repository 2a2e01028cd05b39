#include "gksl/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace gksl::kernels {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa active_isa() {
    static const Isa isa = [] {
        const char* env = std::getenv("GKSL_SIMD");
        if (env) {
            if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
            if (std::strcmp(env, "avx2") == 0)
                return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
        }
        return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
    }();
    return isa;
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void propagator_product(const double* d2a, const double* d2b,
                        const double* db2a, const double* db2b,
                        std::size_t n, double eps, std::complex<double>* out) {
    if (active_isa() == Isa::avx2)
        detail::propagator_product_avx2(d2a, d2b, db2a, db2b, n, eps, out);
    else
        detail::propagator_product_scalar(d2a, d2b, db2a, db2b, n, eps, out);
}

void box_denominator_sum(const double* z1, const double* z2, const double* z3,
                         std::size_t n, double ms2, double me2,
                         double s, double t, double u, double eps,
                         std::complex<double>* out) {
    if (active_isa() == Isa::avx2)
        detail::box_denominator_sum_avx2(z1, z2, z3, n, ms2, me2, s, t, u, eps, out);
    else
        detail::box_denominator_sum_scalar(z1, z2, z3, n, ms2, me2, s, t, u, eps, out);
}

}  // namespace gksl::kernels
