#include "gksl/kernels.hpp"

namespace gksl::kernels::detail {

void propagator_product_scalar(const double* d2a, const double* d2b,
                               const double* db2a, const double* db2b,
                               std::size_t n, double eps, std::complex<double>* out) {
    for (std::size_t i = 0; i < n; ++i) {
        // 1/(x - i eps) = (x + i eps) / (x^2 + eps^2)
        const double xa = d2a[i], xb = d2b[i];
        const double ya = db2a[i], yb = db2b[i];
        const double ia = 1.0 / (xa * xa + eps * eps);
        const double ib = 1.0 / (xb * xb + eps * eps);
        const double ja = 1.0 / (ya * ya + eps * eps);
        const double jb = 1.0 / (yb * yb + eps * eps);
        const double s_re = xa * ia + xb * ib;
        const double s_im = eps * ia + eps * ib;
        const double t_re = ya * ja + yb * jb;
        const double t_im = eps * ja + eps * jb;
        out[i] = {s_re * t_re + s_im * t_im, s_im * t_re - s_re * t_im};
    }
}

void box_denominator_sum_scalar(const double* z1, const double* z2, const double* z3,
                                std::size_t n, double ms2, double me2,
                                double s, double t, double u, double eps,
                                std::complex<double>* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double a = z1[i], b = z2[i], c = z3[i];
        const double d = 1.0 - a - b - c;
        const double base = me2 - (a + d) * (b + c) * ms2;
        const double bc = b * c, ad = a * d;
        const double m1 = base + bc * t + ad * u;
        const double m2 = base + bc * t + ad * s;
        const double m3 = base + bc * s + ad * u;
        double acc_re = 0.0, acc_im = 0.0;
        for (const double m : {m1, m2, m3}) {
            const double inv = 1.0 / (m * m + eps * eps);
            const double w_re = m * inv;
            const double w_im = eps * inv;
            acc_re += w_re * w_re - w_im * w_im;
            acc_im += 2.0 * w_re * w_im;
        }
        out[i] = {acc_re, acc_im};
    }
}

}  // namespace gksl::kernels::detail
