#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "gksl/kernels.hpp"
#include "gksl/rng.hpp"

using namespace gksl;
using cplx = std::complex<double>;

namespace {

std::vector<double> random_denominators(SplitMix64& rng, std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = 4.0 * rng.next_double() - 2.0;  // crosses zero
    return v;
}

}  // namespace

TEST_CASE("propagator product: scalar and AVX2 variants agree") {
    if (!kernels::cpu_has_avx2()) return;  // nothing to compare on this host
    SplitMix64 rng(3);
    for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 1001u}) {
        const auto d2a = random_denominators(rng, n);
        const auto d2b = random_denominators(rng, n);
        const auto db2a = random_denominators(rng, n);
        const auto db2b = random_denominators(rng, n);
        for (double eps : {1e-1, 1e-3}) {
            std::vector<cplx> ref(n), vec(n);
            kernels::detail::propagator_product_scalar(d2a.data(), d2b.data(), db2a.data(),
                                                       db2b.data(), n, eps, ref.data());
            kernels::detail::propagator_product_avx2(d2a.data(), d2b.data(), db2a.data(),
                                                     db2b.data(), n, eps, vec.data());
            for (std::size_t i = 0; i < n; ++i) {
                const double scale = std::abs(ref[i]) + 1.0;
                CHECK(std::abs(ref[i] - vec[i]) <= 5e-13 * scale);
            }
        }
    }
}

TEST_CASE("box denominator sum: scalar and AVX2 variants agree") {
    if (!kernels::cpu_has_avx2()) return;
    SplitMix64 rng(5);
    for (std::size_t n : {2u, 4u, 5u, 50u, 333u}) {
        std::vector<double> z1(n), z2(n), z3(n);
        for (std::size_t i = 0; i < n; ++i) {
            // random barycentric point
            double a = rng.next_double(), b = rng.next_double(), c = rng.next_double();
            const double s = a + b + c + rng.next_double();
            z1[i] = a / s;
            z2[i] = b / s;
            z3[i] = c / s;
        }
        std::vector<cplx> ref(n), vec(n);
        kernels::detail::box_denominator_sum_scalar(z1.data(), z2.data(), z3.data(), n, 0.04, 1.0,
                                                    -6.0, 2.0, 3.84, 0.0125, ref.data());
        kernels::detail::box_denominator_sum_avx2(z1.data(), z2.data(), z3.data(), n, 0.04, 1.0,
                                                  -6.0, 2.0, 3.84, 0.0125, vec.data());
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::abs(ref[i] - vec[i]) <= 5e-13 * (std::abs(ref[i]) + 1.0));
    }
}

TEST_CASE("scalar kernel matches direct complex arithmetic") {
    SplitMix64 rng(9);
    const std::size_t n = 64;
    const auto d2a = random_denominators(rng, n);
    const auto d2b = random_denominators(rng, n);
    const auto db2a = random_denominators(rng, n);
    const auto db2b = random_denominators(rng, n);
    const double eps = 0.05;
    std::vector<cplx> got(n);
    kernels::detail::propagator_product_scalar(d2a.data(), d2b.data(), db2a.data(), db2b.data(),
                                               n, eps, got.data());
    for (std::size_t i = 0; i < n; ++i) {
        const cplx s = 1.0 / cplx(d2a[i], -eps) + 1.0 / cplx(d2b[i], -eps);
        const cplx t = 1.0 / cplx(db2a[i], -eps) + 1.0 / cplx(db2b[i], -eps);
        const cplx want = s * std::conj(t);
        CHECK(std::abs(got[i] - want) <= 1e-13 * (std::abs(want) + 1.0));
    }
}

TEST_CASE("dispatch reports a valid ISA") {
    const auto isa = kernels::active_isa();
    CHECK((isa == kernels::Isa::scalar || isa == kernels::Isa::avx2));
    CHECK(kernels::isa_name(isa) != nullptr);
}
