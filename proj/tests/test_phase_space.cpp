#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "gksl/phase_space.hpp"
#include "gksl/rng.hpp"
#include "oracles.hpp"

using namespace gksl;
using cplx = std::complex<double>;

TEST_CASE("two-body measure against the brute-force grid oracle") {
    // the analytic angular reduction must match an independent smeared-delta
    // radial integral before anything downstream is trusted
    for (const auto& [bigm, m] : {std::pair{1.0, 0.1}, {3.0, 1.0}, {2.2, 1.0}}) {
        const double analytic = ps::two_body_measure(bigm * bigm, m);
        const double grid = oracles::two_body_measure_grid(bigm, m);
        CHECK(analytic == doctest::Approx(grid).epsilon(5e-6));
    }
}

TEST_CASE("unit integrand reproduces the measure") {
    const FourVector total = on_shell({0, 0, 0}, 3.0);
    const auto r = ps::phase_space_2body(
        total, 1.0, [](const FourVector&, const FourVector&) { return cplx(1.0, 0.0); }, 20000,
        7);
    CHECK(r.converged);
    CHECK(r.abs_error <= 1e-12);  // zero-variance integrand
    CHECK(r.value.real() == doctest::Approx(ps::two_body_measure(9.0, 1.0)).epsilon(1e-12));
}

TEST_CASE("below threshold returns exact zero") {
    const FourVector total = on_shell({0, 0, 0}, 1.9);
    const auto r = ps::phase_space_2body(
        total, 1.0, [](const FourVector&, const FourVector&) { return cplx(1.0, 0.0); }, 2000, 7);
    CHECK(r.value == cplx(0.0, 0.0));
    CHECK(r.abs_error == 0.0);
    CHECK(r.converged);
}

TEST_CASE("momentum conservation holds per sample") {
    const FourVector total = boost(on_shell({0, 0, 0}, 2.5), 0.7, {0, 1, 0});
    double worst = 0.0;
    const auto r = ps::phase_space_2body(
        total, 1.0,
        [&](const FourVector& k1, const FourVector& k2) {
            const FourVector d = (k1 + k2) - total;
            worst = std::max(worst, std::abs(d.t) + d.spatial().norm());
            const double off1 = std::abs(square(k1) + 1.0);
            const double off2 = std::abs(square(k2) + 1.0);
            worst = std::max({worst, off1, off2});
            return cplx(1.0, 0.0);
        },
        2000, 11);
    (void)r;
    CHECK(worst <= 1e-11);
}

TEST_CASE("rest-frame and boosted evaluations agree") {
    const double m = 1.0;
    const FourVector rest = on_shell({0, 0, 0}, 2.6);
    const FourVector moving = boost(rest, 1.1, {0, 0, 1});
    // invariant integrand: depends on k1.k2 only
    auto h = [](const FourVector& k1, const FourVector& k2) {
        return cplx(1.0 / (1.0 + std::abs(dot(k1, k2))), 0.0);
    };
    const auto a = ps::phase_space_2body(rest, m, h, 200000, 5);
    const auto b = ps::phase_space_2body(moving, m, h, 200000, 6);
    CHECK(std::abs(a.value.real() - b.value.real()) <=
          3.0 * std::hypot(a.abs_error, b.abs_error));
}

TEST_CASE("fixed seed is bit-reproducible and worker-count independent") {
    const FourVector total = on_shell({0.3, -0.2, 0.5}, 2.4);
    auto h = [](const FourVector& k1, const FourVector& k2) {
        return cplx(k1.x * k2.y + 0.3, k1.t - k2.t);
    };
    const auto a = ps::phase_space_2body(total, 1.0, h, 50000, 99);
    const auto b = ps::phase_space_2body(total, 1.0, h, 50000, 99);
    CHECK(a.value.real() == b.value.real());
    CHECK(a.value.imag() == b.value.imag());
    CHECK(a.abs_error == b.abs_error);

    setenv("GKSL_THREADS", "3", 1);
    const auto c = ps::phase_space_2body(total, 1.0, h, 50000, 99);
    unsetenv("GKSL_THREADS");
    CHECK(a.value.real() == c.value.real());
    CHECK(a.value.imag() == c.value.imag());
}

TEST_CASE("error estimate covers the truth") {
    // angular integrand with a known exact integral: h = (k1_z/|k|)^2 in the
    // rest frame integrates to measure/3
    const double bigm = 3.0, m = 1.0;
    const double kmag = std::sqrt(0.25 * bigm * bigm - m * m);
    const FourVector total = on_shell({0, 0, 0}, bigm);
    int covered = 0;
    for (int rep = 0; rep < 20; ++rep) {
        const auto r = ps::phase_space_2body(
            total, m,
            [&](const FourVector& k1, const FourVector&) {
                const double c = k1.z / kmag;
                return cplx(c * c, 0.0);
            },
            20000, 1234 + rep);
        const double exact = ps::two_body_measure(bigm * bigm, m) / 3.0;
        if (std::abs(r.value.real() - exact) <= 5.0 * r.abs_error) ++covered;
    }
    CHECK(covered >= 19);
}
