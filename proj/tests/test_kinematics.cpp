#include <doctest.h>

#include <cmath>

#include "gksl/fourvec.hpp"
#include "gksl/rng.hpp"

using namespace gksl;

namespace {
Vec3 random_unit(SplitMix64& rng) {
    const double c = 2.0 * rng.next_double() - 1.0;
    const double phi = 6.283185307179586 * rng.next_double();
    const double s = std::sqrt(1.0 - c * c);
    return {s * std::cos(phi), s * std::sin(phi), c};
}
}  // namespace

TEST_CASE("on_shell construction") {
    const FourVector rest = on_shell({0, 0, 0}, 1.0);
    CHECK(rest.t == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(square(rest) == doctest::Approx(-1.0).epsilon(1e-15));

    const FourVector p = on_shell({3, 0, 0}, 4.0);
    CHECK(p.t == doctest::Approx(5.0).epsilon(1e-15));

    const FourVector q = on_shell({0.7, -0.2, 0.1}, 0.5);
    CHECK(-square(q) == doctest::Approx(0.25).epsilon(1e-12));

    SplitMix64 rng(7);
    for (int i = 0; i < 200; ++i) {
        const double m = 0.1 + 3.0 * rng.next_double();
        const FourVector v = on_shell(random_unit(rng) * (5.0 * rng.next_double()), m);
        CHECK(std::abs(square(v) + m * m) <= 1e-12 * m * m + 1e-13 * std::abs(square(v)));
    }
}

TEST_CASE("boost basics") {
    const FourVector v(2.0, 0.3, -0.4, 0.9);
    CHECK(boost(v, 0.0, {0, 0, 1}).t == v.t);  // exact identity at zero rapidity
    CHECK(boost(v, 0.0, {0, 0, 1}).x == v.x);

    const double m = 1.7, eta = 0.8;
    const FourVector rest = on_shell({0, 0, 0}, m);
    const FourVector b = boost(rest, eta, {1, 0, 0});
    CHECK(b.t == doctest::Approx(m * std::cosh(eta)).epsilon(1e-14));
    CHECK(b.x == doctest::Approx(m * std::sinh(eta)).epsilon(1e-14));
    CHECK(b.y == 0.0);

    CHECK_THROWS_AS(boost(v, 0.5, {1, 1, 0}), std::invalid_argument);
}

TEST_CASE("boost preserves the invariant square") {
    SplitMix64 rng(11);
    for (int i = 0; i < 300; ++i) {
        const FourVector v(4.0 * rng.next_double() - 2.0, 2.0 * rng.next_double() - 1.0,
                           2.0 * rng.next_double() - 1.0, 2.0 * rng.next_double() - 1.0);
        const double eta = 3.0 * (2.0 * rng.next_double() - 1.0);
        const FourVector b = boost(v, eta, random_unit(rng));
        const double scale = std::abs(square(v)) + 1e-3;
        CHECK(std::abs(square(b) - square(v)) <= 1e-10 * scale);
    }
}

TEST_CASE("boost composition along an axis adds rapidities") {
    SplitMix64 rng(13);
    for (int i = 0; i < 100; ++i) {
        const Vec3 axis = random_unit(rng);
        const double a = 2.0 * rng.next_double() - 1.0;
        const double b = 2.0 * rng.next_double() - 1.0;
        const FourVector v = on_shell(random_unit(rng) * rng.next_double(), 1.0);
        const FourVector two = boost(boost(v, a, axis), b, axis);
        const FourVector one = boost(v, a + b, axis);
        CHECK(std::abs(two.t - one.t) <= 1e-10 * (std::abs(one.t) + 1.0));
        CHECK(std::abs(two.x - one.x) <= 1e-10 * (std::abs(one.t) + 1.0));
        CHECK(std::abs(two.y - one.y) <= 1e-10 * (std::abs(one.t) + 1.0));
        CHECK(std::abs(two.z - one.z) <= 1e-10 * (std::abs(one.t) + 1.0));
    }
}

TEST_CASE("rotation preserves energy and norm") {
    SplitMix64 rng(17);
    for (int i = 0; i < 100; ++i) {
        const FourVector v = on_shell(random_unit(rng) * (2.0 * rng.next_double()), 0.7);
        const FourVector r = rotate(v, 6.28 * rng.next_double(), random_unit(rng));
        CHECK(r.t == v.t);
        CHECK(r.spatial().norm() == doctest::Approx(v.spatial().norm()).epsilon(1e-12));
    }
}

TEST_CASE("mandelstam identities") {
    const double m = 0.8;
    const Vec3 q{0.9, 0.0, 0.0};
    const FourVector p1 = on_shell(q, m), p2 = on_shell(-q, m);

    SUBCASE("forward elastic scattering has t = 0") {
        const Mandelstam ms = mandelstam(p1, p2, p1, p2);
        CHECK(ms.t == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(ms.s == doctest::Approx(-(p1.t + p2.t) * (p1.t + p2.t)).epsilon(1e-13));
    }

    SUBCASE("s + t + u = -4 m^2 for conserving kinematics") {
        SplitMix64 rng(23);
        for (int i = 0; i < 100; ++i) {
            // random CM pair, random outgoing direction at the same energy
            const double qm = 0.1 + 2.0 * rng.next_double();
            const Vec3 d_in = random_unit(rng), d_out = random_unit(rng);
            const FourVector a1 = on_shell(d_in * qm, m), a2 = on_shell(d_in * (-qm), m);
            const FourVector b1 = on_shell(d_out * qm, m), b2 = on_shell(d_out * (-qm), m);
            const Mandelstam ms = mandelstam(a1, a2, b1, b2);
            CHECK(std::abs(ms.s + ms.t + ms.u + 4.0 * m * m) <=
                  1e-10 * (std::abs(ms.s) + 4.0 * m * m));
        }
    }

    SUBCASE("invariant under a common boost") {
        SplitMix64 rng(29);
        for (int i = 0; i < 50; ++i) {
            const double qm = 0.1 + 2.0 * rng.next_double();
            const Vec3 d_in = random_unit(rng), d_out = random_unit(rng);
            const FourVector a1 = on_shell(d_in * qm, m), a2 = on_shell(d_in * (-qm), m);
            const FourVector b1 = on_shell(d_out * qm, m), b2 = on_shell(d_out * (-qm), m);
            const Mandelstam ms = mandelstam(a1, a2, b1, b2);
            const double eta = 2.0 * rng.next_double() - 1.0;
            const Vec3 ax = random_unit(rng);
            const Mandelstam mb = mandelstam(boost(a1, eta, ax), boost(a2, eta, ax),
                                             boost(b1, eta, ax), boost(b2, eta, ax));
            const double scale = std::abs(ms.s) + std::abs(ms.t) + std::abs(ms.u);
            CHECK(std::abs(ms.s - mb.s) <= 1e-9 * scale);
            CHECK(std::abs(ms.t - mb.t) <= 1e-9 * scale);
            CHECK(std::abs(ms.u - mb.u) <= 1e-9 * scale);
        }
    }
}

TEST_CASE("rest frame round trip") {
    SplitMix64 rng(31);
    for (int i = 0; i < 50; ++i) {
        const FourVector total = on_shell(random_unit(rng) * (2.0 * rng.next_double()), 3.0);
        const FourVector k = on_shell(random_unit(rng) * rng.next_double(), 0.5);
        const FourVector round = boost_to_rest_frame(boost_from_rest_frame(k, total), total);
        CHECK(round.t == doctest::Approx(k.t).epsilon(1e-12));
        CHECK(round.x == doctest::Approx(k.x).epsilon(1e-11));
    }
}
