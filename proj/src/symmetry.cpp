#include "gksl/symmetry.hpp"

#include <cmath>

#include "gksl/coefficients.hpp"
#include "gksl/rng.hpp"

namespace gksl::sym {

namespace {
constexpr double kPi = 3.14159265358979323846;

Vec3 random_unit(SplitMix64& rng) {
    const double c = 2.0 * rng.next_double() - 1.0;
    const double phi = 2.0 * kPi * rng.next_double();
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    return {s * std::cos(phi), s * std::sin(phi), c};
}

FourVector random_on_shell(SplitMix64& rng, double mass, double pmax) {
    return on_shell(random_unit(rng) * (pmax * rng.next_double()), mass);
}

}  // namespace

PoincareElement PoincareElement::random(std::uint64_t seed, double max_rapidity) {
    SplitMix64 rng(seed);
    PoincareElement g;
    g.rapidity = max_rapidity * (2.0 * rng.next_double() - 1.0);
    g.boost_axis = random_unit(rng);
    g.angle = 2.0 * kPi * rng.next_double();
    g.rotation_axis = random_unit(rng);
    g.translation = FourVector(2.0 * rng.next_double() - 1.0, random_unit(rng) * rng.next_double());
    return g;
}

FourVector PoincareElement::apply(const FourVector& v) const {
    FourVector r = rotate(v, angle, rotation_axis);
    return boost(r, rapidity, boost_axis);
}

std::complex<double> PoincareElement::ladder_phase(const FourVector& q) const {
    return std::polar(1.0, -dot(q, translation));
}

void InvarianceReport::add(std::string label, double lhs, double rhs, double tol) {
    const bool pass = std::abs(lhs - rhs) <= tol;
    checks.push_back({std::move(label), lhs, rhs, tol, pass});
    all_pass = all_pass && pass;
}

InvarianceReport check_decay_invariance(const PoincareElement& g, const ModelParams& params,
                                        int trials, std::uint64_t seed) {
    params.validate();
    InvarianceReport rep;
    for (int t = 0; t < trials; ++t) {
        SplitMix64 rng(block_seed(seed, t));
        const FourVector p = random_on_shell(rng, params.m_s, 2.0 * params.m_s);
        const FourVector q = g.apply(p);

        // (i) coefficient invariance
        const LoopValue a = coeff::decay_rate_numeric(params, p);
        const LoopValue b = coeff::decay_rate_numeric(params, q);
        const double tol = 3.0 * std::hypot(a.abs_error, b.abs_error) +
                           1e-10 * std::abs(a.value.real());
        rep.add("decay rate, trial " + std::to_string(t), a.value.real(), b.value.real(), tol);

        // (ii) transported matrix element (diagonal p = pbar): the kernel
        // density gamma/omega transported with sqrt(omega_L/omega) ladder
        // weights and the d3p/omega measure Jacobian, against the density
        // recomputed at the transformed momentum. Translation phases cancel
        // exactly on the diagonal.
        const double omega_p = p.t, omega_q = q.t;
        const std::complex<double> phase =
            g.ladder_phase(q) * std::conj(g.ladder_phase(q));
        const double transported = a.value.real() / omega_p * (omega_q / omega_p) *
                                   (omega_p / omega_q) * (omega_p / omega_q) *
                                   phase.real();
        const double recomputed = b.value.real() / omega_q;
        const double tol_elem = 3.0 * std::hypot(a.abs_error, b.abs_error) / omega_q +
                                1e-10 * std::abs(recomputed);
        rep.add("decay transported element, trial " + std::to_string(t), transported, recomputed,
                tol_elem);
    }
    return rep;
}

InvarianceReport check_pair_invariance(const PoincareElement& g, const ModelParams& params,
                                       int trials, std::uint64_t seed) {
    params.validate();
    InvarianceReport rep;
    for (int t = 0; t < trials; ++t) {
        SplitMix64 rng(block_seed(seed ^ 0x9a17, t));
        // CM-frame pair with energy somewhere around the annihilation
        // threshold, plus an independent barred direction
        const double omega = params.m_E * (0.8 + 1.4 * rng.next_double());
        const double qmag = std::sqrt(std::max(omega * omega - params.m_s * params.m_s, 1e-12));
        const Vec3 dir = random_unit(rng);
        const FourVector p1 = on_shell(dir * qmag, params.m_s);
        const FourVector p2 = on_shell(dir * (-qmag), params.m_s);
        const Vec3 dbar = random_unit(rng);
        const FourVector pbar2 = on_shell(dbar * (-qmag), params.m_s);
        const coeff::PairKernelPoint pt{p1, p2, pbar2};
        const coeff::PairKernelPoint pt_g{g.apply(p1), g.apply(p2), g.apply(pbar2)};

        // sanity layer: the Mandelstam triple is preserved
        const FourVector pbar1 = pt.pbar1();
        const Mandelstam m0 = mandelstam(p1, p2, pbar1, pbar2);
        const Mandelstam m1 = mandelstam(pt_g.p1, pt_g.p2, pt_g.pbar1(), pt_g.pbar2);
        const double mscale = std::abs(m0.s) + std::abs(m0.t) + std::abs(m0.u);
        rep.add("mandelstam s, trial " + std::to_string(t), m0.s, m1.s, 1e-9 * mscale);
        rep.add("mandelstam t, trial " + std::to_string(t), m0.t, m1.t, 1e-9 * mscale);
        rep.add("mandelstam u, trial " + std::to_string(t), m0.u, m1.u, 1e-9 * mscale);

        // kernel invariance at 3 sigma (Monte Carlo route in both frames)
        const LoopValue k0 = coeff::pair_kernel(pt, params, 1e-6);
        const LoopValue k1 = coeff::pair_kernel(pt_g, params, 1e-6);
        const double ktol = 3.0 * std::hypot(k0.abs_error, k1.abs_error) +
                            1e-9 * std::abs(k0.value.real());
        rep.add("pair kernel, trial " + std::to_string(t), k0.value.real(), k1.value.real(),
                ktol);

        // box coefficient recomputed from the transformed momenta
        const LoopValue a0 = coeff::box_loop_im(m0, params, 1e-6);
        const LoopValue a1 = coeff::box_loop_im(m1, params, 1e-6);
        const double atol = 3.0 * std::hypot(a0.abs_error, a1.abs_error) +
                            1e-6 * std::abs(a0.value.real()) + 1e-14;
        rep.add("box coefficient, trial " + std::to_string(t), a0.value.real(),
                a1.value.real(), atol);

        // transported element for the two-particle density
        // gamma / sqrt(omega^4): ladder weights sqrt(prod omega_L / omega),
        // measure Jacobian prod (omega/omega_L), translation phases cancel on
        // conserving configurations.
        const double w_orig = 1.0 / std::sqrt(p1.t * p2.t * pbar1.t * pbar2.t);
        const double ladder = std::sqrt((pt_g.p1.t / p1.t) * (pt_g.p2.t / p2.t) *
                                        (pt_g.pbar1().t / pbar1.t) * (pt_g.pbar2.t / pbar2.t));
        const double jac = (p1.t / pt_g.p1.t) * (p2.t / pt_g.p2.t) *
                           (pbar1.t / pt_g.pbar1().t) * (pbar2.t / pt_g.pbar2.t);
        const std::complex<double> phase =
            g.ladder_phase(pt_g.pbar1() + pt_g.pbar2) * std::conj(g.ladder_phase(pt_g.p1 + pt_g.p2));
        rep.add("translation phase modulus, trial " + std::to_string(t), std::abs(phase), 1.0,
                1e-12);
        const double transported = k0.value.real() * w_orig * ladder * jac * phase.real();
        const double w_new =
            1.0 / std::sqrt(pt_g.p1.t * pt_g.p2.t * pt_g.pbar1().t * pt_g.pbar2.t);
        const double recomputed = k1.value.real() * w_new;
        const double etol = 3.0 * std::hypot(k0.abs_error, k1.abs_error) * w_new +
                            1e-9 * std::abs(recomputed);
        rep.add("pair transported element, trial " + std::to_string(t), transported, recomputed,
                etol);
    }
    return rep;
}

}  // namespace gksl::sym
