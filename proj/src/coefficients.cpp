#include "gksl/coefficients.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "gksl/kernels.hpp"
#include "gksl/phase_space.hpp"
#include "gksl/quadrature.hpp"

namespace gksl::coeff {

namespace {
constexpr double kPi = 3.14159265358979323846;
using cplx = std::complex<double>;
}  // namespace

// ---------------------------------------------------------------------------
// Decay sector

double decay_rate_closed(const ModelParams& p) {
    p.validate();
    if (!(p.m_s > 0.0)) throw std::invalid_argument("decay_rate_closed: m_s must be positive");
    const double arg = p.m_s * p.m_s - 4.0 * p.m_E * p.m_E;
    if (arg <= 0.0) return 0.0;
    return p.lambda * p.lambda / p.m_s * std::sqrt(arg);
}

LoopValue decay_rate_numeric(const ModelParams& p, const FourVector& momentum) {
    p.validate();
    if (!(p.m_s > 0.0)) throw std::invalid_argument("decay_rate_numeric: m_s must be positive");
    const double ms2 = p.m_s * p.m_s;
    if (std::abs(square(momentum) + ms2) > 1e-9 * ms2)
        throw std::invalid_argument("decay_rate_numeric: momentum not on-shell at m_s");
    ps::BatchIntegrand one = [](std::span<const FourVector>, std::span<const FourVector>,
                                std::span<cplx> out) {
        for (auto& v : out) v = 1.0;
    };
    LoopValue r = ps::phase_space_2body(momentum, p.m_E, one, p.mc_samples, p.seed);
    const double pref = p.lambda * p.lambda / (4.0 * kPi);
    r.value *= pref;
    r.abs_error *= pref;
    return r;
}

// ---------------------------------------------------------------------------
// Pair kernel

namespace {

void require_on_shell(const FourVector& v, double m_s, double tol, const char* name) {
    const double scale = std::max(m_s * m_s, std::abs(square(v)));
    if (std::abs(square(v) + m_s * m_s) > tol * scale) {
        std::ostringstream os;
        os << "pair kernel point: " << name << " is not on-shell at m_s (square = " << square(v)
           << ", expected " << -m_s * m_s << ")";
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

void PairKernelPoint::validate(double m_s, double conservation_tol) const {
    require_on_shell(p1, m_s, 1e-9, "p1");
    require_on_shell(p2, m_s, 1e-9, "p2");
    require_on_shell(pbar2, m_s, 1e-9, "pbar2");
    // pbar1 carries the energy-conservation slack (an energy-bin regulator on
    // a grid widens it); measured against the kinematic scale m_s^2 + |s|.
    const FourVector r = pbar1();
    const double scale = m_s * m_s + std::abs(square(p1 + p2));
    if (std::abs(square(r) + m_s * m_s) > conservation_tol * scale) {
        std::ostringstream os;
        os << "pair kernel point: reconstructed pbar1 violates conservation (square = "
           << square(r) << ", expected " << -m_s * m_s << ", tol " << conservation_tol << ")";
        throw std::invalid_argument(os.str());
    }
}

namespace {

// Fills the four propagator denominators (q^2 + m_E^2 with q = p - k) for a
// batch of final-state momenta and multiplies them out via the SIMD kernel.
void propagator_batch(const PairKernelPoint& pt, double me2, double eps,
                      std::span<const FourVector> k1, std::span<const FourVector> k2,
                      std::span<cplx> out) {
    const std::size_t n = out.size();
    std::vector<double> d2a(n), d2b(n), db2a(n), db2b(n);
    for (std::size_t i = 0; i < n; ++i) {
        d2a[i] = square(pt.p2 - k2[i]) + me2;
        d2b[i] = square(pt.p2 - k1[i]) + me2;
        db2a[i] = square(pt.pbar2 - k2[i]) + me2;
        db2b[i] = square(pt.pbar2 - k1[i]) + me2;
    }
    kernels::propagator_product(d2a.data(), d2b.data(), db2a.data(), db2b.data(), n, eps,
                                out.data());
}

}  // namespace

LoopValue pair_kernel(const PairKernelPoint& point, const ModelParams& p,
                      double conservation_tol) {
    p.validate();
    point.validate(p.m_s, conservation_tol);
    const FourVector total = point.p1 + point.p2;
    if (-square(total) < 4.0 * p.m_E * p.m_E) return {0.0, 0.0, true};

    const auto schedule = p.eps_absolute();
    const double eps0 = schedule.back();
    const double eps1 = schedule[schedule.size() - 2];
    const double me2 = p.m_E * p.m_E;

    auto run = [&](double eps) {
        ps::BatchIntegrand h = [&](std::span<const FourVector> k1, std::span<const FourVector> k2,
                                   std::span<cplx> out) {
            propagator_batch(point, me2, eps, k1, k2, out);
        };
        return ps::phase_space_2body(total, p.m_E, h, p.mc_samples, p.seed);
    };
    const LoopValue v0 = run(eps0);
    const LoopValue v1 = run(eps1);
    const double spread = std::abs(v0.value - v1.value);
    LoopValue out = v0;
    out.abs_error += spread;
    if (spread > 0.01 * std::abs(v0.value)) out.converged = false;
    return out;
}

LoopValue pair_kernel_cm(const PairKernelPoint& point, const ModelParams& p,
                         int n_theta, int n_phi, double conservation_tol) {
    p.validate();
    point.validate(p.m_s, conservation_tol);
    const FourVector total = point.p1 + point.p2;
    const double e_star = total.t;
    if (total.spatial().norm() > 1e-10 * e_star)
        throw std::invalid_argument("pair_kernel_cm: p1 + p2 has a nonvanishing spatial part");
    const double s = square(total);
    const double me2 = p.m_E * p.m_E;
    if (-s < 4.0 * me2) return {0.0, 0.0, true};

    const double k_mag = std::sqrt(-0.25 * s - me2);
    const double e_half = 0.5 * std::sqrt(-s);
    // (1/2) sqrt((s + 4 m_E^2)/s): both factors are negative above threshold.
    const double w_flux = 0.5 * std::sqrt((s + 4.0 * me2) / s);
    const auto schedule = p.eps_absolute();
    const double eps0 = schedule.back();
    const double eps1 = schedule[schedule.size() - 2];

    auto angular = [&](int nt, int np, double eps) {
        const auto& gt = quad::gauss_legendre(nt);
        const auto& gp = quad::gauss_legendre(np);
        const std::size_t n = static_cast<std::size_t>(nt) * np;
        std::vector<FourVector> k1(n), k2(n);
        std::vector<double> wts(n);
        std::size_t idx = 0;
        for (int i = 0; i < nt; ++i) {
            const double ct = gt.nodes[i];
            const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
            for (int j = 0; j < np; ++j) {
                const double phi = kPi * (gp.nodes[j] + 1.0);  // [0, 2 pi]
                const Vec3 n_hat{st * std::cos(phi), st * std::sin(phi), ct};
                k1[idx] = FourVector(e_half, n_hat * k_mag);
                k2[idx] = FourVector(e_half, n_hat * (-k_mag));
                wts[idx] = gt.weights[i] * gp.weights[j] * kPi;  // phi half-width
                ++idx;
            }
        }
        std::vector<cplx> vals(n);
        propagator_batch(point, me2, eps, k1, k2, vals);
        cplx sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += wts[i] * vals[i];
        return sum;
    };

    const cplx fine = angular(n_theta, n_phi, eps0);
    const cplx coarse = angular(std::max(4, n_theta / 2), std::max(4, n_phi / 2), eps0);
    const cplx alt_eps = angular(n_theta, n_phi, eps1);
    const double quad_err = std::abs(fine - coarse);
    const double eps_spread = std::abs(fine - alt_eps);

    LoopValue out;
    out.value = w_flux * fine;
    out.abs_error = w_flux * (quad_err + eps_spread);
    out.converged = eps_spread <= 0.01 * std::abs(fine) || std::abs(fine) == 0.0;
    return out;
}

LoopValue pair_kernel_cm(const PairKernelPoint& point, const ModelParams& p,
                         double conservation_tol) {
    return pair_kernel_cm(point, p, p.angular_nodes_theta, p.angular_nodes_phi, conservation_tol);
}

// ---------------------------------------------------------------------------
// One-loop box

namespace detail {

namespace {

// Closed form of int_0^1 dx (c + A x(1-x) - i eps)^(-2).
cplx quartic_inner(double c, double a_coef, double eps) {
    const cplx pm(c, -eps);  // value at the endpoints x = 0, 1
    if (std::abs(a_coef) < 1e-14 * (std::abs(c) + eps)) return 1.0 / (pm * pm);
    const cplx pc(c + 0.25 * a_coef, -eps);  // value at the midpoint
    const cplx r = std::sqrt(cplx(a_coef, 0.0) / pc);
    const cplx z = 0.5 * r;
    cplx atanh_over_z;
    if (std::abs(z) < 1e-4) {
        const cplx z2 = z * z;
        atanh_over_z = 1.0 + z2 / 3.0 + z2 * z2 / 5.0;
    } else {
        atanh_over_z = 0.5 * std::log((1.0 + z) / (1.0 - z)) / z;
    }
    return 1.0 / (2.0 * pc * pm) + atanh_over_z / (2.0 * pc * pc);
}

}  // namespace

LoopValue box_sum_reduced(const Mandelstam& m, const ModelParams& p, double eps, double tol_rel) {
    const double ms2 = p.m_s * p.m_s;
    const double me2 = p.m_E * p.m_E;
    // Split z -> (w, a, b): z1 = w a, z4 = w (1-a), z2 = (1-w) b, z3 = (1-w)(1-b);
    // Jacobian w(1-w). Each M_j^2 = base(w) + B_j w^2 a(1-a) + A_j (1-w)^2 b(1-b)
    // and the b-integral has the closed form above.
    quad::Rect2DBatchFn f = [&](const double* w, const double* a, std::size_t n, cplx* out) {
        for (std::size_t i = 0; i < n; ++i) {
            const double W = w[i], A = a[i];
            const double base = me2 - W * (1.0 - W) * ms2;
            const double fb = (1.0 - W) * (1.0 - W);
            const double fa = W * W * A * (1.0 - A);
            out[i] = W * (1.0 - W) *
                     (quartic_inner(base + m.u * fa, m.t * fb, eps) +
                      quartic_inner(base + m.s * fa, m.t * fb, eps) +
                      quartic_inner(base + m.u * fa, m.s * fb, eps));
        }
    };
    quad::Rect2DOptions opt;
    opt.tol_rel = tol_rel;
    return quad::integrate_rect2d(f, 0.0, 1.0, 0.0, 1.0, opt);
}

LoopValue box_sum_simplex(const Mandelstam& m, const ModelParams& p, double eps, double tol_rel) {
    const double ms2 = p.m_s * p.m_s;
    const double me2 = p.m_E * p.m_E;
    quad::SimplexBatchFn f = [&](const double* z1, const double* z2, const double* z3,
                                 std::size_t n, cplx* out) {
        kernels::box_denominator_sum(z1, z2, z3, n, ms2, me2, m.s, m.t, m.u, eps, out);
    };
    return quad::integrate_simplex(f, tol_rel);
}

}  // namespace detail

namespace {

LoopValue box_bare_extrapolated(const Mandelstam& m, const ModelParams& p, double tol_rel) {
    const auto schedule = p.eps_absolute();
    auto g = [&](double eps) { return detail::box_sum_reduced(m, p, eps, tol_rel); };
    return quad::extrapolate_eps(g, schedule, {});
}

}  // namespace

LoopValue box_loop(const Mandelstam& m, const ModelParams& p, double tol_rel) {
    p.validate();
    LoopValue bare = box_bare_extrapolated(m, p, tol_rel);
    // Normalized parameter measure: the simplex integral times 3! so that a
    // unit integrand gives 1, then the loop factor i/(4 pi)^2.
    const double norm = 6.0 / (16.0 * kPi * kPi);
    LoopValue out;
    out.value = cplx(0.0, 1.0) * bare.value * norm;
    out.abs_error = bare.abs_error * norm;
    out.converged = bare.converged;
    return out;
}

LoopValue box_loop(const Mandelstam& m, const ModelParams& p) {
    return box_loop(m, p, p.simplex_tol);
}

LoopValue box_loop_im(const Mandelstam& m, const ModelParams& p, double tol_rel) {
    LoopValue full = box_loop(m, p, tol_rel);
    return {cplx(full.value.imag(), 0.0), full.abs_error, full.converged};
}

LoopValue box_loop_im(const Mandelstam& m, const ModelParams& p) {
    return box_loop_im(m, p, p.simplex_tol);
}

// ---------------------------------------------------------------------------
// Bubble absorptive part

LoopValue bubble_absorptive(double s, const ModelParams& p) {
    p.validate();
    const double me2 = p.m_E * p.m_E;
    // One-parameter Feynman integral of the regulated spectral angle:
    //   (1/16 pi) int_0^1 atan2(eps, Delta(x)) dx,  Delta = m_E^2 + x(1-x) s.
    // The eps -> 0 limit is (pi/16 pi) * |{x : Delta < 0}| =
    // (1/16) sqrt((s+4m_E^2)/s) above the two-particle cut. The 3D loop
    // schedule is scaled down by 100: the integral is one-dimensional and
    // cheap, and the smaller regulator keeps the eps*log(eps) tail of the
    // extrapolation well under the sum-rule budget.
    std::vector<double> schedule = p.eps_absolute();
    for (double& e : schedule) e *= 1e-2;

    auto g = [&](double eps) {
        auto f = [&](double x) {
            const double delta = me2 + x * (1.0 - x) * s;
            return cplx(std::atan2(eps, delta), 0.0);
        };
        LoopValue r = quad::integrate_1d(f, 0.0, 1.0, 1e-11);
        const double pref = 1.0 / (16.0 * kPi);
        r.value *= pref;
        r.abs_error *= pref;
        return r;
    };
    return quad::extrapolate_eps(g, schedule, {});
}

}  // namespace gksl::coeff
