#include "gksl/probability.hpp"

#include <cmath>
#include <stdexcept>

#include "gksl/coefficients.hpp"
#include "gksl/parallel.hpp"
#include "gksl/rng.hpp"

namespace gksl::prob {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;
using cplx = std::complex<double>;
}  // namespace

void SuperposedPairState::validate() const {
    const double nq = q.norm(), nqb = qbar.norm();
    if (!(nq > 0.0) || !(nqb > 0.0))
        throw std::invalid_argument("SuperposedPairState: branch momenta must be nonzero");
    if (std::abs(nq - nqb) > 1e-9 * nq)
        throw std::invalid_argument("SuperposedPairState: |q| and |qbar| must match");
    if (std::abs(q.dot(qbar)) > 1e-9 * nq * nqb)
        throw std::invalid_argument("SuperposedPairState: q and qbar must be orthogonal");
}

Regulators Regulators::from_box(double box_length, double t_eff) {
    const double d3 = std::pow(box_length / kTwoPi, 3);
    return {d3 * t_eff / kTwoPi, d3};
}

Regulators Regulators::vt_literal(double volume, double time) {
    return {volume * time, volume};
}

namespace {

// The 16 boson-symmetrized kernel terms of the two-branch probability,
// summed with their interference phases. Returns the phase-weighted sum plus
// a combined error; all kernels share the total momentum (2 omega_q, 0).
LoopValue branch_kernel_sum(const SuperposedPairState& state, const ModelParams& params,
                            KernelRoute route) {
    struct Rep {
        FourVector p1, p2;
        int branch;
    };
    const double m_s = params.m_s;
    std::vector<Rep> reps;
    for (int b = 0; b < 2; ++b) {
        const Vec3 v = (b == 0) ? state.q : state.qbar;
        reps.push_back({on_shell(v, m_s), on_shell(-v, m_s), b});
        reps.push_back({on_shell(-v, m_s), on_shell(v, m_s), b});
    }
    cplx sum = 0.0;
    double err = 0.0;
    bool converged = true;
    for (const Rep& ket : reps) {
        for (const Rep& bra : reps) {
            coeff::PairKernelPoint pt{ket.p1, ket.p2, bra.p2};
            const LoopValue k = (route == KernelRoute::cm_quadrature)
                                    ? coeff::pair_kernel_cm(pt, params)
                                    : coeff::pair_kernel(pt, params);
            const cplx phase = std::polar(1.0, state.delta * (ket.branch - bra.branch));
            sum += phase * k.value;
            err += k.abs_error;
            converged = converged && k.converged;
        }
    }
    return {sum, err, converged};
}

}  // namespace

LoopValue annihilation_probability(const SuperposedPairState& state, const ModelParams& params,
                                   const Regulators& regs, KernelRoute route) {
    params.validate();
    state.validate();
    if (!(params.m_s > 0.0))
        throw std::invalid_argument("annihilation_probability: m_s must be positive");
    const double omega_q = std::sqrt(state.q.dot(state.q) + params.m_s * params.m_s);
    const LoopValue ks = branch_kernel_sum(state, params, route);
    const double norm_n = 2.0 * regs.delta3_zero * regs.delta3_zero;
    const double pref = 4.0 * std::pow(params.lambda, 4) / std::pow(kTwoPi, 4) *
                        regs.delta4_zero / (norm_n * omega_q * omega_q);
    LoopValue out;
    out.value = {pref * ks.value.real(), 0.0};  // kernel sum is real up to eps effects
    out.abs_error = pref * (ks.abs_error + std::abs(ks.value.imag()));
    out.converged = ks.converged;
    return out;
}

double sigma_closed(double x, double delta, const ModelParams& params) {
    params.validate();
    if (!(x > 0.0)) throw std::invalid_argument("sigma_closed: x must be positive");
    if (x <= 1.0) return 0.0;  // theta(-s - 4 m_E^2)
    const double me = params.m_E, ms = params.m_s;
    const double s = -std::pow(2.0 * me * x, 2);
    const double ms2 = ms * ms, me2 = me * me;

    const double a = (s + 4.0 * ms2) * (s + 4.0 * me2) / std::pow(s + 2.0 * ms2, 2);
    const double sqrt_a = std::sqrt(a);
    // 1 - sqrt(a) = (1 - a)/(1 + sqrt(a)) keeps the bracket finite as a -> 1
    const double one_minus_sqrt_a = (1.0 - a) / (1.0 + sqrt_a);
    const double log_term = std::log((1.0 + sqrt_a) / one_minus_sqrt_a);
    const double bracket = 16.0 / (1.0 - a) + 8.0 / sqrt_a * log_term +
                           std::cos(delta) * (11.0 - a) / (2.0 * sqrt_a) * log_term;

    const double flux_u = 2.0 * std::sqrt(s * (s + 4.0 * ms2)) / (-s);
    const double val = std::pow(params.lambda / kPi, 4) * (16.0 * kPi / (-s)) *
                       std::sqrt((s + 4.0 * me2) / s) / std::pow(s + 2.0 * ms2, 2) * bracket /
                       (std::pow(me, 6) * flux_u);
    return me * me * val;
}

LoopValue sigma_numeric(double x, double delta, const ModelParams& params, KernelRoute route) {
    params.validate();
    if (!(params.m_s > 0.0))
        throw std::invalid_argument("sigma_numeric: m_s must be positive");
    const double me = params.m_E, ms = params.m_s;
    const double omega_q = me * x;  // sqrt(-s) = 2 omega_q
    if (!(omega_q > ms))
        throw std::invalid_argument("sigma_numeric: x below the two-particle rest energy");
    const double qmag = std::sqrt(omega_q * omega_q - ms * ms);
    SuperposedPairState state{{qmag, 0.0, 0.0}, {0.0, qmag, 0.0}, delta};

    const double s = -std::pow(2.0 * me * x, 2);
    const double flux_u = 2.0 * std::sqrt(s * (s + 4.0 * ms * ms)) / (-s);

    const LoopValue ks = branch_kernel_sum(state, params, route);
    // N * P / (delta^4(0) m_E^6 u): the regulators cancel against P exactly.
    const double pref = 4.0 * std::pow(params.lambda, 4) / std::pow(kTwoPi, 4) /
                        (omega_q * omega_q * std::pow(me, 6) * flux_u);
    LoopValue out;
    out.value = {me * me * pref * ks.value.real(), 0.0};
    out.abs_error = me * me * pref * (ks.abs_error + std::abs(ks.value.imag()));
    out.converged = ks.converged;
    return out;
}

std::vector<ScanRow> sigma_scan(double x_min, double x_max, int steps,
                                const std::vector<double>& deltas, const ModelParams& params,
                                KernelRoute route) {
    if (!(0.0 < x_min && x_min < x_max)) throw std::invalid_argument("sigma_scan: need 0 < x_min < x_max");
    if (steps < 2) throw std::invalid_argument("sigma_scan: need at least 2 steps");
    if (deltas.empty()) throw std::invalid_argument("sigma_scan: need at least one delta");

    std::vector<ScanRow> rows(static_cast<std::size_t>(steps) * deltas.size());
    parallel_for(static_cast<std::size_t>(steps), [&](std::size_t ix) {
        const double x = x_min + (x_max - x_min) * static_cast<double>(ix) /
                                     static_cast<double>(steps - 1);
        ModelParams local = params;
        local.seed = block_seed(params.seed, ix);  // deterministic per row
        for (std::size_t id = 0; id < deltas.size(); ++id) {
            ScanRow row;
            row.x = x;
            row.delta = deltas[id];
            row.sigma_closed = sigma_closed(x, deltas[id], local);
            if (x * local.m_E > local.m_s) {
                const LoopValue num = sigma_numeric(x, deltas[id], local, route);
                row.sigma_numeric = num.value.real();
                row.numeric_error = num.abs_error;
            } else {
                row.sigma_numeric = 0.0;
                row.numeric_error = 0.0;
            }
            rows[ix * deltas.size() + id] = row;
        }
    });
    return rows;
}

}  // namespace gksl::prob
