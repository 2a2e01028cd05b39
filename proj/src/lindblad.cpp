#include "gksl/lindblad.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "gksl/coefficients.hpp"
#include "gksl/parallel.hpp"
#include "gksl/rng.hpp"

namespace gksl::lind {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;
using cplx = std::complex<double>;

// Spectral bookkeeping shared by both assemblers: hermitize, check positive
// semidefiniteness, drop eigenvalues below 1e-12 * max.
void finalize_kernel(GeneratorMatrices& gen) {
    gen.lindblad_kernel = 0.5 * (gen.lindblad_kernel + gen.lindblad_kernel.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gen.lindblad_kernel);
    const Eigen::VectorXd evals = es.eigenvalues();
    gen.min_eigenvalue = evals.minCoeff();
    gen.max_eigenvalue = evals.maxCoeff();
    if (gen.max_eigenvalue > 0.0 && gen.min_eigenvalue < -1e-8 * gen.max_eigenvalue)
        throw std::runtime_error(
            "generator assembly: Lindblad kernel is not positive semidefinite "
            "(min eigenvalue " + std::to_string(gen.min_eigenvalue) + ")");
    const double cut = 1e-12 * std::max(gen.max_eigenvalue, 0.0);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < evals.size(); ++k)
        if (evals[k] > cut) keep.push_back(k);
    gen.kernel_eigenvalues.resize(keep.size());
    gen.kernel_vectors.resize(gen.lindblad_kernel.rows(), keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k) {
        gen.kernel_eigenvalues[static_cast<Eigen::Index>(k)] = evals[keep[k]];
        gen.kernel_vectors.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]);
    }
    gen.kernel_kept = gen.kernel_vectors * gen.kernel_eigenvalues.asDiagonal() *
                      gen.kernel_vectors.adjoint();
}

}  // namespace

GeneratorMatrices assemble_decay(const fock::FockBasis& basis, const ModelParams& params,
                                 const DecayOptions& opt) {
    params.validate();
    if (!(opt.t_eff > 0.0)) throw std::invalid_argument("assemble_decay: t_eff must be positive");

    double gamma = coeff::decay_rate_closed(params);
    if (opt.use_numeric_rate) {
        const FourVector rest = on_shell({0, 0, 0}, params.m_s);
        gamma = coeff::decay_rate_numeric(params, rest).value.real();
    }

    const std::size_t n = basis.n_modes();
    GeneratorMatrices gen;
    gen.sector = KernelSector::one_particle;
    gen.sector_offset = basis.one_particle_index(0);
    gen.full_dim = basis.dim();
    gen.hamiltonian = Eigen::MatrixXcd::Zero(n, n);
    gen.lindblad_kernel = Eigen::MatrixXcd::Zero(n, n);
    const double time_factor = opt.t_eff / kTwoPi;
    for (std::size_t m = 0; m < n; ++m)
        gen.lindblad_kernel(m, m) = gamma * time_factor / basis.mode_energy(m);
    finalize_kernel(gen);
    return gen;
}

GeneratorMatrices assemble_pair(const fock::FockBasis& basis, const ModelParams& params,
                                const PairOptions& opt) {
    params.validate();
    if (!(opt.t_eff > 0.0)) throw std::invalid_argument("assemble_pair: t_eff must be positive");
    if (!(params.m_s < 2.0 * params.m_E))
        throw std::invalid_argument("assemble_pair: requires a stable system field (m_s < 2 m_E)");

    const auto& pairs = basis.pairs();
    const std::size_t np = pairs.size();
    const auto& grid = basis.grid();
    const double de_bin = kTwoPi / opt.t_eff;

    GeneratorMatrices gen;
    gen.sector = KernelSector::two_particle;
    gen.sector_offset = basis.pair_sector_offset();
    gen.full_dim = basis.dim();
    gen.hamiltonian = Eigen::MatrixXcd::Zero(np, np);
    gen.lindblad_kernel = Eigen::MatrixXcd::Zero(np, np);

    // (2 pi / L)^3 (T_eff / 2 pi) from the delta^4 dictionary and measures.
    const double unit3 = std::pow(kTwoPi / grid.box_length, 3);
    const double lam4 = std::pow(params.lambda, 4);
    const double pref_d = 4.0 * lam4 / std::pow(kTwoPi, 4) * unit3 * (opt.t_eff / kTwoPi);
    const double pref_h = 2.0 * lam4 / std::pow(kTwoPi, 6) * unit3 * (opt.t_eff / kTwoPi);

    struct Entry {
        std::size_t row, col;           // pair indices (row = barred)
        double norm;                    // symmetrization and energy weights
        std::vector<coeff::PairKernelPoint> reps;  // ordered representatives
        Mandelstam msu;
        double conservation_tol;
    };

    // Conserving entries: equal total grid momentum, energies within the bin.
    std::vector<Entry> entries;
    std::vector<double> pair_energy(np);
    std::vector<std::array<int, 3>> pair_total(np);
    for (std::size_t b = 0; b < np; ++b) {
        const auto [i, j] = pairs[b];
        pair_energy[b] = basis.mode_energy(i) + basis.mode_energy(j);
        const auto& ni = grid.modes[i];
        const auto& nj = grid.modes[j];
        pair_total[b] = {ni[0] + nj[0], ni[1] + nj[1], ni[2] + nj[2]};
    }
    for (std::size_t row = 0; row < np; ++row) {
        for (std::size_t col = 0; col < np; ++col) {
            if (pair_total[row] != pair_total[col]) continue;
            if (std::abs(pair_energy[row] - pair_energy[col]) > 0.5 * de_bin) continue;
            const auto [i, j] = pairs[col];        // unbarred (p1, p2)
            const auto [ib, jb] = pairs[row];      // barred (pbar1, pbar2)
            const FourVector p1 = basis.mode_four_momentum(i);
            const FourVector p2 = basis.mode_four_momentum(j);
            const FourVector q1 = basis.mode_four_momentum(ib);
            const FourVector q2 = basis.mode_four_momentum(jb);
            Entry e;
            e.row = row;
            e.col = col;
            const double same_col = (i == j) ? std::sqrt(2.0) : 1.0;
            const double same_row = (ib == jb) ? std::sqrt(2.0) : 1.0;
            const double omega4 = basis.mode_energy(i) * basis.mode_energy(j) *
                                  basis.mode_energy(ib) * basis.mode_energy(jb);
            e.norm = same_col * same_row / std::sqrt(omega4);
            // ordered representatives of both unordered pairs
            std::vector<std::pair<FourVector, FourVector>> cols, rows;
            cols.push_back({p1, p2});
            if (i != j) cols.push_back({p2, p1});
            rows.push_back({q1, q2});
            if (ib != jb) rows.push_back({q2, q1});
            for (const auto& [c1, c2] : cols)
                for (const auto& [r1, r2] : rows) {
                    (void)r1;
                    e.reps.push_back({c1, c2, r2});
                }
            e.msu = mandelstam(p1, p2, q1, q2);
            // off-shellness of the reconstructed pbar1 from the energy bin:
            // |square + m_s^2| <= E_total * dE + dE^2/4
            const double scale = params.m_s * params.m_s + std::abs(e.msu.s);
            e.conservation_tol =
                1.01 * ((p1 + p2).t * de_bin + 0.25 * de_bin * de_bin) / scale + 1e-9;
            entries.push_back(std::move(e));
        }
    }

    // The box coefficient depends only on the Mandelstam triple (t and u
    // interchangeable); cache unique triples and evaluate them in parallel.
    std::map<std::array<double, 3>, LoopValue> box_cache;
    if (opt.hamiltonian) {
        auto key_of = [](const Mandelstam& m) {
            return std::array<double, 3>{m.s, std::min(m.t, m.u), std::max(m.t, m.u)};
        };
        for (const auto& e : entries) box_cache.emplace(key_of(e.msu), LoopValue{});
        std::vector<std::array<double, 3>> keys;
        keys.reserve(box_cache.size());
        for (const auto& [k, v] : box_cache) keys.push_back(k);
        std::vector<LoopValue> vals(keys.size());
        parallel_for(keys.size(), [&](std::size_t idx) {
            const Mandelstam m{keys[idx][0], keys[idx][1], keys[idx][2]};
            vals[idx] = coeff::box_loop_im(m, params, opt.loop_tol);
        });
        for (std::size_t idx = 0; idx < keys.size(); ++idx) box_cache[keys[idx]] = vals[idx];

        for (const auto& e : entries) {
            const LoopValue im_a = box_cache[key_of(e.msu)];
            // i [ReT0, rho] with ReT0 > 0 corresponds to M = -ReT0 in -i[M, rho]
            const double m_entry =
                -pref_h * im_a.value.real() * e.norm * static_cast<double>(e.reps.size());
            gen.hamiltonian(e.row, e.col) += m_entry;
        }
        gen.hamiltonian = 0.5 * (gen.hamiltonian + gen.hamiltonian.adjoint().eval());
    }

    if (opt.dissipator) {
        // Kernel values per (entry, representative), parallel over entries.
        std::vector<cplx> kernel_sums(entries.size(), 0.0);
        parallel_for(entries.size(), [&](std::size_t idx) {
            const Entry& e = entries[idx];
            cplx sum = 0.0;
            for (const auto& pt : e.reps) {
                const FourVector total = pt.p1 + pt.p2;
                if (-square(total) < 4.0 * params.m_E * params.m_E) continue;
                // Lorentz-invariant kernel: evaluate in the CM frame
                coeff::PairKernelPoint cm{boost_to_rest_frame(pt.p1, total),
                                          boost_to_rest_frame(pt.p2, total),
                                          boost_to_rest_frame(pt.pbar2, total)};
                sum += pair_kernel_cm(cm, params, e.conservation_tol).value;
            }
            kernel_sums[idx] = sum;
        });
        for (std::size_t idx = 0; idx < entries.size(); ++idx) {
            const Entry& e = entries[idx];
            gen.lindblad_kernel(e.row, e.col) += pref_d * e.norm * kernel_sums[idx];
        }
    }

    finalize_kernel(gen);
    return gen;
}

Eigen::MatrixXcd apply_generator(const GeneratorMatrices& gen, const Eigen::MatrixXcd& rho) {
    const auto d = static_cast<Eigen::Index>(gen.full_dim);
    if (rho.rows() != d || rho.cols() != d)
        throw std::invalid_argument("apply_generator: state dimension mismatch");
    const auto off = static_cast<Eigen::Index>(gen.sector_offset);
    const auto sd = gen.lindblad_kernel.rows();

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
    const auto rows = rho.middleRows(off, sd);  // sd x d
    const auto cols = rho.middleCols(off, sd);  // d x sd

    // -i [M, rho]: M is supported on one sector block, so only sd rows of
    // M rho and sd columns of rho M are populated.
    if (gen.hamiltonian.size() > 0 && gen.hamiltonian.cwiseAbs().maxCoeff() > 0.0) {
        out.middleRows(off, sd).noalias() += cplx(0.0, -1.0) * (gen.hamiltonian * rows);
        out.middleCols(off, sd).noalias() += cplx(0.0, 1.0) * (cols * gen.hamiltonian);
    }

    // Dissipator via A_k = |0><chi_k|: gain lands on the vacuum entry, the
    // anticommutator damps the sector block and its coherences.
    // gain = sum_k mu_k <chi_k| rho |chi_k> = sum_{bb', b} Gamma_{b', b} rho_{b, b'}
    const Eigen::MatrixXcd rho_block = rho.block(off, off, sd, sd);
    const cplx gain = gen.kernel_kept.cwiseProduct(rho_block.transpose()).sum();
    out(0, 0) += gain;
    const auto k = gen.kernel_eigenvalues.size();
    if (2 * k < sd) {
        // factored route through the kept eigenpairs
        const Eigen::MatrixXcd w =
            gen.kernel_vectors * gen.kernel_eigenvalues.asDiagonal();  // sd x k
        out.middleRows(off, sd).noalias() -= 0.5 * (w * (gen.kernel_vectors.adjoint() * rows));
        out.middleCols(off, sd).noalias() -= 0.5 * ((cols * w) * gen.kernel_vectors.adjoint());
    } else {
        out.middleRows(off, sd).noalias() -= 0.5 * (gen.kernel_kept * rows);
        out.middleCols(off, sd).noalias() -= 0.5 * (cols * gen.kernel_kept);
    }
    return out;
}

DensityMatrix evolve_step(const GeneratorMatrices& gen, const DensityMatrix& rho,
                          double dt_effective, StepDiagnostics* diag) {
    if (dt_effective < 0.0) throw std::invalid_argument("evolve_step: dt must be >= 0");
    const Eigen::MatrixXcd drho = apply_generator(gen, rho.matrix());
    const double norm = drho.norm();
    if (norm * dt_effective > 0.1)
        throw std::runtime_error(
            "evolve_step: weak-coupling guard violated (||L[rho]|| * dt = " +
            std::to_string(norm * dt_effective) +
            " > 0.1); reduce the coupling, the V*T regulator, or dt");
    Eigen::MatrixXcd next = rho.matrix() + dt_effective * drho;
    const double trace_before = next.trace().real();
    DensityMatrix out = DensityMatrix::unchecked_normalized(std::move(next));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(out.matrix(), Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (diag) {
        diag->generator_norm = norm;
        diag->min_eigenvalue = min_eig;
        diag->trace_before_renorm = trace_before;
        diag->eigenvalue_warning = min_eig < -1e-8;
    }
    return out;
}

SumRuleReport sum_rule_check(const ModelParams& params, std::uint64_t mc_samples,
                             double bin_fraction) {
    params.validate();
    SumRuleReport rep;
    const double ms = params.m_s, me = params.m_E;
    rep.below_threshold = !(ms > 2.0 * me);

    const LoopValue bubble = coeff::bubble_absorptive(-ms * ms, params);
    rep.lhs = 2.0 * params.lambda * params.lambda * bubble.value.real();
    rep.lhs_error = 2.0 * params.lambda * params.lambda * bubble.abs_error;

    if (rep.below_threshold) {
        rep.rhs = 0.0;
        rep.rhs_error = 0.0;
        rep.relative_deviation = std::abs(rep.lhs);
        rep.converged = bubble.converged;
        return rep;
    }

    // Final-state sum: (1/2) * (1/2!) * (lambda^2 / 4 pi) * PS where
    // PS = int d3k/(E^2) delta_bin(2E - m_s), delta_bin smeared over
    // dE = bin_fraction * m_s. Sampled over a radial bracket wider than the
    // bin so the Monte Carlo error genuinely scales as 1/sqrt(N).
    const double de = bin_fraction * ms;
    // radial bracket: the shell |2E - m_s| < de/2 plus a 30% margin on each
    // side, so most samples land in the bin but the indicator keeps variance
    const double e_lo = std::max(me, 0.5 * ms - 0.25 * de);
    const double e_hi = 0.5 * ms + 0.25 * de;
    const double k_bin_lo = std::sqrt(std::max(0.0, e_lo * e_lo - me * me));
    const double k_bin_hi = std::sqrt(e_hi * e_hi - me * me);
    const double margin = 0.3 * (k_bin_hi - k_bin_lo);
    const double k_lo = std::max(0.0, k_bin_lo - margin);
    const double k_hi = k_bin_hi + margin;
    const double range = k_hi - k_lo;

    constexpr std::uint64_t kBlock = 8192;
    const std::uint64_t n_blocks = (mc_samples + kBlock - 1) / kBlock;
    std::vector<double> block_sum(n_blocks, 0.0), block_sum2(n_blocks, 0.0);
    std::vector<std::uint64_t> block_n(n_blocks, 0);
    parallel_for(n_blocks, [&](std::size_t bi) {
        SplitMix64 rng(block_seed(params.seed ^ 0x5b1dUL, bi));
        const std::uint64_t lo = bi * kBlock;
        const std::uint64_t hi = std::min(mc_samples, lo + kBlock);
        double s1 = 0.0, s2 = 0.0;
        for (std::uint64_t i = lo; i < hi; ++i) {
            const double k = k_lo + range * rng.next_double();
            const double e = std::sqrt(k * k + me * me);
            double f = 0.0;
            if (std::abs(2.0 * e - ms) < 0.5 * de) f = 4.0 * kPi * k * k / (e * e * de);
            s1 += f;
            s2 += f * f;
        }
        block_sum[bi] = s1;
        block_sum2[bi] = s2;
        block_n[bi] = hi - lo;
    });
    double sum = 0.0, sum2 = 0.0;
    std::uint64_t n = 0;
    for (std::size_t bi = 0; bi < n_blocks; ++bi) {
        sum += block_sum[bi];
        sum2 += block_sum2[bi];
        n += block_n[bi];
    }
    const double mean = sum / static_cast<double>(n);
    const double var = std::max(0.0, sum2 / static_cast<double>(n) - mean * mean);
    const double ps = range * mean;
    const double ps_err = range * std::sqrt(var / static_cast<double>(n));

    const double pref = 0.25 * params.lambda * params.lambda / (4.0 * kPi);
    rep.rhs = pref * ps;
    rep.rhs_error = pref * ps_err;
    const double scale = std::max(std::abs(rep.rhs), std::abs(rep.lhs));
    rep.relative_deviation = scale > 0.0 ? std::abs(rep.lhs - rep.rhs) / scale : 0.0;
    rep.converged = bubble.converged;
    return rep;
}

}  // namespace gksl::lind
