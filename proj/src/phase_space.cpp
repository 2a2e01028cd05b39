#include "gksl/phase_space.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gksl/parallel.hpp"
#include "gksl/rng.hpp"

namespace gksl::ps {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr std::uint64_t kBlockSize = 8192;
}  // namespace

double two_body_measure(double e_star_sq, double m) {
    if (e_star_sq <= 4.0 * m * m) return 0.0;
    const double e_star = std::sqrt(e_star_sq);
    return 2.0 * kPi * std::sqrt(e_star_sq - 4.0 * m * m) / e_star;
}

LoopValue phase_space_2body(const FourVector& total, double m, const BatchIntegrand& h,
                            std::uint64_t n_samples, std::uint64_t seed) {
    if (n_samples < 1000) throw std::invalid_argument("phase_space_2body: need >= 1000 samples");
    const double e_star_sq = -square(total);
    if (e_star_sq < 4.0 * m * m) return {0.0, 0.0, true};  // below threshold: exact zero

    const double e_star = std::sqrt(e_star_sq);
    const double k_mag = std::sqrt(0.25 * e_star_sq - m * m);
    const double e_half = 0.5 * e_star;
    // total angular measure: 2 pi sqrt(E*^2 - 4 m^2) / E*
    const double measure = 4.0 * kPi * k_mag / e_star;
    const bool at_rest = total.spatial().norm() == 0.0;

    const std::uint64_t n_blocks = (n_samples + kBlockSize - 1) / kBlockSize;
    struct BlockSum {
        std::complex<double> sum{0.0, 0.0};
        double sum_re2{0.0}, sum_im2{0.0};
        std::uint64_t n{0};
    };
    std::vector<BlockSum> blocks(n_blocks);

    parallel_for(n_blocks, [&](std::size_t bi) {
        const std::uint64_t lo = bi * kBlockSize;
        const std::uint64_t hi = std::min(n_samples, lo + kBlockSize);
        const std::uint64_t count = hi - lo;
        SplitMix64 rng(block_seed(seed, bi));
        std::vector<FourVector> k1(count), k2(count);
        std::vector<std::complex<double>> vals(count);
        for (std::uint64_t i = 0; i < count; ++i) {
            const double cos_th = 2.0 * rng.next_double() - 1.0;
            const double phi = 2.0 * kPi * rng.next_double();
            const double sin_th = std::sqrt(std::max(0.0, 1.0 - cos_th * cos_th));
            const Vec3 n_hat{sin_th * std::cos(phi), sin_th * std::sin(phi), cos_th};
            const FourVector k1_cm(e_half, n_hat * k_mag);
            const FourVector k2_cm(e_half, n_hat * (-k_mag));
            if (at_rest) {
                k1[i] = k1_cm;
                k2[i] = k2_cm;
            } else {
                k1[i] = boost_from_rest_frame(k1_cm, total);
                k2[i] = boost_from_rest_frame(k2_cm, total);
            }
        }
        h(std::span<const FourVector>(k1), std::span<const FourVector>(k2),
          std::span<std::complex<double>>(vals));
        BlockSum& b = blocks[bi];
        for (std::uint64_t i = 0; i < count; ++i) {
            b.sum += vals[i];
            b.sum_re2 += vals[i].real() * vals[i].real();
            b.sum_im2 += vals[i].imag() * vals[i].imag();
        }
        b.n = count;
    });

    std::complex<double> sum{0.0, 0.0};
    double sum_re2 = 0.0, sum_im2 = 0.0;
    std::uint64_t n = 0;
    for (const BlockSum& b : blocks) {  // fixed combination order
        sum += b.sum;
        sum_re2 += b.sum_re2;
        sum_im2 += b.sum_im2;
        n += b.n;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    const std::complex<double> mean = sum * inv_n;
    const double var_re = std::max(0.0, sum_re2 * inv_n - mean.real() * mean.real());
    const double var_im = std::max(0.0, sum_im2 * inv_n - mean.imag() * mean.imag());
    const double stderr_norm = std::sqrt((var_re + var_im) * inv_n);
    return {measure * mean, measure * stderr_norm, true};
}

LoopValue phase_space_2body(const FourVector& total, double m,
                            const std::function<std::complex<double>(const FourVector&,
                                                                     const FourVector&)>& h,
                            std::uint64_t n_samples, std::uint64_t seed) {
    BatchIntegrand batch = [&h](std::span<const FourVector> k1, std::span<const FourVector> k2,
                                std::span<std::complex<double>> out) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = h(k1[i], k2[i]);
    };
    return phase_space_2body(total, m, batch, n_samples, seed);
}

}  // namespace gksl::ps
