#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace gksl {

// Physical couplings plus the numerical controls shared by every coefficient.
// epsilon_schedule entries are in units of m_E^2 (strictly decreasing, > 0).
struct ModelParams {
    double lambda{1.0};  // coupling, mass dimension 1
    double m_s{1.0};     // system-field mass
    double m_E{1.0};     // environment-field mass

    std::vector<double> epsilon_schedule{1e-1, 5e-2, 2.5e-2, 1.25e-2, 6.25e-3};
    std::uint64_t mc_samples{1'000'000};
    double volume_time{1.0};  // V*T regulator for squared momentum deltas

    double simplex_tol{1e-8};      // relative
    int angular_nodes_theta{64};   // Gauss nodes in cos(theta)
    int angular_nodes_phi{128};    // Gauss nodes in phi
    std::uint64_t seed{12345};

    // m_s = 0 is admitted here because the loop coefficient is well defined
    // there; operations that need a massive system field check positivity
    // themselves.
    void validate() const {
        if (!(m_s >= 0.0)) throw std::invalid_argument("m_s must be nonnegative");
        if (!(m_E > 0.0)) throw std::invalid_argument("m_E must be positive");
        if (epsilon_schedule.size() < 3)
            throw std::invalid_argument("epsilon schedule needs at least 3 entries");
        double prev = 0.0;
        for (std::size_t i = 0; i < epsilon_schedule.size(); ++i) {
            const double e = epsilon_schedule[i];
            if (!(e > 0.0)) throw std::invalid_argument("epsilon schedule entries must be positive");
            if (i > 0 && !(e < prev))
                throw std::invalid_argument("epsilon schedule must be strictly decreasing");
            prev = e;
        }
        if (mc_samples < 1000) throw std::invalid_argument("mc_samples must be >= 1000");
        if (!(volume_time > 0.0)) throw std::invalid_argument("volume_time must be positive");
        if (!(simplex_tol > 0.0)) throw std::invalid_argument("simplex_tol must be positive");
        if (angular_nodes_theta < 4 || angular_nodes_phi < 4)
            throw std::invalid_argument("angular node counts must be >= 4");
    }

    // Schedule resolved to absolute epsilon values.
    std::vector<double> eps_absolute() const {
        std::vector<double> out(epsilon_schedule);
        for (double& e : out) e *= m_E * m_E;
        return out;
    }
};

}  // namespace gksl
