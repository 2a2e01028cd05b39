#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "gksl/fourvec.hpp"

namespace gksl::fock {

// Periodic-box momentum grid: allowed momenta (2 pi / L) (nx, ny, nz) with
// |n_i| <= n_max. The mode list is closed under negation.
struct MomentumGrid {
    double box_length;
    int n_max;
    std::vector<std::array<int, 3>> modes;  // lexicographic order

    MomentumGrid(double length, int max_mode);

    std::size_t size() const { return modes.size(); }
    Vec3 momentum(std::size_t mode) const;
    std::size_t negation_index(std::size_t mode) const;
    // index of (nx, ny, nz); throws std::out_of_range if off the grid
    std::size_t index_of(const std::array<int, 3>& n) const;
    bool contains(const std::array<int, 3>& n) const;

private:
    std::map<std::array<int, 3>, std::size_t> index_;
};

// Truncated Fock basis: vacuum + one-particle(mode) + two-particle unordered
// mode pairs. Same-mode pairs carry the 1/sqrt(2) symmetrization relative to
// distinct pairs; the bookkeeping lives in the generator assembly.
class FockBasis {
public:
    FockBasis(const MomentumGrid& grid, double mass);

    std::size_t dim() const { return 1 + n_modes_ + pairs_.size(); }
    std::size_t n_modes() const { return n_modes_; }
    std::size_t n_pairs() const { return pairs_.size(); }

    std::size_t vacuum_index() const { return 0; }
    std::size_t one_particle_index(std::size_t mode) const { return 1 + mode; }
    std::size_t pair_sector_offset() const { return 1 + n_modes_; }
    std::size_t pair_index(std::size_t i, std::size_t j) const;  // global basis index

    const std::vector<std::pair<std::size_t, std::size_t>>& pairs() const { return pairs_; }

    double mass() const { return mass_; }
    double mode_energy(std::size_t mode) const { return energies_[mode]; }
    FourVector mode_four_momentum(std::size_t mode) const;
    const MomentumGrid& grid() const { return *grid_; }

private:
    const MomentumGrid* grid_;
    double mass_;
    std::size_t n_modes_;
    std::vector<double> energies_;
    std::vector<std::pair<std::size_t, std::size_t>> pairs_;  // i <= j
    std::vector<std::vector<std::size_t>> pair_lookup_;
};

}  // namespace gksl::fock
