#include "gksl/fock.hpp"

#include <cmath>
#include <stdexcept>

namespace gksl::fock {

namespace {
constexpr double kTwoPi = 6.28318530717958647692;
}

MomentumGrid::MomentumGrid(double length, int max_mode) : box_length(length), n_max(max_mode) {
    if (!(length > 0.0)) throw std::invalid_argument("MomentumGrid: box length must be positive");
    if (max_mode < 0) throw std::invalid_argument("MomentumGrid: n_max must be >= 0");
    for (int nx = -max_mode; nx <= max_mode; ++nx)
        for (int ny = -max_mode; ny <= max_mode; ++ny)
            for (int nz = -max_mode; nz <= max_mode; ++nz) {
                index_[{nx, ny, nz}] = modes.size();
                modes.push_back({nx, ny, nz});
            }
}

Vec3 MomentumGrid::momentum(std::size_t mode) const {
    const double unit = kTwoPi / box_length;
    const auto& n = modes.at(mode);
    return {unit * n[0], unit * n[1], unit * n[2]};
}

std::size_t MomentumGrid::negation_index(std::size_t mode) const {
    const auto& n = modes.at(mode);
    return index_of({-n[0], -n[1], -n[2]});
}

std::size_t MomentumGrid::index_of(const std::array<int, 3>& n) const {
    auto it = index_.find(n);
    if (it == index_.end()) throw std::out_of_range("MomentumGrid: mode not on grid");
    return it->second;
}

bool MomentumGrid::contains(const std::array<int, 3>& n) const { return index_.count(n) > 0; }

FockBasis::FockBasis(const MomentumGrid& grid, double mass)
    : grid_(&grid), mass_(mass), n_modes_(grid.size()) {
    if (!(mass > 0.0)) throw std::invalid_argument("FockBasis: mass must be positive");
    energies_.resize(n_modes_);
    for (std::size_t m = 0; m < n_modes_; ++m) {
        const Vec3 p = grid.momentum(m);
        energies_[m] = std::sqrt(p.dot(p) + mass * mass);
    }
    pair_lookup_.assign(n_modes_, std::vector<std::size_t>(n_modes_, 0));
    for (std::size_t i = 0; i < n_modes_; ++i)
        for (std::size_t j = i; j < n_modes_; ++j) {
            pair_lookup_[i][j] = pair_lookup_[j][i] = pairs_.size();
            pairs_.emplace_back(i, j);
        }
}

std::size_t FockBasis::pair_index(std::size_t i, std::size_t j) const {
    return pair_sector_offset() + pair_lookup_.at(i).at(j);
}

FourVector FockBasis::mode_four_momentum(std::size_t mode) const {
    return {energies_.at(mode), grid_->momentum(mode)};
}

}  // namespace gksl::fock
