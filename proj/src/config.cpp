#include "gksl/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gksl::io {

std::string format_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.11e", v);
    return buf;
}

Eigen::VectorXcd parse_state_file(const std::string& path, const fock::FockBasis& basis) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open state file: " + path);
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.dim()));
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& why) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        int sector;
        if (!(ss >> sector)) continue;  // blank or comment-only line
        double re, im;
        std::size_t index = 0;
        if (sector == 0) {
            if (!(ss >> re >> im)) fail("vacuum line needs `0 re im`");
            index = basis.vacuum_index();
        } else if (sector == 1) {
            std::array<int, 3> n{};
            if (!(ss >> n[0] >> n[1] >> n[2] >> re >> im))
                fail("one-particle line needs `1 nx ny nz re im`");
            if (!basis.grid().contains(n)) fail("mode off the grid");
            index = basis.one_particle_index(basis.grid().index_of(n));
        } else if (sector == 2) {
            std::array<int, 3> n1{}, n2{};
            if (!(ss >> n1[0] >> n1[1] >> n1[2] >> n2[0] >> n2[1] >> n2[2] >> re >> im))
                fail("two-particle line needs `2 n1x n1y n1z n2x n2y n2z re im`");
            if (!basis.grid().contains(n1) || !basis.grid().contains(n2))
                fail("mode off the grid");
            index = basis.pair_index(basis.grid().index_of(n1), basis.grid().index_of(n2));
        } else {
            fail("sector must be 0, 1 or 2");
        }
        std::string rest;
        if (ss >> rest) fail("trailing tokens");
        amps[static_cast<Eigen::Index>(index)] += std::complex<double>(re, im);
    }
    if (amps.norm() == 0.0) throw std::runtime_error(path + ": state file defines a zero state");
    return amps;
}

std::string echo_config(const ModelParams& params,
                        const std::vector<std::pair<std::string, std::string>>& extra) {
    std::ostringstream os;
    os << "lambda = " << format_sci(params.lambda) << "\n";
    os << "ms = " << format_sci(params.m_s) << "\n";
    os << "me = " << format_sci(params.m_E) << "\n";
    os << "mc-samples = " << params.mc_samples << "\n";
    os << "seed = " << params.seed << "\n";
    os << "tol = " << format_sci(params.simplex_tol) << "\n";
    os << "volume-time = " << format_sci(params.volume_time) << "\n";
    os << "eps-schedule =";
    for (double e : params.epsilon_schedule) os << " " << format_sci(e);
    os << "\n";
    for (const auto& [k, v] : extra) os << k << " = " << v << "\n";
    return os.str();
}

}  // namespace gksl::io
