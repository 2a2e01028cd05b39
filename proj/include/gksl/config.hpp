#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gksl/fock.hpp"
#include "gksl/params.hpp"

namespace gksl::io {

// Scientific notation with 12 significant digits; CSV lines end in a single
// newline and are locale-independent.
std::string format_sci(double v);

// One basis amplitude per line:
//   0 re im
//   1 nx ny nz re im
//   2 n1x n1y n1z n2x n2y n2z re im
// '#' comments and blank lines are skipped. Throws std::runtime_error naming
// the offending line.
Eigen::VectorXcd parse_state_file(const std::string& path, const fock::FockBasis& basis);

// Resolved-run echo: "key = value" lines for reproducibility.
std::string echo_config(const ModelParams& params, const std::vector<std::pair<std::string, std::string>>& extra);

}  // namespace gksl::io
