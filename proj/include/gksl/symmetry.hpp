#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "gksl/fourvec.hpp"
#include "gksl/params.hpp"

namespace gksl::sym {

// Boost + rotation + translation. The Lorentz part acts as rotation first,
// then boost; the translation contributes only phase factors on ladder
// operators.
struct PoincareElement {
    double rapidity{0.0};
    Vec3 boost_axis{0.0, 0.0, 1.0};
    double angle{0.0};
    Vec3 rotation_axis{0.0, 0.0, 1.0};
    FourVector translation{};

    static PoincareElement identity() { return {}; }
    static PoincareElement random(std::uint64_t seed, double max_rapidity = 1.2);

    FourVector apply(const FourVector& v) const;
    // e^{-i (Lambda p) . a} for one transformed momentum
    std::complex<double> ladder_phase(const FourVector& transformed) const;
};

struct TrialCheck {
    std::string label;
    double lhs{0.0}, rhs{0.0}, tolerance{0.0};
    bool pass{false};
};

struct InvarianceReport {
    std::vector<TrialCheck> checks;
    bool all_pass{true};

    void add(std::string label, double lhs, double rhs, double tol);
};

// Decay sector: (i) the phase-space rate coefficient is invariant under the
// Lorentz part within 3 sigma; (ii) the generator matrix element transported
// with the sqrt(omega) weights, the invariant-measure Jacobian and the
// translation phases equals the element recomputed at transformed momenta.
InvarianceReport check_decay_invariance(const PoincareElement& g, const ModelParams& params,
                                        int trials, std::uint64_t seed);

// Pair sector: Mandelstam sanity layer, kernel invariance at 3 sigma (Monte
// Carlo route evaluated in both frames), box-coefficient stability, and the
// transported-element identity for the two-particle dissipator density.
InvarianceReport check_pair_invariance(const PoincareElement& g, const ModelParams& params,
                                       int trials, std::uint64_t seed);

}  // namespace gksl::sym
