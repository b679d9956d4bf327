#pragma once

// Frozen reference values, computed once with the adaptive tensor-Gauss
// quadrature at tolerance <= 1e-12 (see test_initdata.cpp for the convergence
// cross-checks). Versioned with the bump profile: any change to chi must
// regenerate these.

namespace fixtures {

// integral of chi over R^2, ||chi||_{L2}^2, ||grad chi||_{L2}^2
inline constexpr double kChiMass = 1.78828777317365;
inline constexpr double kChiL2Sq = 1.56611100930415;
inline constexpr double kGradChiL2Sq = 15.4403364693056;

// I = quadrant integral of eta(x) x1 x2 / |x|^4 for the paper quadrupole
// (centers (+-1, +-1), width 64). Equals kChiMass / (4 * 64^2) exactly by the
// mean-value property of the harmonic kernel; frozen from quadrature.
inline constexpr double kIEtaPaper = 1.09148423655629e-4;

}  // namespace fixtures
