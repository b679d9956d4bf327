#pragma once

#include <random>

#include "logvort/field.hpp"

namespace testutil {

using namespace logvort;

/// Random real band-limited field: Hermitian-symmetric modes filled up to
/// max |s| <= cutoff, then inverted to the grid.
inline GridField random_band_limited(int n, double box, int cutoff, std::mt19937_64& rng, bool mean_zero = false) {
  SpectralField F = SpectralField::zeros(n, box);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int s1 = -cutoff; s1 <= cutoff; ++s1)
    for (int s2 = -cutoff; s2 <= cutoff; ++s2) {
      if (s1 == 0 && s2 == 0) continue;
      F.at_signed(s1, s2) = std::complex<double>(gauss(rng), gauss(rng));
    }
  if (!mean_zero) F.at_signed(0, 0) = gauss(rng);
  // symmetrize so the inverse is real
  SpectralField G = F;
  for (int j1 = 0; j1 < n; ++j1)
    for (int j2 = 0; j2 < n; ++j2) {
      const int k1 = (n - j1) % n, k2 = (n - j2) % n;
      G.at(j1, j2) = 0.5 * (F.at(j1, j2) + std::conj(F.at(k1, k2)));
    }
  return to_grid(G);
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline double max_abs_diff(const GridField& a, const GridField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

}  // namespace testutil
