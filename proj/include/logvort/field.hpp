#pragma once

#include <complex>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "logvort/common.hpp"
#include "logvort/fft.hpp"

namespace logvort {

/// Periodic real scalar field sampled on an n x n grid over the square
/// [-box*pi, box*pi)^2. Samples are row-major with the first index along x1,
/// so values[i1 * n + i2] lives at (coord(i1), coord(i2)).
struct GridField {
  int n = 0;
  double box = 1.0;  // half-period Lambda; the domain is [-box*pi, box*pi)^2
  double time = 0.0;
  std::vector<double> values;

  static GridField zeros(int n, double box) {
    check_geometry(n, box);
    GridField f;
    f.n = n;
    f.box = box;
    f.values.assign(static_cast<std::size_t>(n) * n, 0.0);
    return f;
  }

  static void check_geometry(int n, double box) {
    if (!is_power_of_two(n) || n < 16)
      throw std::invalid_argument("GridField: n must be a power of two, n >= 16 (got " + std::to_string(n) + ")");
    if (!(box > 0.0) || !std::isfinite(box))
      throw std::invalid_argument("GridField: box must be positive and finite");
  }

  double dx() const { return 2.0 * kPi * box / n; }
  double coord(int i) const { return -kPi * box + i * dx(); }
  double measure() const { return (2.0 * kPi * box) * (2.0 * kPi * box); }
  std::size_t size() const { return values.size(); }

  double& at(int i1, int i2) { return values[static_cast<std::size_t>(i1) * n + i2]; }
  double at(int i1, int i2) const { return values[static_cast<std::size_t>(i1) * n + i2]; }

  bool all_finite() const {
    for (double v : values)
      if (!std::isfinite(v)) return false;
    return true;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }

  /// L2 norm by the trapezoid rule, which on a periodic grid is the plain mean.
  double l2() const {
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) sq[i] = values[i] * values[i];
    return std::sqrt(pairwise_sum(sq) * dx() * dx());
  }
};

/// Samples a continuous function onto a grid.
inline GridField sample_field(int n, double box, const std::function<double(double, double)>& f) {
  GridField g = GridField::zeros(n, box);
  parallel_for(n, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i1 = lo; i1 < hi; ++i1) {
      const double x1 = g.coord(static_cast<int>(i1));
      for (int i2 = 0; i2 < n; ++i2) g.values[i1 * n + i2] = f(x1, g.coord(i2));
    }
  });
  return g;
}

/// Fourier-side twin of GridField. modes[j1 * n + j2] stores the continuum
/// transform f_hat(xi) = integral of f e^{-i x.xi} over the box, evaluated at
/// the lattice wavevector xi = (s(j1), s(j2)) / box with signed index
/// s(j) = j for j < n/2 and j - n otherwise.
struct SpectralField {
  int n = 0;
  double box = 1.0;
  double time = 0.0;
  std::vector<std::complex<double>> modes;

  static SpectralField zeros(int n, double box) {
    GridField::check_geometry(n, box);
    SpectralField f;
    f.n = n;
    f.box = box;
    f.modes.assign(static_cast<std::size_t>(n) * n, {0.0, 0.0});
    return f;
  }

  int signed_index(int j) const { return j < n / 2 ? j : j - n; }
  int wrap(int s) const { return s >= 0 ? s : s + n; }

  double xi(int j) const { return signed_index(j) / box; }
  double xi_abs(int j1, int j2) const { return std::hypot(xi(j1), xi(j2)); }
  double measure() const { return (2.0 * kPi * box) * (2.0 * kPi * box); }

  std::complex<double>& at(int j1, int j2) { return modes[static_cast<std::size_t>(j1) * n + j2]; }
  std::complex<double> at(int j1, int j2) const { return modes[static_cast<std::size_t>(j1) * n + j2]; }

  /// Mode at signed wavevector indices (s1, s2) in [-n/2, n/2).
  std::complex<double>& at_signed(int s1, int s2) { return at(wrap(s1), wrap(s2)); }
  std::complex<double> at_signed(int s1, int s2) const { return at(wrap(s1), wrap(s2)); }

  double max_abs() const {
    double m = 0.0;
    for (const auto& c : modes) m = std::max(m, std::abs(c));
    return m;
  }

  /// l2 mass matching the grid L2 norm under Parseval.
  double l2() const {
    std::vector<double> sq(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) sq[i] = std::norm(modes[i]);
    return std::sqrt(pairwise_sum(sq) / measure());
  }

  /// Max deviation from conjugate symmetry, relative to the largest mode.
  double symmetry_defect() const {
    const double scale = std::max(max_abs(), 1e-300);
    double worst = 0.0;
    for (int j1 = 0; j1 < n; ++j1) {
      const int k1 = (n - j1) % n;
      for (int j2 = 0; j2 < n; ++j2) {
        const int k2 = (n - j2) % n;
        const auto d = at(j1, j2) - std::conj(at(k1, k2));
        worst = std::max(worst, std::abs(d));
      }
    }
    return worst / scale;
  }
};

/// Forward transform. The zero mode of the constant function 1 equals the box
/// measure, matching the continuum convention.
inline SpectralField to_spectral(const GridField& f) {
  if (f.n == 0) throw std::invalid_argument("to_spectral: empty field");
  if (!f.all_finite()) throw std::invalid_argument("to_spectral: non-finite samples in input");
  const int n = f.n;
  SpectralField out = SpectralField::zeros(n, f.box);
  out.time = f.time;
  std::vector<std::complex<double>> in(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) in[i] = f.values[i];
  detail::FftPlans::get(n).forward(in.data(), out.modes.data());
  // Grid origin sits at -box*pi, not 0; the (-1)^{j1+j2} twiddle recenters.
  const double scale = f.dx() * f.dx();
  for (int j1 = 0; j1 < n; ++j1) {
    for (int j2 = 0; j2 < n; ++j2) {
      const double sign = ((j1 + j2) & 1) ? -1.0 : 1.0;
      out.at(j1, j2) *= sign * scale;
    }
  }
  return out;
}

/// Inverse transform back to real samples. Rejects inputs whose conjugate
/// symmetry defect exceeds 1e-9 since those have no real-valued inverse.
inline GridField to_grid(const SpectralField& F) {
  if (F.n == 0) throw std::invalid_argument("to_grid: empty field");
  const double defect = F.symmetry_defect();
  if (defect > 1e-9)
    throw std::invalid_argument("to_grid: asymmetric modes (conjugate symmetry defect " + std::to_string(defect) + ")");
  const int n = F.n;
  GridField out = GridField::zeros(n, F.box);
  out.time = F.time;
  std::vector<std::complex<double>> in(F.modes.size()), res(F.modes.size());
  const double inv_measure = 1.0 / F.measure();
  for (int j1 = 0; j1 < n; ++j1) {
    for (int j2 = 0; j2 < n; ++j2) {
      const double sign = ((j1 + j2) & 1) ? -1.0 : 1.0;
      in[static_cast<std::size_t>(j1) * n + j2] = F.at(j1, j2) * (sign * inv_measure);
    }
  }
  detail::FftPlans::get(n).backward(in.data(), res.data());
  for (std::size_t i = 0; i < res.size(); ++i) out.values[i] = res[i].real();
  return out;
}

/// Applies a radial Fourier multiplier m(|xi|) mode by mode. A multiplier that
/// is non-finite at an occupied mode is an error naming that mode; at
/// unoccupied modes (e.g. the zero mode of a mean-free field under |xi|^-2)
/// the output is set to zero.
inline SpectralField apply_multiplier(const SpectralField& F, const std::function<double(double)>& m) {
  SpectralField out = F;
  const double tol = 1e-13 * std::max(F.max_abs(), 1e-300);
  for (int j1 = 0; j1 < F.n; ++j1) {
    for (int j2 = 0; j2 < F.n; ++j2) {
      const double mv = m(F.xi_abs(j1, j2));
      if (!std::isfinite(mv)) {
        if (std::abs(F.at(j1, j2)) <= tol) {
          out.at(j1, j2) = 0.0;
          continue;
        }
        throw std::invalid_argument("apply_multiplier: multiplier non-finite at occupied mode (" +
                                    std::to_string(F.signed_index(j1)) + ", " + std::to_string(F.signed_index(j2)) +
                                    ")");
      }
      out.at(j1, j2) = F.at(j1, j2) * mv;
    }
  }
  return out;
}

/// Spectral derivative along an axis (0 -> x1, 1 -> x2). The Nyquist line is
/// zeroed so real fields stay real.
inline SpectralField derivative(const SpectralField& F, int axis) {
  if (axis != 0 && axis != 1) throw std::invalid_argument("derivative: axis must be 0 or 1");
  SpectralField out = F;
  const int n = F.n;
  for (int j1 = 0; j1 < n; ++j1) {
    const int s1 = F.signed_index(j1);
    for (int j2 = 0; j2 < n; ++j2) {
      const int s2 = F.signed_index(j2);
      const int s = axis == 0 ? s1 : s2;
      if (s == -n / 2) {
        out.at(j1, j2) = 0.0;
        continue;
      }
      out.at(j1, j2) = F.at(j1, j2) * std::complex<double>(0.0, s / F.box);
    }
  }
  return out;
}

inline GridField derivative(const GridField& f, int axis) { return to_grid(derivative(to_spectral(f), axis)); }

inline std::pair<GridField, GridField> gradient(const GridField& f) {
  const SpectralField F = to_spectral(f);
  return {to_grid(derivative(F, 0)), to_grid(derivative(F, 1))};
}

/// 2/3-rule dealiasing: zeroes every mode with 3 * max(|s1|, |s2|) > n.
inline SpectralField dealias(const SpectralField& F) {
  SpectralField out = F;
  const int n = F.n;
  for (int j1 = 0; j1 < n; ++j1) {
    const int a1 = std::abs(F.signed_index(j1));
    for (int j2 = 0; j2 < n; ++j2) {
      const int a2 = std::abs(F.signed_index(j2));
      if (3 * std::max(a1, a2) > n) out.at(j1, j2) = 0.0;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// LGV1 binary snapshot format: magic "LGV1", u32 n, f64 box, f64 time, then
// n*n f64 samples, all little-endian, row-major.
// ---------------------------------------------------------------------------

inline void save_lgv1(const std::string& path, const GridField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_lgv1: cannot open " + path);
  out.write("LGV1", 4);
  const std::uint32_t n = static_cast<std::uint32_t>(f.n);
  out.write(reinterpret_cast<const char*>(&n), 4);
  out.write(reinterpret_cast<const char*>(&f.box), 8);
  out.write(reinterpret_cast<const char*>(&f.time), 8);
  out.write(reinterpret_cast<const char*>(f.values.data()), static_cast<std::streamsize>(f.size() * 8));
  if (!out) throw std::runtime_error("save_lgv1: write failed for " + path);
}

inline GridField load_lgv1(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_lgv1: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "LGV1", 4) != 0) throw std::runtime_error("load_lgv1: bad magic in " + path);
  std::uint32_t n = 0;
  double box = 0.0, time = 0.0;
  in.read(reinterpret_cast<char*>(&n), 4);
  in.read(reinterpret_cast<char*>(&box), 8);
  in.read(reinterpret_cast<char*>(&time), 8);
  GridField f = GridField::zeros(static_cast<int>(n), box);
  f.time = time;
  in.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(f.size() * 8));
  if (!in) throw std::runtime_error("load_lgv1: truncated file " + path);
  return f;
}

// Elementwise helpers used throughout the solver paths.

inline GridField operator+(const GridField& a, const GridField& b) {
  if (a.n != b.n || a.box != b.box) throw std::invalid_argument("GridField+: geometry mismatch");
  GridField out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] += b.values[i];
  return out;
}

inline GridField operator-(const GridField& a, const GridField& b) {
  if (a.n != b.n || a.box != b.box) throw std::invalid_argument("GridField-: geometry mismatch");
  GridField out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] -= b.values[i];
  return out;
}

inline GridField operator*(double s, const GridField& a) {
  GridField out = a;
  for (auto& v : out.values) v *= s;
  return out;
}

inline SpectralField operator+(const SpectralField& a, const SpectralField& b) {
  if (a.n != b.n || a.box != b.box) throw std::invalid_argument("SpectralField+: geometry mismatch");
  SpectralField out = a;
  for (std::size_t i = 0; i < out.modes.size(); ++i) out.modes[i] += b.modes[i];
  return out;
}

inline SpectralField operator*(double s, const SpectralField& a) {
  SpectralField out = a;
  for (auto& v : out.modes) v *= s;
  return out;
}

}  // namespace logvort
