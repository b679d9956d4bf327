#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "logvort/field.hpp"
#include "logvort/quadrature.hpp"

namespace logvort {

// ---------------------------------------------------------------------------
// Radial bump profile chi: identically 1 on B_{1/2}, 0 outside B_1, monotone
// radial, C-infinity. The transition uses the smooth step
//   S(t) = g(t) / (g(t) + g(1-t)),  g(t) = exp(-1/t) for t > 0,
// so chi(r) = S(2(1-r)) on 1/2 < r < 1. This exact profile is documented in
// the README; every language binding of the lab must reproduce it.
// ---------------------------------------------------------------------------

namespace bump {

inline double g(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
inline double gp(double t) { return t > 0.0 ? std::exp(-1.0 / t) / (t * t) : 0.0; }

inline double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = g(t), b = g(1.0 - t);
  return a / (a + b);
}

inline double smoothstep_prime(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double a = g(t), b = g(1.0 - t);
  const double d = a + b;
  return (gp(t) * b + a * gp(1.0 - t)) / (d * d);
}

}  // namespace bump

inline double chi(double r) {
  r = std::abs(r);
  if (r <= 0.5) return 1.0;
  if (r >= 1.0) return 0.0;
  return bump::smoothstep(2.0 * (1.0 - r));
}

inline double chi_prime(double r) {
  r = std::abs(r);
  if (r <= 0.5 || r >= 1.0) return 0.0;
  return -2.0 * bump::smoothstep_prime(2.0 * (1.0 - r));
}

inline double chi2(double x1, double x2) { return chi(std::hypot(x1, x2)); }

/// integral of chi over R^2 (radial).
inline double chi_mass() {
  static const double v = 2.0 * kPi * adapt_quad_1d([](double r) { return chi(r) * r; }, 0.0, 1.0, 1e-13).value;
  return v;
}

/// ||chi||_{L^2}^2.
inline double chi_l2sq() {
  static const double v =
      2.0 * kPi * adapt_quad_1d([](double r) { return chi(r) * chi(r) * r; }, 0.0, 1.0, 1e-13).value;
  return v;
}

/// ||grad chi||_{L^2}^2 (scale invariant in 2D).
inline double grad_chi_l2sq() {
  static const double v =
      2.0 * kPi * adapt_quad_1d([](double r) { return chi_prime(r) * chi_prime(r) * r; }, 0.5, 1.0, 1e-13).value;
  return v;
}

// ---------------------------------------------------------------------------
// Quadrupole eta: four signed copies of chi at (+-c, +-c) with sign a1*a2.
// The paper's eta has c = 1 and width w = 64 (ball radius 1/64); solver-scale
// analogs widen the bumps, keeping every prefactor formula literal.
// ---------------------------------------------------------------------------

struct QuadrupoleSpec {
  double center = 1.0;  // |x0| coordinate of each bump center
  double width = 64.0;  // chi argument scale; ball radius = 1/width

  double ball_radius() const { return 1.0 / width; }
  double outer_radius() const { return center * std::sqrt(2.0) + ball_radius(); }
};

inline double eta(double x1, double x2, const QuadrupoleSpec& q = {}) {
  double v = 0.0;
  for (int a1 : {-1, 1})
    for (int a2 : {-1, 1})
      v += a1 * a2 * chi2(q.width * (x1 - a1 * q.center), q.width * (x2 - a2 * q.center));
  return v;
}

inline std::function<double(double, double)> make_eta(const QuadrupoleSpec& q = {}) {
  return [q](double x1, double x2) { return eta(x1, x2, q); };
}

inline std::function<double(double, double)> make_chi() {
  return [](double x1, double x2) { return chi2(x1, x2); };
}

// ---------------------------------------------------------------------------
// Multiscale lattice f_M = 1/(sqrt(M) log M) * sum_k k^{-2 alpha} eta(2^k x).
// ---------------------------------------------------------------------------

struct IndexWindow {
  long long a = 1;
  long long b = 1;
};

/// The paper's index window: (M, 2^M + M) at alpha = 1/2, else floor/ceil of
/// the 1/(1-2 alpha) powers of 2^M and 2^M + M.
inline IndexWindow paper_index_window(int M, double alpha) {
  if (M < 2) throw std::invalid_argument("paper_index_window: M must be >= 2");
  if (!(alpha > 0.0 && alpha <= 0.5)) throw std::invalid_argument("paper_index_window: alpha must lie in (0, 1/2]");
  if (alpha == 0.5) {
    return {M, (1LL << M) + M};
  }
  const double e = 1.0 / (1.0 - 2.0 * alpha);
  const double lo = std::pow(std::pow(2.0, M), e);
  const double hi = std::pow(std::pow(2.0, M) + M, e);
  return {static_cast<long long>(std::floor(lo)), static_cast<long long>(std::ceil(hi))};
}

struct LatticeSpec {
  int M = 2;
  double alpha = 0.5;
  IndexWindow window{1, 1};           // desk-scale override; paper_index_window gives the literal one
  QuadrupoleSpec quadrupole{1.0, 64.0};
  double amplitude = 1.0;             // overall multiplier for solver-scale experiments

  double prefactor() const { return amplitude / (std::sqrt(static_cast<double>(M)) * std::log2(static_cast<double>(M))); }

  void validate() const {
    if (M < 2) throw std::invalid_argument("LatticeSpec: M must be >= 2");
    if (!(alpha > 0.0 && alpha <= 0.5)) throw std::invalid_argument("LatticeSpec: alpha must lie in (0, 1/2]");
    if (window.a < 1 || window.a > window.b) throw std::invalid_argument("LatticeSpec: window must satisfy 1 <= a <= b");
  }

  double weight(long long k) const { return std::pow(static_cast<double>(k), -2.0 * alpha); }

  double weight_sum() const {
    double s = 0.0;
    for (long long k = window.a; k <= window.b; ++k) s += weight(k);
    return s;
  }

  double finest_ball_radius() const { return std::pow(2.0, -static_cast<double>(window.b)) / quadrupole.width; }

  double support_radius() const {
    return std::pow(2.0, -static_cast<double>(window.a)) * quadrupole.outer_radius();
  }

  double sample(double x1, double x2) const {
    double v = 0.0;
    for (long long k = window.a; k <= window.b; ++k) {
      const double s = std::pow(2.0, static_cast<double>(k));
      const double e = eta(s * x1, s * x2, quadrupole);
      if (e != 0.0) v += weight(k) * e;  // distinct scales have disjoint supports
    }
    return prefactor() * v;
  }

  std::function<double(double, double)> sampler() const {
    LatticeSpec copy = *this;
    return [copy](double x1, double x2) { return copy.sample(x1, x2); };
  }

  /// Bounding boxes of supp(f_M) in the open positive quadrant, one per scale.
  std::vector<std::array<double, 4>> quadrant_boxes() const {
    std::vector<std::array<double, 4>> boxes;
    for (long long k = window.a; k <= window.b; ++k) {
      const double s = std::pow(2.0, -static_cast<double>(k));
      const double c = s * quadrupole.center;
      const double r = s * quadrupole.ball_radius();
      boxes.push_back({c - r, c + r, c - r, c + r});
    }
    return boxes;
  }
};

/// Samples f_M onto a grid; errors when the finest scale is unresolvable.
inline GridField make_fM(const LatticeSpec& spec, int n, double box) {
  spec.validate();
  GridField probe = GridField::zeros(n, box);
  const double needed = spec.finest_ball_radius() / 8.0;
  if (probe.dx() > needed)
    throw std::invalid_argument(
        "make_fM: finest lattice scale unresolvable (grid spacing " + std::to_string(probe.dx()) +
        " > " + std::to_string(needed) + "); override k_range or widen the bumps");
  return sample_field(n, box, spec.sampler());
}

// ---------------------------------------------------------------------------
// Deformation functional I_M = integral over the open positive quadrant of
// f(x) x1 x2 / |x|^4.
// ---------------------------------------------------------------------------

inline double quadrant_kernel(double x1, double x2) {
  const double r2 = x1 * x1 + x2 * x2;
  return x1 * x2 / (r2 * r2);
}

/// Quadrature route, for samplers with known support boxes in the quadrant.
inline double compute_IM(const std::function<double(double, double)>& f,
                         const std::vector<std::array<double, 4>>& quadrant_boxes, double tol = 1e-9) {
  double total = 0.0;
  for (const auto& b : quadrant_boxes) {
    if (!(b[0] > 0.0 && b[2] > 0.0)) throw std::invalid_argument("compute_IM: support box must sit in the open quadrant");
    total += adapt_quad([&](double x, double y) { return f(x, y) * quadrant_kernel(x, y); }, b[0], b[1], b[2], b[3],
                        tol)
                 .value;
  }
  return total;
}

struct IMGridReport {
  double value = 0.0;
  double symmetry_defect = 0.0;  // relative odd-odd defect of the input
  bool warned = false;
};

inline double odd_odd_defect(const GridField& f) {
  const int n = f.n;
  const double scale = std::max(f.max_abs(), 1e-300);
  double worst = 0.0;
  for (int i1 = 1; i1 < n; ++i1)
    for (int i2 = 1; i2 < n; ++i2) {
      const double v = f.at(i1, i2);
      worst = std::max(worst, std::abs(v + f.at(n - i1, i2)));
      worst = std::max(worst, std::abs(v + f.at(i1, n - i2)));
    }
  return worst / scale;
}

/// Grid route: plain Riemann sum over the open positive quadrant. The kernel
/// needs f to vanish near the origin; samples inside 2 dx of the origin are
/// included as-is, so callers get a finite answer for any finite field.
inline IMGridReport compute_IM(const GridField& f) {
  IMGridReport rep;
  rep.symmetry_defect = odd_odd_defect(f);
  if (rep.symmetry_defect > 1e-6) rep.warned = true;
  const int n = f.n;
  std::vector<double> acc;
  acc.reserve(static_cast<std::size_t>(n / 2) * (n / 2));
  for (int i1 = n / 2 + 1; i1 < n; ++i1)
    for (int i2 = n / 2 + 1; i2 < n; ++i2) {
      const double x1 = f.coord(i1), x2 = f.coord(i2);
      acc.push_back(f.at(i1, i2) * quadrant_kernel(x1, x2));
    }
  rep.value = pairwise_sum(acc) * f.dx() * f.dx();
  return rep;
}

// ---------------------------------------------------------------------------
// Oscillatory perturbation carriers phi and beta.
//   phi(x)  = (1/delta) sum_{a1,a2} a2 chi((x1 - a1 x01)/delta, (x2 - a2 x02)/delta)
//   beta(x) = sin(k x1) phi(x) / (k log2^alpha(k+1) sqrt(L))
// ---------------------------------------------------------------------------

struct PerturbationSpec {
  int k = 64;            // oscillation frequency, positive integer
  double delta = 0.0;    // bump width; 0 means the delta = min(...)/8 default
  Vec2 x0{1.0, 1.0};     // bump center, x01 * x02 != 0
  double L = 1 << 14;    // target deformation magnitude
  double r0 = 1.0;       // radius of the large-deformation ball around x0

  double resolved_delta() const {
    if (delta > 0.0) return delta;
    return std::min(std::min(std::abs(x0.x1), std::abs(x0.x2)), r0) / 8.0;
  }

  double amplitude(double alpha) const {
    return 1.0 / (k * std::pow(std::log2(static_cast<double>(k) + 1.0), alpha) * std::sqrt(L));
  }

  void validate() const {
    if (k < 1) throw std::invalid_argument("PerturbationSpec: k must be a positive integer");
    if (x0.x1 == 0.0 || x0.x2 == 0.0) throw std::invalid_argument("PerturbationSpec: need x01 * x02 != 0");
    if (!(L > 0.0)) throw std::invalid_argument("PerturbationSpec: L must be positive");
    const double d = resolved_delta();
    const double m = std::min(std::abs(x0.x1), std::abs(x0.x2));
    if (!(d > 0.0) || d >= m)
      throw std::invalid_argument("PerturbationSpec: delta too large, the four bumps must stay disjoint");
    if (d > r0) throw std::invalid_argument("PerturbationSpec: delta exceeds the deformation ball radius r0");
  }
};

inline double phi_carrier(double x1, double x2, double delta, const Vec2& x0) {
  double v = 0.0;
  for (int a1 : {-1, 1})
    for (int a2 : {-1, 1})
      v += a2 * chi2((x1 - a1 * x0.x1) / delta, (x2 - a2 * x0.x2) / delta);
  return v / delta;
}

inline std::function<double(double, double)> make_phi(double delta, const Vec2& x0) {
  return [delta, x0](double x1, double x2) { return phi_carrier(x1, x2, delta, x0); };
}

inline std::function<double(double, double)> make_beta_sampler(const PerturbationSpec& spec, double alpha) {
  spec.validate();
  const double d = spec.resolved_delta();
  const double amp = spec.amplitude(alpha);
  const Vec2 x0 = spec.x0;
  const int k = spec.k;
  return [d, amp, x0, k](double x1, double x2) {
    return amp * std::sin(k * x1) * phi_carrier(x1, x2, d, x0);
  };
}

/// Samples beta onto a grid; rejects under-resolved oscillation (fewer than 8
/// grid points per 2 pi / k wavelength).
inline GridField make_beta(const PerturbationSpec& spec, double alpha, int n, double box) {
  spec.validate();
  const double pts_per_osc = static_cast<double>(n) / (spec.k * box);
  if (pts_per_osc < 8.0)
    throw std::invalid_argument("make_beta: oscillation unresolvable, only " + std::to_string(pts_per_osc) +
                                " grid points per wavelength (need >= 8)");
  return sample_field(n, box, make_beta_sampler(spec, alpha));
}

inline GridField make_phi_field(const PerturbationSpec& spec, int n, double box) {
  spec.validate();
  return sample_field(n, box, make_phi(spec.resolved_delta(), spec.x0));
}

/// Support boxes of beta (or phi) in the open positive quadrant: one ball.
inline std::vector<std::array<double, 4>> beta_quadrant_boxes(const PerturbationSpec& spec) {
  const double d = spec.resolved_delta();
  const double c1 = std::abs(spec.x0.x1), c2 = std::abs(spec.x0.x2);
  return {{c1 - d, c1 + d, c2 - d, c2 + d}};
}

}  // namespace logvort
