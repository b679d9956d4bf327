#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "logvort/euler.hpp"
#include "logvort/initdata.hpp"

namespace logvort {

// ---------------------------------------------------------------------------
// Tracer particles carrying flow-map Jacobians. Positions follow
// dX/dt = u(X, t); Jacobians follow the variational equation dJ/dt = grad u(X) J.
// ---------------------------------------------------------------------------

struct TracerSet {
  std::vector<Vec2> seeds;
  std::vector<Vec2> positions;
  std::vector<Mat2> jacobians;
  std::vector<std::uint8_t> flagged;  // left the trusted core region

  std::size_t size() const { return seeds.size(); }

  void add(const Vec2& seed) {
    seeds.push_back(seed);
    positions.push_back(seed);
    jacobians.push_back(Mat2::identity());
    flagged.push_back(0);
  }

  static TracerSet single(const Vec2& seed) {
    TracerSet t;
    t.add(seed);
    return t;
  }

  /// Lattice of spacing h over [lo, hi]^2 keeping points where keep(x) holds,
  /// plus the origin and a small ring around it.
  static TracerSet lattice(double lo, double hi, double h, const std::function<bool(Vec2)>& keep,
                           bool with_origin_ring = true) {
    TracerSet t;
    if (with_origin_ring) {
      t.add({0.0, 0.0});
      for (int a = 0; a < 8; ++a) {
        const double th = 2.0 * kPi * a / 8.0;
        t.add({2.0 * h * std::cos(th), 2.0 * h * std::sin(th)});
      }
    }
    const int m = static_cast<int>(std::floor((hi - lo) / h)) + 1;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const Vec2 x{lo + i * h, lo + j * h};
        if (keep(x)) t.add(x);
      }
    return t;
  }

  double max_det_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
      if (!flagged[i]) worst = std::max(worst, std::abs(jacobians[i].det() - 1.0));
    return worst;
  }
};

/// RK4 update of positions and Jacobians against the four stage samplers.
/// Tracers leaving |x|_inf > core_radius are flagged and excluded from norms.
inline void advect(TracerSet& tracers, const VelocitySampler& s1, const VelocitySampler& s2,
                   const VelocitySampler& s3, const VelocitySampler& s4, double dt, double core_radius) {
  const std::size_t m = tracers.size();
  parallel_for(static_cast<std::int64_t>(m), [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      Vec2 x = tracers.positions[i];
      Mat2 J = tracers.jacobians[i];
      Vec2 u1v;
      Mat2 g;
      s1.velocity_and_grad(x, u1v, g);
      const Vec2 k1x = u1v;
      const Mat2 k1J = g * J;

      Vec2 u2v;
      s2.velocity_and_grad(x + (0.5 * dt) * k1x, u2v, g);
      const Vec2 k2x = u2v;
      const Mat2 k2J = g * (J + k1J * (0.5 * dt));

      Vec2 u3v;
      s3.velocity_and_grad(x + (0.5 * dt) * k2x, u3v, g);
      const Vec2 k3x = u3v;
      const Mat2 k3J = g * (J + k2J * (0.5 * dt));

      Vec2 u4v;
      s4.velocity_and_grad(x + dt * k3x, u4v, g);
      const Vec2 k4x = u4v;
      const Mat2 k4J = g * (J + k3J * dt);

      x = x + (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
      J = J + (k1J + k2J * 2.0 + k3J * 2.0 + k4J) * (dt / 6.0);
      tracers.positions[i] = x;
      tracers.jacobians[i] = J;
      if (x.norm_inf() > core_radius) tracers.flagged[i] = 1;
    }
  });
}

/// Same signature against closed-form flows (synthetic test fields).
struct AnalyticFlow {
  std::function<Vec2(Vec2)> velocity;
  std::function<Mat2(Vec2)> grad;
};

inline void advect(TracerSet& tracers, const AnalyticFlow& flow, double dt, int steps) {
  for (int s = 0; s < steps; ++s) {
    for (std::size_t i = 0; i < tracers.size(); ++i) {
      Vec2 x = tracers.positions[i];
      Mat2 J = tracers.jacobians[i];
      const Vec2 k1x = flow.velocity(x);
      const Mat2 k1J = flow.grad(x) * J;
      const Vec2 x2 = x + (0.5 * dt) * k1x;
      const Vec2 k2x = flow.velocity(x2);
      const Mat2 k2J = flow.grad(x2) * (J + k1J * (0.5 * dt));
      const Vec2 x3 = x + (0.5 * dt) * k2x;
      const Vec2 k3x = flow.velocity(x3);
      const Mat2 k3J = flow.grad(x3) * (J + k2J * (0.5 * dt));
      const Vec2 x4 = x + dt * k3x;
      const Vec2 k4x = flow.velocity(x4);
      const Mat2 k4J = flow.grad(x4) * (J + k3J * dt);
      tracers.positions[i] = x + (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
      tracers.jacobians[i] = J + (k1J + k2J * 2.0 + k3J * 2.0 + k4J) * (dt / 6.0);
    }
  }
}

/// Max-abs Jacobian entry over unflagged tracers seeded inside the region.
inline double deformation_norm(const TracerSet& tracers, const Vec2& center, double radius) {
  double worst = -1.0;
  for (std::size_t i = 0; i < tracers.size(); ++i) {
    if (tracers.flagged[i]) continue;
    if ((tracers.seeds[i] - center).norm() > radius) continue;
    worst = std::max(worst, tracers.jacobians[i].norm_inf());
  }
  if (worst < 0.0) throw std::invalid_argument("deformation_norm: no tracers inside the region");
  return worst;
}

// ---------------------------------------------------------------------------
// Velocity gradient at the origin. For odd-odd vorticity grad u(0) is diagonal
// and |grad u(0)|_inf = (4/pi) * integral over the open quadrant of
// omega x1 x2 / |x|^4. The spectral route evaluates the derivative mode sums
// at x = 0 directly; the quadrature route is the grid Riemann sum.
// ---------------------------------------------------------------------------

struct OriginGradient {
  double quadrature = 0.0;     // (4/pi) quadrant integral
  double spectral = 0.0;       // |grad u(0)|_inf from mode sums
  double offdiag = 0.0;        // max |off-diagonal| of grad u(0), symmetry residual
  double symmetry_defect = 0.0;
  bool warned = false;
};

inline OriginGradient velocity_gradient_at_origin(const GridField& omega) {
  OriginGradient out;
  const IMGridReport im = compute_IM(omega);
  out.quadrature = (4.0 / kPi) * im.value;
  out.symmetry_defect = im.symmetry_defect;
  out.warned = im.warned;

  const SpectralField W = to_spectral(omega);
  // grad u entries at x=0: sum over modes of multiplier * omega_hat / measure
  std::complex<double> g11{}, g12{}, g21{}, g22{};
  const int n = W.n;
  for (int j1 = 0; j1 < n; ++j1) {
    const int s1 = W.signed_index(j1);
    if (s1 == -n / 2) continue;
    for (int j2 = 0; j2 < n; ++j2) {
      const int s2 = W.signed_index(j2);
      if (s2 == -n / 2 || (s1 == 0 && s2 == 0)) continue;
      const double xi1 = s1 / W.box, xi2 = s2 / W.box;
      const double inv = 1.0 / (xi1 * xi1 + xi2 * xi2);
      const std::complex<double> w = W.at(j1, j2);
      // u1_hat = -i xi2 inv w, u2_hat = i xi1 inv w; d_a multiplies by i xi_a
      g11 += (xi1 * xi2 * inv) * w;
      g12 += (xi2 * xi2 * inv) * w;
      g21 += (-xi1 * xi1 * inv) * w;
      g22 += (-xi1 * xi2 * inv) * w;
    }
  }
  const double im_measure = 1.0 / W.measure();
  const Mat2 G{g11.real() * im_measure, g12.real() * im_measure, g21.real() * im_measure, g22.real() * im_measure};
  out.spectral = std::max(std::abs(G.a11), std::abs(G.a22));
  out.offdiag = std::max(std::abs(G.a12), std::abs(G.a21));
  return out;
}

// ---------------------------------------------------------------------------
// Deformation lower-bound chain: at every sampled time,
//   |grad u(0,t)|_inf >= (4/pi) ||grad X^t||^{-4}_{Linf(B_R)} I_M(0),
// and the origin Jacobian grows exactly like exp of the integrated diagonal.
// ---------------------------------------------------------------------------

struct DeformationSample {
  double t = 0.0;
  double gradu0_inf = 0.0;     // spectral |grad u(0,t)|_inf
  double deformation = 0.0;    // ||grad X^t||_{Linf(B_R)} from the tracer cloud
  double origin_j_inf = 0.0;   // |J|_inf of the origin tracer
  double origin_offdiag = 0.0;
  double origin_drift = 0.0;   // |X^t(0)|
};

struct DeformationReport {
  double IM0 = 0.0;
  double min_slack = 0.0;          // min over samples of lhs / rhs
  double max_exp_rel_err = 0.0;    // origin J vs exp(integral of |grad u(0)|)
  double max_origin_drift = 0.0;
  double max_origin_offdiag = 0.0;
  bool coverage_ok = true;
  bool advisory = false;
  std::vector<DeformationSample> samples;
};

inline DeformationReport deformation_lower_bound_check(const std::vector<DeformationSample>& samples, double IM0,
                                                       bool coverage_ok = true) {
  if (samples.empty()) throw std::invalid_argument("deformation_lower_bound_check: empty series");
  DeformationReport rep;
  rep.IM0 = IM0;
  rep.samples = samples;
  rep.coverage_ok = coverage_ok;
  rep.advisory = !coverage_ok;
  rep.min_slack = std::numeric_limits<double>::infinity();
  double integral = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const double rhs = (4.0 / kPi) * IM0 / std::pow(std::max(s.deformation, 1.0), 4.0);
    if (rhs > 0.0) rep.min_slack = std::min(rep.min_slack, s.gradu0_inf / rhs);
    if (i > 0) {
      const auto& p = samples[i - 1];
      integral += 0.5 * (s.t - p.t) * (s.gradu0_inf + p.gradu0_inf);
    }
    const double expected = std::exp(integral);
    if (expected > 1.0 + 1e-9 || s.origin_j_inf > 1.0 + 1e-9)
      rep.max_exp_rel_err = std::max(rep.max_exp_rel_err, std::abs(s.origin_j_inf / expected - 1.0));
    rep.max_origin_drift = std::max(rep.max_origin_drift, s.origin_drift);
    rep.max_origin_offdiag = std::max(rep.max_origin_offdiag, s.origin_offdiag);
  }
  return rep;
}

}  // namespace logvort
