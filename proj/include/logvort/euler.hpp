#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "logvort/field.hpp"
#include "logvort/norms.hpp"

namespace logvort {

// ---------------------------------------------------------------------------
// Biot-Savart inversion. Sign convention: omega = d_{x2} u1 - d_{x1} u2, so
// u = (-d_{x2} psi, d_{x1} psi) with psi = (-Lap)^{-1} omega. The curl
// consistency invariant (recompute omega from u) pins this once and for all.
// ---------------------------------------------------------------------------

struct VelocityField {
  GridField u1, u2;
};

struct VelocityModes {
  SpectralField u1, u2;
};

inline VelocityModes biot_savart_modes(const SpectralField& W) {
  const int n = W.n;
  const double scale = std::abs(W.at(0, 0));
  if (scale > 1e-10 * std::max(W.max_abs(), 1e-300) && scale > 1e-12)
    throw std::invalid_argument("biot_savart: vorticity must be mean-free (zero mode " + std::to_string(scale) + ")");
  VelocityModes V{SpectralField::zeros(n, W.box), SpectralField::zeros(n, W.box)};
  V.u1.time = V.u2.time = W.time;
  for (int j1 = 0; j1 < n; ++j1) {
    const int s1 = W.signed_index(j1);
    for (int j2 = 0; j2 < n; ++j2) {
      const int s2 = W.signed_index(j2);
      if ((s1 == 0 && s2 == 0) || s1 == -n / 2 || s2 == -n / 2) continue;
      const double xi1 = s1 / W.box, xi2 = s2 / W.box;
      const double inv = 1.0 / (xi1 * xi1 + xi2 * xi2);
      const std::complex<double> w = W.at(j1, j2);
      V.u1.at(j1, j2) = std::complex<double>(0.0, -xi2 * inv) * w;
      V.u2.at(j1, j2) = std::complex<double>(0.0, xi1 * inv) * w;
    }
  }
  return V;
}

inline VelocityField biot_savart(const GridField& omega) {
  const VelocityModes V = biot_savart_modes(to_spectral(omega));
  return {to_grid(V.u1), to_grid(V.u2)};
}

/// omega = d_{x2} u1 - d_{x1} u2 recovered from a velocity field.
inline GridField curl_of(const VelocityField& u) {
  return to_grid(derivative(to_spectral(u.u1), 1)) - to_grid(derivative(to_spectral(u.u2), 0));
}

// ---------------------------------------------------------------------------
// Off-grid velocity evaluation: spectral refinement (zero-padded inverse
// transform, factor `oversample`) followed by tensor-product Lagrange
// interpolation of order `order`. Grid points evaluate exactly, so the
// odd-odd flow invariants (pinned origin, invariant axes) survive sampling.
// ---------------------------------------------------------------------------

struct SamplerOptions {
  int oversample = 2;
  int order = 8;
};

class VelocitySampler {
 public:
  VelocitySampler() = default;

  VelocitySampler(const SpectralField& omega_hat, const SamplerOptions& opt) : order_(opt.order) {
    if (order_ < 2 || order_ > 16) throw std::invalid_argument("VelocitySampler: order must lie in [2, 16]");
    const VelocityModes V = biot_savart_modes(omega_hat);
    const SpectralField g11 = derivative(V.u1, 0);
    const SpectralField g12 = derivative(V.u1, 1);
    const SpectralField g21 = derivative(V.u2, 0);
    const int fine_n = omega_hat.n * std::max(1, opt.oversample);
    u1_ = refine(V.u1, fine_n);
    u2_ = refine(V.u2, fine_n);
    g11_ = refine(g11, fine_n);
    g12_ = refine(g12, fine_n);
    g21_ = refine(g21, fine_n);
    max_speed_ = std::max(u1_.max_abs(), u2_.max_abs());
    max_grad_ = std::max(std::max(g11_.max_abs(), g12_.max_abs()), g21_.max_abs());
  }

  double max_speed() const { return max_speed_; }
  double max_grad() const { return max_grad_; }
  const GridField& u1_grid() const { return u1_; }
  const GridField& u2_grid() const { return u2_; }

  Vec2 velocity(const Vec2& x) const {
    double out[2];
    const GridField* fields[2] = {&u1_, &u2_};
    interp(x, fields, 2, out);
    return {out[0], out[1]};
  }

  /// Velocity and gradient in one stencil pass. The trace-free structure is
  /// enforced exactly via g22 = -g11.
  void velocity_and_grad(const Vec2& x, Vec2& u, Mat2& g) const {
    double out[5];
    const GridField* fields[5] = {&u1_, &u2_, &g11_, &g12_, &g21_};
    interp(x, fields, 5, out);
    u = {out[0], out[1]};
    g = {out[2], out[3], out[4], -out[2]};
  }

 private:
  static SpectralField refine(const SpectralField& F, int fine_n) {
    if (fine_n == F.n) return F;
    SpectralField G = SpectralField::zeros(fine_n, F.box);
    G.time = F.time;
    for (int j1 = 0; j1 < F.n; ++j1) {
      const int s1 = F.signed_index(j1);
      if (s1 == -F.n / 2) continue;
      for (int j2 = 0; j2 < F.n; ++j2) {
        const int s2 = F.signed_index(j2);
        if (s2 == -F.n / 2) continue;
        G.at_signed(s1, s2) = F.at(j1, j2);
      }
    }
    return G;
  }

  void interp(const Vec2& x, const GridField* const* fields, int nf, double* out) const {
    const int n = u1_.n;
    const double dx = u1_.dx();
    const int p = order_;
    const double u = (x.x1 + kPi * u1_.box) / dx;
    const double v = (x.x2 + kPi * u1_.box) / dx;
    const int b1 = static_cast<int>(std::floor(u)) - (p / 2 - 1);
    const int b2 = static_cast<int>(std::floor(v)) - (p / 2 - 1);
    double w1[16], w2[16];
    lagrange_weights(u - b1, p, w1);
    lagrange_weights(v - b2, p, w2);
    for (int f = 0; f < nf; ++f) out[f] = 0.0;
    for (int i = 0; i < p; ++i) {
      const int i1 = wrap(b1 + i, n);
      double rowacc[5] = {0, 0, 0, 0, 0};
      for (int j = 0; j < p; ++j) {
        const int i2 = wrap(b2 + j, n);
        const std::size_t idx = static_cast<std::size_t>(i1) * n + i2;
        for (int f = 0; f < nf; ++f) rowacc[f] += w2[j] * fields[f]->values[idx];
      }
      for (int f = 0; f < nf; ++f) out[f] += w1[i] * rowacc[f];
    }
  }

  static int wrap(int i, int n) {
    i %= n;
    return i < 0 ? i + n : i;
  }

  /// Cardinal Lagrange weights at offset t in [p/2-1, p/2] grid units.
  static void lagrange_weights(double t, int p, double* w) {
    for (int i = 0; i < p; ++i) {
      double num = 1.0, den = 1.0;
      for (int j = 0; j < p; ++j) {
        if (j == i) continue;
        num *= t - j;
        den *= static_cast<double>(i - j);
      }
      w[i] = num / den;
    }
  }

  GridField u1_, u2_, g11_, g12_, g21_;
  int order_ = 8;
  double max_speed_ = 0.0;
  double max_grad_ = 0.0;
};

// ---------------------------------------------------------------------------
// Solver state and diagnostics.
// ---------------------------------------------------------------------------

struct EulerState {
  GridField omega;
  double time = 0.0;
  std::vector<GridField> passive;        // co-transported scalars (W, p, q)
  std::vector<std::string> passive_names;
};

struct DiagRow {
  double t = 0, dt = 0, energy = 0, enstrophy = 0, l1 = 0, l4 = 0, linf = 0, grad_l4 = 0, h2 = 0, h1alpha = 0,
         gradu_inf = 0, bkm_ratio = 0, tail_fraction = 0;
};

struct InitialNorms {
  double l2 = 0, linf = 0;
};

inline double tail_fraction_of(const SpectralField& W) {
  const int n = W.n;
  double tail = 0.0, total = 0.0;
  for (int j1 = 0; j1 < n; ++j1) {
    const int a1 = std::abs(W.signed_index(j1));
    for (int j2 = 0; j2 < n; ++j2) {
      const int a2 = std::abs(W.signed_index(j2));
      const int a = std::max(a1, a2);
      const double m = std::norm(W.at(j1, j2));
      total += m;
      if (3 * a <= n && 9 * a > 2 * n) tail += m;  // outer third of the retained band
    }
  }
  return total > 0.0 ? tail / total : 0.0;
}

inline double energy_of(const SpectralField& W) {
  std::vector<double> acc(W.modes.size(), 0.0);
  for (int j1 = 0; j1 < W.n; ++j1)
    for (int j2 = 0; j2 < W.n; ++j2) {
      const double x = W.xi_abs(j1, j2);
      if (x > 0.0) acc[static_cast<std::size_t>(j1) * W.n + j2] = std::norm(W.at(j1, j2)) / (x * x);
    }
  return std::sqrt(pairwise_sum(acc) / W.measure());
}

/// Norm panel for one state; `init` supplies the BKM denominator's frozen
/// initial-data norms.
inline DiagRow diagnostics_norm_timeseries(const EulerState& s, const InitialNorms& init, double alpha = 0.5) {
  DiagRow r;
  r.t = s.time;
  const SpectralField W = to_spectral(s.omega);
  r.energy = energy_of(W);
  r.enstrophy = s.omega.l2();
  r.l1 = lp_norm(s.omega, 1.0);
  r.l4 = lp_norm(s.omega, 4.0);
  r.linf = s.omega.max_abs();
  const GridField w1 = to_grid(derivative(W, 0));
  const GridField w2 = to_grid(derivative(W, 1));
  std::vector<double> acc(w1.size());
  for (std::size_t i = 0; i < acc.size(); ++i) {
    const double g2 = w1.values[i] * w1.values[i] + w2.values[i] * w2.values[i];
    acc[i] = g2 * g2;
  }
  r.grad_l4 = std::pow(pairwise_sum(acc) * s.omega.dx() * s.omega.dx(), 0.25);
  r.h2 = std::sqrt(sobolev_norm_inhom_sq(W, 2.0));
  r.h1alpha = log_sobolev_norm(W, {1.0, alpha});
  const VelocityModes V = biot_savart_modes(W);
  double gi = 0.0;
  gi = std::max(gi, to_grid(derivative(V.u1, 0)).max_abs());
  gi = std::max(gi, to_grid(derivative(V.u1, 1)).max_abs());
  gi = std::max(gi, to_grid(derivative(V.u2, 0)).max_abs());
  gi = std::max(gi, to_grid(derivative(V.u2, 1)).max_abs());
  r.gradu_inf = gi;
  r.bkm_ratio = gi / (1.0 + init.l2 + init.linf * std::log2(2.0 + r.grad_l4));
  r.tail_fraction = tail_fraction_of(W);
  return r;
}

// ---------------------------------------------------------------------------
// RK4 pseudo-spectral stepping with 2/3 dealiasing and CFL-adaptive dt.
// ---------------------------------------------------------------------------

struct SolverConfig {
  double cfl = 0.5;
  double dt_max = 0.02;
  double dt_init = 0.0;        // 0 -> start from dt_max, then clip by CFL
  int max_halvings = 10;       // CFL floor: dt may shrink by at most 2^10
  double tail_abort = 1e-4;    // abort when the spectral tail carries this enstrophy fraction
  bool dealias_products = true;
  SamplerOptions sampler;      // off-grid evaluation for tracers
};

namespace detail {

struct SpectralState {
  SpectralField omega;
  std::vector<SpectralField> passive;
  double time = 0.0;
};

struct StageSlope {
  SpectralField domega;
  std::vector<SpectralField> dpassive;
};

/// -(u . grad) applied to omega and every passive field, dealiased.
inline StageSlope transport_rhs(const SpectralState& s, const SolverConfig& cfg, double* max_speed_out) {
  StageSlope out;
  const VelocityModes V = biot_savart_modes(s.omega);
  const GridField u1 = to_grid(V.u1);
  const GridField u2 = to_grid(V.u2);
  if (max_speed_out) *max_speed_out = std::max(u1.max_abs(), u2.max_abs());
  auto advect = [&](const SpectralField& F) {
    const GridField f1 = to_grid(derivative(F, 0));
    const GridField f2 = to_grid(derivative(F, 1));
    GridField conv = GridField::zeros(F.n, F.box);
    for (std::size_t i = 0; i < conv.size(); ++i)
      conv.values[i] = -(u1.values[i] * f1.values[i] + u2.values[i] * f2.values[i]);
    SpectralField R = to_spectral(conv);
    return cfg.dealias_products ? dealias(R) : R;
  };
  out.domega = advect(s.omega);
  out.dpassive.reserve(s.passive.size());
  for (const auto& p : s.passive) out.dpassive.push_back(advect(p));
  return out;
}

}  // namespace detail

struct StepHookContext {
  const std::array<VelocitySampler, 4>* samplers = nullptr;  // stages t, t+dt/2, t+dt/2, t+dt
  double t = 0.0;
  double dt = 0.0;
};

struct RunOptions {
  double t_end = 1.0;
  SolverConfig config;
  int diag_every = 1;   // steps between diagnostic rows; 0 disables
  double alpha = 0.5;   // log order used in the h1alpha diagnostic column
  bool build_samplers = false;
  std::function<void(const StepHookContext&)> step_hook;        // runs before the state advances
  std::function<void(const EulerState&, const DiagRow&)> diag_hook;
};

struct RunResult {
  EulerState state;
  std::vector<DiagRow> diagnostics;
  bool aborted = false;
  std::string abort_reason;
  long long steps = 0;
};

/// Advances the vorticity (and passives) to t_end. When build_samplers is set,
/// the four RK stage velocity samplers are handed to step_hook each step so
/// tracers can integrate against the exact stage fields.
inline RunResult run_euler(const EulerState& initial, const RunOptions& opt) {
  const SolverConfig& cfg = opt.config;
  RunResult res;
  detail::SpectralState s;
  s.omega = dealias(to_spectral(initial.omega));
  s.omega.at(0, 0) = 0.0;  // mean-free projection; odd-odd data is already mean-free
  for (const auto& p : initial.passive) s.passive.push_back(dealias(to_spectral(p)));
  s.time = initial.time;

  const InitialNorms init{initial.omega.l2(), initial.omega.max_abs()};
  auto grid_state = [&](const detail::SpectralState& sp) {
    EulerState g;
    g.omega = to_grid(sp.omega);
    g.omega.time = sp.time;
    g.time = sp.time;
    for (const auto& p : sp.passive) g.passive.push_back(to_grid(p));
    g.passive_names = initial.passive_names;
    return g;
  };
  auto emit_diag = [&](double dt_used) {
    EulerState g = grid_state(s);
    DiagRow row = diagnostics_norm_timeseries(g, init, opt.alpha);
    row.dt = dt_used;
    res.diagnostics.push_back(row);
    if (opt.diag_hook) opt.diag_hook(g, row);
  };

  const double dx = initial.omega.dx();
  double dt = cfg.dt_init > 0.0 ? cfg.dt_init : cfg.dt_max;
  if (opt.diag_every > 0) emit_diag(0.0);

  while (s.time < opt.t_end - 1e-14) {
    double speed = 0.0;
    detail::StageSlope k1 = detail::transport_rhs(s, cfg, &speed);

    // CFL clamp with bounded halving
    double step_dt = std::min({cfg.dt_max, opt.t_end - s.time, dt});
    const double cfl_dt = speed > 0.0 ? cfg.cfl * dx / speed : cfg.dt_max;
    int halvings = 0;
    while (step_dt > cfl_dt && halvings < cfg.max_halvings) {
      step_dt *= 0.5;
      ++halvings;
    }
    if (step_dt > cfl_dt) {
      res.aborted = true;
      res.abort_reason = "CFL floor reached after " + std::to_string(cfg.max_halvings) +
                         " halvings (|u|_inf = " + std::to_string(speed) + ")";
      break;
    }

    auto axpy = [](const detail::SpectralState& base, double a, const detail::StageSlope& slope) {
      detail::SpectralState out = base;
      out.omega = base.omega + a * slope.domega;
      for (std::size_t i = 0; i < base.passive.size(); ++i) out.passive[i] = base.passive[i] + a * slope.dpassive[i];
      return out;
    };

    detail::SpectralState s2 = axpy(s, 0.5 * step_dt, k1);
    detail::StageSlope k2 = detail::transport_rhs(s2, cfg, nullptr);
    detail::SpectralState s3 = axpy(s, 0.5 * step_dt, k2);
    detail::StageSlope k3 = detail::transport_rhs(s3, cfg, nullptr);
    detail::SpectralState s4 = axpy(s, step_dt, k3);
    detail::StageSlope k4 = detail::transport_rhs(s4, cfg, nullptr);

    if (opt.step_hook) {
      StepHookContext ctx;
      std::array<VelocitySampler, 4> samplers;
      if (opt.build_samplers) {
        samplers[0] = VelocitySampler(s.omega, cfg.sampler);
        samplers[1] = VelocitySampler(s2.omega, cfg.sampler);
        samplers[2] = VelocitySampler(s3.omega, cfg.sampler);
        samplers[3] = VelocitySampler(s4.omega, cfg.sampler);
        ctx.samplers = &samplers;
      }
      ctx.t = s.time;
      ctx.dt = step_dt;
      opt.step_hook(ctx);
    }

    const double c = step_dt / 6.0;
    s.omega = s.omega + c * k1.domega + (2.0 * c) * k2.domega + (2.0 * c) * k3.domega + c * k4.domega;
    for (std::size_t i = 0; i < s.passive.size(); ++i)
      s.passive[i] = s.passive[i] + c * k1.dpassive[i] + (2.0 * c) * k2.dpassive[i] + (2.0 * c) * k3.dpassive[i] +
                     c * k4.dpassive[i];
    s.time += step_dt;
    ++res.steps;
    dt = std::min(cfg.dt_max, cfl_dt);

    const double tail = tail_fraction_of(s.omega);
    if (tail > cfg.tail_abort) {
      res.aborted = true;
      res.abort_reason = "spectral tail fraction " + std::to_string(tail) + " exceeded " +
                         std::to_string(cfg.tail_abort) + " at t = " + std::to_string(s.time);
      if (opt.diag_every > 0) emit_diag(step_dt);
      break;
    }
    if (opt.diag_every > 0 && (res.steps % opt.diag_every == 0 || s.time >= opt.t_end - 1e-14)) emit_diag(step_dt);
  }

  res.state = grid_state(s);
  return res;
}

/// One RK4 step of the bare vorticity equation (testing convenience).
inline EulerState step(const EulerState& state, double dt) {
  RunOptions opt;
  opt.t_end = state.time + dt;
  opt.config.dt_max = dt;
  opt.config.dt_init = dt;
  opt.diag_every = 0;
  RunResult r = run_euler(state, opt);
  if (r.aborted) throw std::runtime_error("step: " + r.abort_reason);
  return r.state;
}

/// Transport right-hand side -(u . grad) f as a grid field (testing surface).
inline GridField rhs_transport(const GridField& omega, const GridField& f, bool dealias_product = true) {
  detail::SpectralState s;
  s.omega = to_spectral(omega);
  s.passive.push_back(to_spectral(f));
  SolverConfig cfg;
  cfg.dealias_products = dealias_product;
  detail::StageSlope slope = detail::transport_rhs(s, cfg, nullptr);
  return to_grid(slope.dpassive[0]);
}

}  // namespace logvort
