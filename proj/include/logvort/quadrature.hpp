#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "logvort/common.hpp"

namespace logvort {

namespace detail {

// Gauss-Legendre 15-point nodes/weights on [-1, 1].
inline const std::array<double, 15>& gl15_nodes() {
  static const std::array<double, 15> x = {
      -0.9879925180204854, -0.9372733924007060, -0.8482065834104272, -0.7244177313601701,
      -0.5709721726085388, -0.3941513470775634, -0.2011940939974345, 0.0,
      0.2011940939974345,  0.3941513470775634,  0.5709721726085388,  0.7244177313601701,
      0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
  return x;
}

inline const std::array<double, 15>& gl15_weights() {
  static const std::array<double, 15> w = {
      0.0307532419961173, 0.0703660474881081, 0.1071592204671719, 0.1395706779261543,
      0.1662692058169939, 0.1861610000155622, 0.1984314853271116, 0.2025782419255613,
      0.1984314853271116, 0.1861610000155622, 0.1662692058169939, 0.1395706779261543,
      0.1071592204671719, 0.0703660474881081, 0.0307532419961173};
  return w;
}

}  // namespace detail

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  std::int64_t evals = 0;
};

struct QuadResultC {
  std::complex<double> value{0.0, 0.0};
  double error = 0.0;
  std::int64_t evals = 0;
};

/// Single-panel tensor Gauss-Legendre 15x15.
template <typename F>
auto gl15_panel(const F& f, double ax, double bx, double ay, double by) {
  const auto& xs = detail::gl15_nodes();
  const auto& ws = detail::gl15_weights();
  const double cx = 0.5 * (ax + bx), hx = 0.5 * (bx - ax);
  const double cy = 0.5 * (ay + by), hy = 0.5 * (by - ay);
  using R = decltype(f(0.0, 0.0));
  R acc{};
  for (int i = 0; i < 15; ++i) {
    R row{};
    for (int j = 0; j < 15; ++j) row += f(cx + hx * xs[i], cy + hy * xs[j]) * ws[j];
    acc += row * ws[i];
  }
  return acc * (hx * hy);
}

namespace detail {

template <typename R, typename F>
void adapt_quad2d(const F& f, double ax, double bx, double ay, double by, double tol, int depth, R& total,
                  double& err, std::int64_t& evals, std::int64_t budget, R coarse) {
  R fine{};
  R sub[4];
  const double mx = 0.5 * (ax + bx), my = 0.5 * (ay + by);
  sub[0] = gl15_panel(f, ax, mx, ay, my);
  sub[1] = gl15_panel(f, mx, bx, ay, my);
  sub[2] = gl15_panel(f, ax, mx, my, by);
  sub[3] = gl15_panel(f, mx, bx, my, by);
  fine = sub[0] + sub[1] + sub[2] + sub[3];
  evals += 4 * 225;
  if (evals > budget)
    throw std::runtime_error("adaptive quadrature: node budget exceeded (" + std::to_string(evals) +
                             " evaluations); refine the problem or raise the budget");
  const double diff = std::abs(fine - coarse);
  if (diff <= tol || depth >= 14) {
    total += fine;
    err += diff;
    return;
  }
  const double quarter[4][4] = {{ax, mx, ay, my}, {mx, bx, ay, my}, {ax, mx, my, by}, {mx, bx, my, by}};
  for (int q = 0; q < 4; ++q)
    adapt_quad2d(f, quarter[q][0], quarter[q][1], quarter[q][2], quarter[q][3], tol / 4.0, depth + 1, total, err,
                 evals, budget, sub[q]);
}

}  // namespace detail

/// Adaptive tensor-Gauss quadrature of f over [ax,bx] x [ay,by].
template <typename F>
QuadResult adapt_quad(const F& f, double ax, double bx, double ay, double by, double tol = 1e-9,
                      std::int64_t budget = (std::int64_t)1 << 28) {
  QuadResult r;
  const double coarse = gl15_panel(f, ax, bx, ay, by);
  r.evals = 225;
  detail::adapt_quad2d(f, ax, bx, ay, by, tol, 0, r.value, r.error, r.evals, budget, coarse);
  return r;
}

/// Complex-valued variant (for oscillatory integrands).
template <typename F>
QuadResultC adapt_quad_complex(const F& f, double ax, double bx, double ay, double by, double tol = 1e-9,
                               std::int64_t budget = (std::int64_t)1 << 28) {
  QuadResultC r;
  const std::complex<double> coarse = gl15_panel(f, ax, bx, ay, by);
  r.evals = 225;
  detail::adapt_quad2d(f, ax, bx, ay, by, tol, 0, r.value, r.error, r.evals, budget, coarse);
  return r;
}

/// Adaptive 1D Gauss-Legendre on [a, b].
template <typename F>
QuadResult adapt_quad_1d(const F& f, double a, double b, double tol = 1e-11, int depth = 0) {
  const auto& xs = detail::gl15_nodes();
  const auto& ws = detail::gl15_weights();
  auto panel = [&](double lo, double hi) {
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    double acc = 0.0;
    for (int i = 0; i < 15; ++i) acc += f(c + h * xs[i]) * ws[i];
    return acc * h;
  };
  const double coarse = panel(a, b);
  const double m = 0.5 * (a + b);
  const double fine = panel(a, m) + panel(m, b);
  if (std::abs(fine - coarse) <= tol || depth >= 40) return {fine, std::abs(fine - coarse), 45};
  QuadResult l = adapt_quad_1d(f, a, m, tol / 2.0, depth + 1);
  QuadResult r = adapt_quad_1d(f, m, b, tol / 2.0, depth + 1);
  return {l.value + r.value, l.error + r.error, l.evals + r.evals};
}

}  // namespace logvort
