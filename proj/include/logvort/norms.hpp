#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "logvort/field.hpp"

namespace logvort {

/// Parameters of the logarithmically weighted Sobolev scale. The logarithm is
/// base two unless natural_log is set (off by default).
struct NormParams {
  double s = 1.0;
  double alpha = 0.5;
  bool natural_log = false;

  double logw(double x) const { return natural_log ? std::log(x) : std::log2(x); }
};

inline double lp_norm(const GridField& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  if (!f.all_finite()) throw std::invalid_argument("lp_norm: non-finite samples");
  if (std::isinf(p)) return f.max_abs();
  std::vector<double> acc(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) acc[i] = std::pow(std::abs(f.values[i]), p);
  return std::pow(pairwise_sum(acc) * f.dx() * f.dx(), 1.0 / p);
}

/// Homogeneous Sobolev seminorm |f|_{H^s} from the mode sum.
inline double sobolev_seminorm(const SpectralField& F, double s) {
  if (s < 0.0) throw std::invalid_argument("sobolev_seminorm: s must be >= 0");
  std::vector<double> acc(F.modes.size());
  for (int j1 = 0; j1 < F.n; ++j1)
    for (int j2 = 0; j2 < F.n; ++j2) {
      const double x = F.xi_abs(j1, j2);
      const double w = (x == 0.0 && s > 0.0) ? 0.0 : std::pow(x, 2.0 * s);
      acc[static_cast<std::size_t>(j1) * F.n + j2] = w * std::norm(F.at(j1, j2));
    }
  return std::sqrt(pairwise_sum(acc) / F.measure());
}

inline double sobolev_seminorm(const GridField& f, double s) { return sobolev_seminorm(to_spectral(f), s); }

inline double sobolev_norm(const SpectralField& F, double s) {
  const double l2 = F.l2();
  const double semi = sobolev_seminorm(F, s);
  return std::sqrt(l2 * l2 + semi * semi);
}

inline double sobolev_norm(const GridField& f, double s) { return sobolev_norm(to_spectral(f), s); }

/// Inhomogeneous mode-sum norm, squared: sum of (1+|xi|^2)^s |f_hat|^2.
inline double sobolev_norm_inhom_sq(const SpectralField& F, double s) {
  std::vector<double> acc(F.modes.size());
  for (int j1 = 0; j1 < F.n; ++j1)
    for (int j2 = 0; j2 < F.n; ++j2) {
      const double x = F.xi_abs(j1, j2);
      acc[static_cast<std::size_t>(j1) * F.n + j2] = std::pow(1.0 + x * x, s) * std::norm(F.at(j1, j2));
    }
  return pairwise_sum(acc) / F.measure();
}

/// |f|_{H^{s,alpha}}: mode sum of |xi|^{2s} log^{2 alpha}(|xi|+1) |f_hat|^2.
inline double log_sobolev_seminorm(const SpectralField& F, const NormParams& p) {
  std::vector<double> acc(F.modes.size());
  for (int j1 = 0; j1 < F.n; ++j1)
    for (int j2 = 0; j2 < F.n; ++j2) {
      const double x = F.xi_abs(j1, j2);
      double w;
      if (x == 0.0) {
        w = 0.0;  // log(1) = 0, and |xi|^{2s} vanishes too for s > 0
      } else {
        const double lg = p.logw(x + 1.0);
        w = std::pow(x, 2.0 * p.s) * std::pow(lg, 2.0 * p.alpha);
      }
      acc[static_cast<std::size_t>(j1) * F.n + j2] = w * std::norm(F.at(j1, j2));
    }
  return std::sqrt(pairwise_sum(acc) / F.measure());
}

inline double log_sobolev_seminorm(const GridField& f, const NormParams& p) {
  return log_sobolev_seminorm(to_spectral(f), p);
}

inline double log_sobolev_norm(const SpectralField& F, const NormParams& p) {
  const double l2 = F.l2();
  const double semi = log_sobolev_seminorm(F, p);
  return std::sqrt(l2 * l2 + semi * semi);
}

inline double log_sobolev_norm(const GridField& f, const NormParams& p) { return log_sobolev_norm(to_spectral(f), p); }

// ---------------------------------------------------------------------------
// Real-variable (Gagliardo-type) seminorm at s = 1:
//   sqrt( double integral over |x-y| <= 1/2 of
//         |grad f(x) - grad f(y)|^2 / (|x-y|^2 log2^{1-2a}(1/|x-y|)) dy dx ).
// The offset disc is sampled in polar coordinates with geometrically spaced
// radial nodes from h_min = 2 dx up to 1/2; the innermost annulus below h_min
// is dropped, an O(h_min^2) truncation for smooth f. Shifted gradients are
// evaluated exactly for band-limited fields with a spectral phase shift.
// ---------------------------------------------------------------------------

struct GagliardoOptions {
  int radial_nodes = 16;
  int angular_nodes = 12;
};

inline double gagliardo_seminorm(const GridField& f, double alpha, const GagliardoOptions& opt = {}) {
  if (!(alpha > 0.0) || alpha > 0.5)
    throw std::invalid_argument("gagliardo_seminorm: alpha must lie in (0, 1/2]");
  const SpectralField F = to_spectral(f);
  const SpectralField G1 = derivative(F, 0);
  const SpectralField G2 = derivative(F, 1);
  const GridField g1 = to_grid(G1);
  const GridField g2 = to_grid(G2);
  const int n = f.n;
  const double hmin = 2.0 * f.dx();
  if (hmin >= 0.5) throw std::invalid_argument("gagliardo_seminorm: grid too coarse (2 dx >= 1/2)");
  const int R = opt.radial_nodes, A = opt.angular_nodes;
  const double rho = std::pow(0.5 / hmin, 1.0 / R);
  const double lr = std::log(rho);

  auto shifted_grid = [&](const SpectralField& G, double d1, double d2) {
    SpectralField S = G;
    for (int j1 = 0; j1 < n; ++j1) {
      const int s1 = S.signed_index(j1);
      for (int j2 = 0; j2 < n; ++j2) {
        const int s2 = S.signed_index(j2);
        if (s1 == -n / 2 || s2 == -n / 2) {
          S.at(j1, j2) = 0.0;
          continue;
        }
        const double phase = (s1 * d1 + s2 * d2) / S.box;
        S.at(j1, j2) *= std::complex<double>(std::cos(phase), std::sin(phase));
      }
    }
    return to_grid(S);
  };

  std::vector<double> shell(static_cast<std::size_t>(R) * A, 0.0);
  for (int ir = 0; ir < R; ++ir) {
    const double r = hmin * std::pow(rho, ir + 0.5);   // log-midpoint node
    const double dr = r * 2.0 * std::sinh(0.5 * lr);   // exact shell width
    const double wgt = dr * (2.0 * kPi / A) / (r * std::pow(std::log2(1.0 / r), 1.0 - 2.0 * alpha));
    for (int ia = 0; ia < A; ++ia) {
      const double th = 2.0 * kPi * (ia + 0.5) / A;
      const double d1 = r * std::cos(th), d2 = r * std::sin(th);
      const GridField s1 = shifted_grid(G1, d1, d2);
      const GridField s2 = shifted_grid(G2, d1, d2);
      std::vector<double> acc(f.size());
      for (std::size_t i = 0; i < f.size(); ++i) {
        const double e1 = g1.values[i] - s1.values[i];
        const double e2 = g2.values[i] - s2.values[i];
        acc[i] = e1 * e1 + e2 * e2;
      }
      shell[static_cast<std::size_t>(ir) * A + ia] = pairwise_sum(acc) * f.dx() * f.dx() * wgt;
    }
  }
  return std::sqrt(std::max(0.0, pairwise_sum(shell)));
}

/// Cross term of the real-variable seminorm between two fields: the double
/// integral over |x-y| <= 1/2 of
///   (grad fa(x) - grad fa(y)) . (grad fb(x) - grad fb(y)) / weight,
/// with the same polar offset quadrature as gagliardo_seminorm. For fields
/// with disjoint dyadic supports this isolates the scale-interaction term.
inline double gagliardo_cross_term(const GridField& fa, const GridField& fb, double alpha,
                                   const GagliardoOptions& opt = {}) {
  if (!(alpha > 0.0) || alpha > 0.5)
    throw std::invalid_argument("gagliardo_cross_term: alpha must lie in (0, 1/2]");
  if (fa.n != fb.n || fa.box != fb.box) throw std::invalid_argument("gagliardo_cross_term: geometry mismatch");
  const int n = fa.n;
  const SpectralField A1 = derivative(to_spectral(fa), 0), A2 = derivative(to_spectral(fa), 1);
  const SpectralField B1 = derivative(to_spectral(fb), 0), B2 = derivative(to_spectral(fb), 1);
  const GridField a1 = to_grid(A1), a2 = to_grid(A2), b1 = to_grid(B1), b2 = to_grid(B2);
  const double hmin = 2.0 * fa.dx();
  const int R = opt.radial_nodes, A = opt.angular_nodes;
  const double rho = std::pow(0.5 / hmin, 1.0 / R);
  const double lr = std::log(rho);
  auto shifted = [&](const SpectralField& G, double d1, double d2) {
    SpectralField S = G;
    for (int j1 = 0; j1 < n; ++j1) {
      const int s1 = S.signed_index(j1);
      for (int j2 = 0; j2 < n; ++j2) {
        const int s2 = S.signed_index(j2);
        if (s1 == -n / 2 || s2 == -n / 2) {
          S.at(j1, j2) = 0.0;
          continue;
        }
        const double phase = (s1 * d1 + s2 * d2) / S.box;
        S.at(j1, j2) *= std::complex<double>(std::cos(phase), std::sin(phase));
      }
    }
    return to_grid(S);
  };
  std::vector<double> shell(static_cast<std::size_t>(R) * A, 0.0);
  for (int ir = 0; ir < R; ++ir) {
    const double r = hmin * std::pow(rho, ir + 0.5);
    const double dr = r * 2.0 * std::sinh(0.5 * lr);
    const double wgt = dr * (2.0 * kPi / A) / (r * std::pow(std::log2(1.0 / r), 1.0 - 2.0 * alpha));
    for (int ia = 0; ia < A; ++ia) {
      const double th = 2.0 * kPi * (ia + 0.5) / A;
      const double d1 = r * std::cos(th), d2 = r * std::sin(th);
      const GridField sa1 = shifted(A1, d1, d2), sa2 = shifted(A2, d1, d2);
      const GridField sb1 = shifted(B1, d1, d2), sb2 = shifted(B2, d1, d2);
      std::vector<double> acc(fa.size());
      for (std::size_t i = 0; i < fa.size(); ++i) {
        const double ea1 = a1.values[i] - sa1.values[i], ea2 = a2.values[i] - sa2.values[i];
        const double eb1 = b1.values[i] - sb1.values[i], eb2 = b2.values[i] - sb2.values[i];
        acc[i] = ea1 * eb1 + ea2 * eb2;
      }
      shell[static_cast<std::size_t>(ir) * A + ia] = pairwise_sum(acc) * fa.dx() * fa.dx() * wgt;
    }
  }
  return pairwise_sum(shell);
}

// ---------------------------------------------------------------------------
// Interpolation inequality |f|_{H^{t,a}} <= (2s-2t)^{-a} |f|_{H^t}
//                              * log2^a( 3^s ||f||_{H^s}^2 / |f|_{H^t}^2 ).
// ---------------------------------------------------------------------------

struct InterpolationReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

inline InterpolationReport check_interpolation(const SpectralField& F, double s, double t, double alpha) {
  if (!(t >= 0.0 && t < s)) throw std::invalid_argument("check_interpolation: need 0 <= t < s");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("check_interpolation: need alpha in (0,1)");
  const double ht = sobolev_seminorm(F, t);
  if (ht <= 1e-13 * std::max(1.0, F.l2()))
    throw std::invalid_argument("check_interpolation: |f|_{H^t} degenerate");
  NormParams p;
  p.s = t;
  p.alpha = alpha;
  const double lhs = log_sobolev_seminorm(F, p);
  const double hs_sq = sobolev_norm_inhom_sq(F, s);
  const double arg = std::pow(3.0, s) * hs_sq / (ht * ht);
  const double rhs = std::pow(2.0 * s - 2.0 * t, -alpha) * ht * std::pow(std::log2(arg), alpha);
  return {lhs, rhs, lhs / rhs};
}

inline InterpolationReport check_interpolation(const GridField& f, double s, double t, double alpha) {
  return check_interpolation(to_spectral(f), s, t, alpha);
}

/// Verifies h(x) = x log2^a(1/x + 1) is nondecreasing on a log-spaced grid.
inline bool h_monotone_check(double alpha, int npoints = 10000, double xlo = 1e-8, double xhi = 1e8) {
  auto h = [alpha](double x) { return x * std::pow(std::log2(1.0 / x + 1.0), alpha); };
  double prev = h(xlo);
  for (int i = 1; i < npoints; ++i) {
    const double x = xlo * std::pow(xhi / xlo, static_cast<double>(i) / (npoints - 1));
    const double cur = h(x);
    if (cur < prev - 1e-14 * std::max(1.0, std::abs(prev))) return false;
    prev = cur;
  }
  return true;
}

/// W^{N,1} norm: sum of L1 norms of all derivatives up to order N (N <= 3).
inline double wN1_norm(const GridField& f, int N) {
  if (N < 0 || N > 3) throw std::invalid_argument("wN1_norm: N must lie in {0,1,2,3}");
  const SpectralField F = to_spectral(f);
  double total = lp_norm(f, 1.0);
  for (int order = 1; order <= N; ++order) {
    for (int k1 = 0; k1 <= order; ++k1) {
      const int k2 = order - k1;
      SpectralField D = F;
      for (int i = 0; i < k1; ++i) D = derivative(D, 0);
      for (int i = 0; i < k2; ++i) D = derivative(D, 1);
      total += lp_norm(to_grid(D), 1.0);
    }
  }
  return total;
}

}  // namespace logvort
