#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace logvort {

inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
  double x1 = 0.0;
  double x2 = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x1 + o.x1, x2 + o.x2}; }
  Vec2 operator-(const Vec2& o) const { return {x1 - o.x1, x2 - o.x2}; }
  Vec2 operator*(double a) const { return {a * x1, a * x2}; }
  double norm() const { return std::hypot(x1, x2); }
  double norm_inf() const { return std::max(std::abs(x1), std::abs(x2)); }
};

inline Vec2 operator*(double a, const Vec2& v) { return v * a; }

/// 2x2 real matrix, row-major: m[r][c] = d(row component)/d(col coordinate).
struct Mat2 {
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  double det() const { return a11 * a22 - a12 * a21; }
  double norm_inf() const {
    return std::max(std::max(std::abs(a11), std::abs(a12)),
                    std::max(std::abs(a21), std::abs(a22)));
  }
  Mat2 operator*(const Mat2& o) const {
    return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
            a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
  }
  Vec2 operator*(const Vec2& v) const {
    return {a11 * v.x1 + a12 * v.x2, a21 * v.x1 + a22 * v.x2};
  }
  Mat2 operator+(const Mat2& o) const {
    return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
  }
  Mat2 operator*(double s) const { return {s * a11, s * a12, s * a21, s * a22}; }
  Mat2 transpose() const { return {a11, a21, a12, a22}; }
  Mat2 inverse() const {
    const double d = det();
    if (d == 0.0) throw std::runtime_error("Mat2::inverse: singular matrix");
    return {a22 / d, -a12 / d, -a21 / d, a11 / d};
  }
};

/// Global cap on worker threads used by parallel_for (set by the CLI --threads flag).
inline int& max_threads() {
  static int t = 1;
  return t;
}

/// Static-partition parallel map over [0, count). Results must be written to
/// disjoint slots so the outcome is identical for every thread count.
inline void parallel_for(std::int64_t count, const std::function<void(std::int64_t, std::int64_t)>& body) {
  const int nthreads = static_cast<int>(std::max<std::int64_t>(1, std::min<std::int64_t>(max_threads(), count)));
  if (nthreads == 1) {
    body(0, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  const std::int64_t chunk = (count + nthreads - 1) / nthreads;
  for (int t = 0; t < nthreads; ++t) {
    const std::int64_t lo = t * chunk;
    const std::int64_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(body, lo, hi);
  }
  for (auto& th : pool) th.join();
}

/// Pairwise summation in index order; bit-reproducible independent of threading.
inline double pairwise_sum(const double* v, std::size_t count) {
  if (count == 0) return 0.0;
  if (count <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += v[i];
    return s;
  }
  const std::size_t half = count / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, count - half);
}

inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace logvort
