#pragma once

// Test-only helpers: optimal root pairing, convex hull, random polynomials.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <vector>

#include "equidist/poly.hpp"

namespace equidist::testing {

/// Minimum-total-distance assignment between two equal-size point sets
/// (Hungarian algorithm, O(n^3)); returns the largest paired distance.
inline double paired_max_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  const std::size_t n = a.size();
  if (b.size() != n) return std::numeric_limits<double>::infinity();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1), v(n + 1), way_cost(n + 1);
  std::vector<std::size_t> p(n + 1), way(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = std::abs(a[i0 - 1] - b[j - 1]) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double worst = 0.0;
  for (std::size_t j = 1; j <= n; ++j) worst = std::max(worst, std::abs(a[p[j] - 1] - b[j - 1]));
  return worst;
}

/// Convex hull (Andrew's monotone chain), counter-clockwise.
inline std::vector<Complex> convex_hull(std::vector<Complex> pts) {
  std::sort(pts.begin(), pts.end(), [](Complex x, Complex y) {
    return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag());
  });
  if (pts.size() < 3) return pts;
  auto cross = [](Complex o, Complex a, Complex b) {
    return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
  };
  std::vector<Complex> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i - 1]) <= 0) --k;
    hull[k++] = pts[i - 1];
  }
  hull.resize(k - 1);
  return hull;
}

/// Signed distance outside a CCW convex polygon (<= 0 inside).
inline double outside_distance(const std::vector<Complex>& hull, Complex z) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Complex a = hull[i];
    const Complex b = hull[(i + 1) % hull.size()];
    const Complex e = b - a;
    // Outward normal of a CCW edge is (e.imag, -e.real).
    const double d = ((z - a).real() * e.imag() - (z - a).imag() * e.real()) / std::abs(e);
    worst = std::max(worst, d);
  }
  return worst;
}

inline DensePoly random_poly(std::mt19937_64& rng, int degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Complex> c(static_cast<std::size_t>(degree) + 1);
  for (auto& x : c) x = {u(rng), u(rng)};
  if (std::abs(c.back()) < 0.1) c.back() += 0.5;
  return DensePoly(std::move(c));
}

inline double rel_err(Complex got, Complex want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace equidist::testing
